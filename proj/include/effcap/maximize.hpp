#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace effcap {

struct MaximizeResult {
    double x;
    double value;
};

// Maximizes f over [lo, hi] (lo, hi > 0): log-spaced scan to bracket the peak,
// then golden-section refinement in log space down to rel_tol on x. The scan
// guards against missing a narrow peak; the refinement assumes the bracketed
// cell is unimodal.
template <class F>
MaximizeResult maximize_on_log_grid(F&& f, double lo, double hi, int grid_points,
                                    double rel_tol = 1e-10) {
    if (!(lo > 0.0 && hi > lo)) throw std::domain_error("maximize_on_log_grid: need 0 < lo < hi");
    if (grid_points < 4) throw std::domain_error("maximize_on_log_grid: need >= 4 grid points");

    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    const double step = (lhi - llo) / (grid_points - 1);

    int best_i = 0;
    double best_v = f(lo);
    for (int i = 1; i < grid_points; ++i) {
        const double v = f(std::exp(llo + i * step));
        if (v > best_v) {
            best_v = v;
            best_i = i;
        }
    }

    // Golden-section on log(x) inside the two cells around the best grid point.
    double a = llo + (best_i > 0 ? (best_i - 1) : 0) * step;
    double b = llo + (best_i < grid_points - 1 ? (best_i + 1) : grid_points - 1) * step;
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(std::exp(x1));
    double f2 = f(std::exp(x2));
    while (b - a > rel_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(std::exp(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(std::exp(x1));
        }
    }

    const double xm = std::exp(0.5 * (a + b));
    const double vm = f(xm);
    MaximizeResult best{xm, vm};
    if (f1 > best.value) best = {std::exp(x1), f1};
    if (f2 > best.value) best = {std::exp(x2), f2};
    if (best_v > best.value) best = {std::exp(llo + best_i * step), best_v};
    return best;
}

}  // namespace effcap
