#include "effcap/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "effcap/channel.hpp"

namespace effcap {

namespace {
constexpr double kLn2 = std::numbers::ln2;
}

double phi(const SystemParams& params) {
    params.validate();
    const double gp = params.gamma * params.pbar / params.n0;
    const double inv = 1.0 / (gp * params.frame_t);  // n0/(gamma*pbar*T)
    const double root = std::sqrt(1.0 + inv) - std::sqrt(inv);
    return gp * root * root;
}

double alpha_star(QosExponent theta, const SystemParams& params) {
    if (theta.is_zero()) {
        params.validate();
        return 1.0;
    }
    const double x = theta.theta * params.frame_t * phi(params) / kLn2;
    if (x < 1e-8) return 1.0 - x / 2.0 + x * x / 3.0;  // ln(1+x)/x series
    return std::log1p(x) / x;
}

WidebandResult wideband_result(QosExponent theta, const SystemParams& params) {
    const double ph = phi(params);
    const double pn0 = params.pbar / params.n0;
    const double t = params.frame_t;
    const double gpt = params.gamma * pn0 * t;

    WidebandResult res;
    res.constants.phi = ph;

    if (theta.is_zero()) {
        res.constants.delta = 0.0;
        res.constants.alpha_star = 1.0;
        res.constants.xi = 1.0;
        res.ebn0_min_linear = pn0 / ph * std::numbers::e * kLn2;
        const double k0 = (std::sqrt(1.0 + gpt) - 1.0) / t + ph / 2.0;
        res.s0 = ph / (std::numbers::e * k0);
    } else {
        const double th = theta.theta;
        const double ast = alpha_star(theta, params);
        const double x = th * t * ph / kLn2;
        // 1 - xi computed directly as a product of positives; xi itself can be
        // arbitrarily close to 1 at small theta.
        const double one_minus_xi = std::exp(-ast) * -std::expm1(-x * ast);
        const double xi = 1.0 - one_minus_xi;
        const double ln_xi = std::log1p(-one_minus_xi);
        res.constants.delta = th * t * pn0 / kLn2;
        res.constants.alpha_star = ast;
        res.constants.xi = xi;
        res.ebn0_min_linear = -th * t * pn0 / ln_xi;  // == -delta*ln2/ln(xi)
        const double k = (std::sqrt(1.0 + gpt) - 1.0) / t + ph * ast / 2.0;
        res.s0 = xi * ln_xi * ln_xi * kLn2 / (th * t * ast * one_minus_xi * k);
    }
    res.ebn0_min_db = to_db(res.ebn0_min_linear);
    return res;
}

double low_power_phi(const SystemParams& params, double snr) {
    params.validate();
    if (!(snr > 0.0)) throw std::domain_error("low_power_phi: snr must be > 0");
    SystemParams p = params;
    p.pbar = snr * params.n0 * params.bandwidth_b;
    const double rho = optimal_rho(p);
    const double g = params.gamma;
    const double tb = params.tb();
    return rho * (1.0 - rho) * g * g * tb * tb;
}

double low_power_psi(const SystemParams& params, double snr) {
    params.validate();
    if (!(snr > 0.0)) throw std::domain_error("low_power_psi: snr must be > 0");
    SystemParams p = params;
    p.pbar = snr * params.n0 * params.bandwidth_b;
    const double rho = optimal_rho(p);
    const double tb = params.tb();
    return (1.0 + (tb - 2.0) * rho) * params.gamma * tb;
}

double snr_eff_opt(const SystemParams& params, double snr) {
    const double ph = low_power_phi(params, snr);
    const double ps = low_power_psi(params, snr);
    return ph * snr * snr / (ps * snr + params.tb() - 1.0);
}

LowPowerSolution low_power_point(QosExponent theta, const SystemParams& params_template,
                                 double snr) {
    if (!(snr > 0.0)) throw std::domain_error("low_power_point: snr must be > 0");
    SystemParams p = params_template;
    p.pbar = snr * p.n0 * p.bandwidth_b;
    p.validate();
    const double snr_eff = snr_eff_opt(p, snr);
    const EffCapSolution sol = solve_for_snr_eff(theta, snr_eff, optimal_rho(p), p);
    return LowPowerSolution{snr, bit_energy(p, sol.re), sol};
}

std::vector<LowPowerPoint> low_power_scan(QosExponent theta,
                                          const SystemParams& params_template,
                                          std::span<const double> snr_grid) {
    if (snr_grid.empty()) throw std::domain_error("low_power_scan: empty snr grid");
    for (size_t i = 0; i < snr_grid.size(); ++i) {
        if (!(snr_grid[i] > 0.0))
            throw std::domain_error("low_power_scan: snr grid must be positive");
        if (i > 0 && !(snr_grid[i] < snr_grid[i - 1]))
            throw std::domain_error("low_power_scan: snr grid must be strictly descending");
    }
    std::vector<LowPowerPoint> out;
    out.reserve(snr_grid.size());
    for (double snr : snr_grid) {
        const LowPowerSolution p = low_power_point(theta, params_template, snr);
        out.push_back(LowPowerPoint{p.snr, p.bit_energy});
    }
    return out;
}

}  // namespace effcap
