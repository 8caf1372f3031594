#include "effcap/effective_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "effcap/channel.hpp"
#include "effcap/maximize.hpp"

namespace effcap {

namespace {

// Spectral efficiency at a fixed rate with the effective SNR already known.
// Written so that no subtraction of nearly equal quantities ever occurs:
// 1 - e^{-a}(1 - e^{-x}) == (1 - e^{-a}) + e^{-(a+x)}, a sum of positives.
double rate_objective(double r, double snr_eff, double theta, const SystemParams& params) {
    const double x = theta * params.frame_t * r;
    const double alpha = alpha_threshold(r, snr_eff, params);
    if (x < 1e-8) {
        // First-order expansion of the log; identical to the relaxed-QoS
        // objective and immune to 1 - e^{-x} rounding at tiny x.
        return r / params.bandwidth_b * std::exp(-alpha);
    }
    const double theta_tb = theta * params.frame_t * params.bandwidth_b;
    const double off_mass = std::exp(-alpha) * -std::expm1(-x);
    if (off_mass < 0.5) return -std::log1p(-off_mass) / theta_tb;
    const double inner = -std::expm1(-alpha) + std::exp(-alpha - x);
    return -std::log(inner) / theta_tb;
}

double zero_theta_rate_objective(double r, double snr_eff, const SystemParams& params) {
    return r / params.bandwidth_b * std::exp(-alpha_threshold(r, snr_eff, params));
}

}  // namespace

double objective(double r, double rho, QosExponent theta, const SystemParams& params) {
    if (theta.is_zero())
        throw std::domain_error("objective: theta == 0; use zero_theta_objective");
    if (!(r >= 0.0)) throw std::domain_error("objective: rate must be >= 0");
    const double snr_eff = estimation_stats(params, rho).snr_eff;
    if (r == 0.0) return 0.0;
    return rate_objective(r, snr_eff, theta.theta, params);
}

double zero_theta_objective(double r, double rho, const SystemParams& params) {
    if (!(r >= 0.0)) throw std::domain_error("zero_theta_objective: rate must be >= 0");
    const double snr_eff = estimation_stats(params, rho).snr_eff;
    if (r == 0.0) return 0.0;
    return zero_theta_rate_objective(r, snr_eff, params);
}

EffCapSolution solve_for_snr_eff(QosExponent theta, double snr_eff, double rho,
                                 const SystemParams& params) {
    params.validate();
    if (!(snr_eff > 0.0)) throw std::domain_error("solve_for_snr_eff: snr_eff must be > 0");

    // Natural rate scales: r1 puts the outage threshold at 1, r_theta is where
    // the QoS penalty e^{-theta*T*r} turns over. The maximizer sits within a
    // few decades of min(r1, r_theta) for every regime, so the scan window is
    // anchored there instead of at a fixed multiple of the bandwidth (a fixed
    // window loses the peak once snr_eff drops below ~1e-6).
    const double r1 = (params.tb() - 1.0) / params.frame_t * std::log1p(snr_eff) /
                      std::numbers::ln2;
    const double r_theta =
        theta.is_zero() ? r1 : 1.0 / (theta.theta * params.frame_t);
    const double lo = 1e-5 * std::min(r1, r_theta);
    const double hi = 1e4 * r1;

    auto f = [&](double r) {
        return theta.is_zero() ? zero_theta_rate_objective(r, snr_eff, params)
                               : rate_objective(r, snr_eff, theta.theta, params);
    };
    const MaximizeResult peak = maximize_on_log_grid(f, lo, hi, 768, 1e-10);

    EffCapSolution sol;
    sol.re = peak.value;
    sol.r_opt = peak.x;
    sol.rho_opt = rho;
    sol.alpha_opt = alpha_threshold(peak.x, snr_eff, params);
    sol.theta = theta.theta;
    return sol;
}

EffCapSolution solve(QosExponent theta, const SystemParams& params) {
    const double rho = optimal_rho(params);
    const EstimationStats stats = estimation_stats(params, rho);
    return solve_for_snr_eff(theta, stats.snr_eff, rho, params);
}

double bit_energy(const SystemParams& params, double re) {
    params.validate();
    if (!(re >= 0.0)) throw std::domain_error("bit_energy: re must be >= 0");
    if (re == 0.0) return std::numeric_limits<double>::infinity();
    return params.snr() / re;
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace effcap
