#include "effcap/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace effcap {

std::pair<double, double> training_energies(const SystemParams& params, double rho) {
    params.validate();
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("training_energies: rho must be in [0,1]");
    const double frame_energy = params.pbar * params.frame_t;
    const double pilot = rho * frame_energy;
    const double data = (1.0 - rho) * frame_energy / (params.tb() - 1.0);
    return {pilot, data};
}

double snr_eff_rational(const SystemParams& params, double rho) {
    params.validate();
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::domain_error("snr_eff_rational: rho must be in [0,1]");
    const double tb = params.tb();
    const double snr = params.snr();
    const double g = params.gamma;
    const double num = rho * (1.0 - rho) * g * g * tb * tb * snr * snr;
    const double den = rho * g * tb * (tb - 2.0) * snr + g * tb * snr + tb - 1.0;
    return num / den;
}

EstimationStats estimation_stats(const SystemParams& params, double rho) {
    const auto [e_t, e_s] = training_energies(params, rho);
    const double g = params.gamma;
    const double n0 = params.n0;

    const double denom = g * e_t + n0;
    const double var_est = g * g * e_t / denom;
    const double var_err = g * n0 / denom;
    const double snr_eff = e_s * var_est / (var_err * e_s + n0);

    // Cross-check against the rational form in (rho, SNR). Both routes are
    // sums/products of positive terms, so disagreement beyond rounding noise
    // means a real defect, not cancellation.
    const double ref = snr_eff_rational(params, rho);
    const double scale = std::max(snr_eff, ref);
    if (scale > 0.0 && std::abs(snr_eff - ref) > 1e-12 * scale)
        throw std::logic_error("estimation_stats: effective-SNR routes disagree beyond 1e-12");

    return EstimationStats{rho, e_t, e_s, var_est, var_err, snr_eff};
}

double optimal_rho(const SystemParams& params) {
    params.validate();
    const double tb = params.tb();
    if (!(tb > 2.0)) throw std::domain_error("optimal_rho: requires TB > 2");
    const double snr = params.snr();
    const double g = params.gamma;
    const double eta = (g * tb * snr + tb - 1.0) / (g * tb * (tb - 2.0) * snr);
    return std::sqrt(eta * (eta + 1.0)) - eta;
}

double alpha_threshold(double r, double snr_eff, const SystemParams& params) {
    params.validate();
    if (!(r >= 0.0)) throw std::domain_error("alpha_threshold: rate must be >= 0");
    if (!(snr_eff > 0.0)) throw std::domain_error("alpha_threshold: snr_eff must be > 0");
    if (r == 0.0) return 0.0;
    // expm1 keeps the threshold accurate when the per-symbol rate is tiny.
    return std::expm1(r * params.frame_t / (params.tb() - 1.0) * std::numbers::ln2) / snr_eff;
}

double on_probability(double alpha) {
    if (!(alpha >= 0.0)) throw std::domain_error("on_probability: alpha must be >= 0");
    return std::exp(-alpha);
}

double capacity_lower_bound(double w_sq, double snr_eff, const SystemParams& params) {
    params.validate();
    if (!(w_sq >= 0.0)) throw std::domain_error("capacity_lower_bound: w_sq must be >= 0");
    if (!(snr_eff >= 0.0)) throw std::domain_error("capacity_lower_bound: snr_eff must be >= 0");
    return (params.tb() - 1.0) / params.frame_t * std::log2(1.0 + snr_eff * w_sq);
}

}  // namespace effcap
