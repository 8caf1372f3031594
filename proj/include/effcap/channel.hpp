#pragma once

#include <utility>

#include "effcap/system_params.hpp"

namespace effcap {

// Pilot/data energy split and the MMSE estimation statistics it induces.
struct EstimationStats {
    double rho;      // training fraction in [0,1]
    double e_t;      // pilot energy, rho*pbar*T
    double e_s;      // per-data-symbol energy, (1-rho)*pbar*T/(TB-1)
    double var_est;  // estimate variance sigma^2_hhat
    double var_err;  // estimation-error variance sigma^2_htilde (var_est + var_err == gamma)
    double snr_eff;  // post-estimation effective SNR (0 at rho = 0 or 1)
};

// Splits the per-frame energy budget: (rho*pbar*T, (1-rho)*pbar*T/(TB-1)).
std::pair<double, double> training_energies(const SystemParams& params, double rho);

// MMSE estimate/error variances and effective SNR for a training fraction.
// Computes the effective SNR along two algebraically equal routes and checks
// they agree to 1e-12 relative as a numerical-integrity guarantee.
EstimationStats estimation_stats(const SystemParams& params, double rho);

// Effective SNR as a single rational function of rho and SNR. Equal to
// estimation_stats(...).snr_eff; kept as an independent expression so the two
// routes can cross-check each other.
double snr_eff_rational(const SystemParams& params, double rho);

// Closed-form training fraction maximizing the effective SNR:
// sqrt(eta*(eta+1)) - eta with eta = (gamma*TB*SNR + TB - 1)/(gamma*TB*(TB-2)*SNR).
// Independent of the QoS exponent and of the transmission rate.
double optimal_rho(const SystemParams& params);

// Outage threshold on |w|^2 for a fixed rate r bits/s:
// alpha = (2^(r*T/(TB-1)) - 1)/snr_eff. Zero at r = 0, increasing in r.
double alpha_threshold(double r, double snr_eff, const SystemParams& params);

// P{|w|^2 > alpha} = e^{-alpha}: probability the channel supports the rate
// (ON state). |w|^2 is exponential with mean 1.
double on_probability(double alpha);

// Capacity lower bound for one channel draw:
// C_L = ((TB-1)/T) * log2(1 + snr_eff*w_sq) bits/s.
// (r < C_L) is equivalent to (w_sq > alpha_threshold(r, ...)).
double capacity_lower_bound(double w_sq, double snr_eff, const SystemParams& params);

}  // namespace effcap
