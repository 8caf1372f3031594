#pragma once

#include "effcap/system_params.hpp"

namespace effcap {

// Result of maximizing the normalized effective capacity over the fixed rate.
struct EffCapSolution {
    double re;         // spectral efficiency, bits/s/Hz
    double r_opt;      // maximizing fixed transmission rate, bits/s
    double rho_opt;    // training fraction used
    double alpha_opt;  // outage threshold at (r_opt, rho_opt)
    double theta;      // QoS exponent solved for
};

// Normalized effective capacity of the ON/OFF service at fixed rate r and
// training fraction rho, for theta > 0:
//   -(1/(theta*T*B)) * ln(1 - e^{-alpha(r,rho)} * (1 - e^{-theta*T*r})).
// theta == 0 is a domain error here; use zero_theta_objective.
double objective(double r, double rho, QosExponent theta, const SystemParams& params);

// Relaxed-QoS limit: the mean service rate (r/B) * e^{-alpha(r,rho)}.
double zero_theta_objective(double r, double rho, const SystemParams& params);

// Maximizes the spectral efficiency over r with rho pinned to the closed-form
// optimal training fraction (the split is exact: rho enters only through the
// effective SNR, which the closed form maximizes for every r and theta).
EffCapSolution solve(QosExponent theta, const SystemParams& params);

// Same rate maximization with the effective SNR (and the rho it came from)
// supplied by the caller. Used by the low-power sweep, where snr_eff comes
// from a closed form rather than from estimation_stats.
EffCapSolution solve_for_snr_eff(QosExponent theta, double snr_eff, double rho,
                                 const SystemParams& params);

// Energy per reliably delivered bit: SNR / re, linear scale. re == 0 yields
// +infinity (the low-power regime legitimately produces unbounded bit energy).
double bit_energy(const SystemParams& params, double re);

// 10*log10(x): energy ratios to dB.
double to_db(double linear);

}  // namespace effcap
