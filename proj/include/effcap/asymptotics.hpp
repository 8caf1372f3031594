#pragma once

#include <span>
#include <vector>

#include "effcap/effective_capacity.hpp"
#include "effcap/system_params.hpp"

namespace effcap {

// Constants of the wideband limit (bandwidth -> infinity at fixed power).
struct WidebandConstants {
    double phi;         // limiting effective-SNR-per-unit-SNR^2 coefficient
    double delta;       // theta*T*pbar/(n0*ln2)
    double alpha_star;  // limiting optimal outage threshold, in (0,1]
    double xi;          // 1 - e^{-a*}(1 - e^{-theta*T*phi*a*/ln2})
};

struct WidebandResult {
    double ebn0_min_linear;  // minimum bit energy, linear
    double ebn0_min_db;      // same in dB
    double s0;               // wideband slope
    WidebandConstants constants;
};

// phi = (gamma*pbar/n0) * (sqrt(1 + n0/(gamma*pbar*T)) - sqrt(n0/(gamma*pbar*T)))^2.
// Always in (0, gamma*pbar/n0).
double phi(const SystemParams& params);

// Limiting optimal threshold: (ln2/(theta*T*phi)) * ln(1 + theta*T*phi/ln2)
// for theta > 0; the analytic limit 1 at theta == 0.
double alpha_star(QosExponent theta, const SystemParams& params);

// Minimum bit energy and wideband slope. theta == 0 uses the analytic limits
//   Eb/N0_min = (pbar/(n0*phi)) * e * ln2,   S0 = phi / (e * K0),
// with K0 = (sqrt(1 + gamma*pbar*T/n0) - 1)/T + phi/2; these are the
// xi -> 1 expansions of the theta > 0 closed forms.
WidebandResult wideband_result(QosExponent theta, const SystemParams& params);

// Rate-form constants of the optimally trained effective SNR at a given SNR
// (bandwidth and frame duration fixed):
//   low_power_phi = rho_opt*(1-rho_opt)*gamma^2*T^2*B^2
//   low_power_psi = (1 + (TB-2)*rho_opt)*gamma*TB
//   snr_eff_opt   = low_power_phi*SNR^2 / (low_power_psi*SNR + TB - 1)
double low_power_phi(const SystemParams& params, double snr);
double low_power_psi(const SystemParams& params, double snr);
double snr_eff_opt(const SystemParams& params, double snr);

struct LowPowerPoint {
    double snr;
    double bit_energy;  // linear
};

// Full per-SNR solution of the low-power sweep (bandwidth fixed, power varied).
struct LowPowerSolution {
    double snr;
    double bit_energy;  // linear
    EffCapSolution solution;
};

LowPowerSolution low_power_point(QosExponent theta, const SystemParams& params_template,
                                 double snr);

// Bit energy across a strictly descending positive SNR grid, with the average
// power varied and the bandwidth held fixed. Past the minimizing SNR the bit
// energy grows without bound as the power vanishes.
std::vector<LowPowerPoint> low_power_scan(QosExponent theta,
                                          const SystemParams& params_template,
                                          std::span<const double> snr_grid);

}  // namespace effcap
