#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "effcap/effective_capacity.hpp"
#include "effcap/system_params.hpp"

namespace effcap {

// Tail estimation refused or impossible (unstable queue, too few usable
// thresholds, empty tail).
class TailFitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// One replication of the frame-level ON/OFF queue.
struct SimConfig {
    std::uint64_t frames = 10'000'000;
    double arrival_per_frame = 0.0;  // constant arrival, bits per frame
    double r = 0.0;                  // fixed transmission rate, bits/s
    double rho = 0.5;                // training fraction, in (0,1)
    std::uint64_t seed = 1;          // root PRNG seed
    std::uint64_t stream = 0;        // RNG stream; one stream per replication
    std::optional<std::uint64_t> warmup;  // frames discarded; default 1% of frames
    std::vector<double> q_levels;    // strictly increasing positive thresholds, bits

    std::uint64_t warmup_frames() const {
        return warmup ? *warmup : frames / 100;
    }
    void validate() const;
};

// Post-warmup statistics of one replication.
struct QueueSummary {
    std::uint64_t frames_counted = 0;        // frames contributing to statistics
    std::vector<double> q_levels;
    std::vector<std::uint64_t> exceed_counts;  // frames with Q >= q_level
    double on_fraction = 0.0;                // empirical P(channel ON)
    double mean_service = 0.0;               // empirical bits/frame
    double final_q = 0.0;                    // queue length after the last frame
    std::uint64_t on_after_on = 0;           // transition tallies for the
    std::uint64_t prev_on = 0;               // memoryless-service check
    std::uint64_t on_after_off = 0;
    std::uint64_t prev_off = 0;
    double alpha = 0.0;                      // outage threshold used
    bool stable = false;                     // arrival < r*T*e^{-alpha}
    // inputs echoed for reporting
    double arrival_per_frame = 0.0;
    double r = 0.0;
    double rho = 0.0;
    std::uint64_t seed = 0;
};

// Fitted queue-tail decay rate.
struct TailEstimate {
    double theta_hat = 0.0;   // negative slope of ln P(Q >= q) vs q
    double r_squared = 0.0;
    double intercept = 0.0;   // reported only; no claim is made about it
    std::vector<double> q_used;
    std::vector<std::uint64_t> counts;  // exceedance counts behind the fit
    bool stable = false;
};

// Lindley recursion at frame granularity: per frame draw |w|^2 ~ Exp(1),
// serve r*T bits when |w|^2 > alpha (ON) and nothing otherwise, then
// Q <- max(Q + arrival - service, 0) from Q = 0.
QueueSummary simulate(const SimConfig& config, const SystemParams& params);

// Least-squares fit of ln(empirical P(Q >= q)) against q over the thresholds
// with at least 100 exceedances. Needs a stable summary and >= 3 usable
// thresholds; throws TailFitError otherwise.
TailEstimate estimate_decay(const QueueSummary& summary);

struct SimOverrides {
    std::uint64_t frames = 10'000'000;
    std::optional<std::uint64_t> warmup;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::vector<double> q_levels;  // empty: pick a window from a pilot run
    int n_levels = 12;             // thresholds when auto-picking
};

struct ValidationResult {
    double theta = 0.0;      // targeted decay rate
    double theta_hat = 0.0;  // simulated decay rate
    double ratio = 0.0;      // theta_hat / theta
    EffCapSolution solution;
    QueueSummary summary;
    TailEstimate tail;
};

// Closes the loop between the effective-capacity solution and the simulated
// queue: r and rho come from solve(theta), the arrival is safety * R_E * T * B
// bits/frame, and the fitted tail exponent is compared against theta.
// When no thresholds are given, a pilot run (a tenth of the frames, its own
// RNG stream) picks the fit window: from the median nonzero queue length up to
// the level expected to keep >= ~1000 exceedances in the main run.
ValidationResult validate_theta(QosExponent theta, const SystemParams& params,
                                double safety, const SimOverrides& overrides = {});

}  // namespace effcap
