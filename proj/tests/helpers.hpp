#pragma once

#include <cmath>
#include <random>

#include "effcap/system_params.hpp"

namespace effcap::test {

// Reference configuration used across the suites.
inline SystemParams reference_params() {
    SystemParams p;
    p.gamma = 1.0;
    p.n0 = 1.0;
    p.frame_t = 2e-3;
    p.bandwidth_b = 1e5;
    p.pbar = 1e4;  // snr = 0.1
    return p;
}

inline SystemParams with_snr(SystemParams p, double snr) {
    p.pbar = snr * p.n0 * p.bandwidth_b;
    return p;
}

inline double log_uniform(std::mt19937_64& gen, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(gen));
}

}  // namespace effcap::test
