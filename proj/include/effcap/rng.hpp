#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace effcap {

// splitmix64 step; used only to turn (seed, stream) pairs into well-mixed
// engine seeds so replications get decorrelated streams from one root seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stream discipline: stream k of root seed s is seeded with the (k+1)-th
// splitmix64 output of s. Replication i uses stream i; auxiliary passes
// (threshold-picking pilots) use a stream offset so they never share draws
// with the measurement run.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed;
    std::uint64_t z = 0;
    for (std::uint64_t i = 0; i <= stream; ++i) z = splitmix64(state);
    return z;
}

// mt19937_64 + inverse-CDF exponential draws. Both are fully specified, so a
// given (seed, stream) reproduces bit-identical sequences on any platform.
class FrameRng {
  public:
    FrameRng(std::uint64_t seed, std::uint64_t stream)
        : gen_(derive_stream_seed(seed, stream)) {}

    // Exp(1) via inverse CDF; the uniform lands in (0,1] so log never sees 0.
    double exponential() {
        const std::uint64_t bits = gen_();
        const double u = static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
        return -std::log(u);
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace effcap
