#pragma once

#include <cmath>
#include <stdexcept>

namespace effcap {

// Physical constants of one block-fading link. A frame lasts frame_t seconds,
// carries frame_t*bandwidth_b symbols (one pilot, the rest data), and the
// transmitter spends pbar*frame_t of energy per frame.
//
// Every derived quantity depends on pbar and n0 only through their ratio, so
// scaling both by the same factor leaves all results unchanged.
struct SystemParams {
    double gamma = 1.0;        // mean channel power gain E{|h|^2}
    double n0 = 1.0;           // noise spectral density
    double frame_t = 2e-3;     // frame duration T (s)
    double bandwidth_b = 1e5;  // bandwidth B (Hz)
    double pbar = 1e4;         // average power (energy/s)

    double snr() const { return pbar / (n0 * bandwidth_b); }
    double tb() const { return frame_t * bandwidth_b; }

    // Throws std::domain_error naming the offending field. tb() > 2 is
    // required so that the frame has data symbols left after the pilot.
    void validate() const;
};

inline void SystemParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(gamma)) throw std::domain_error("SystemParams: gamma must be finite and > 0");
    if (!positive(n0)) throw std::domain_error("SystemParams: n0 must be finite and > 0");
    if (!positive(frame_t)) throw std::domain_error("SystemParams: frame_t must be finite and > 0");
    if (!positive(bandwidth_b)) throw std::domain_error("SystemParams: bandwidth_b must be finite and > 0");
    if (!positive(pbar)) throw std::domain_error("SystemParams: pbar must be finite and > 0");
    if (!(tb() > 2.0)) throw std::domain_error("SystemParams: frame_t * bandwidth_b must exceed 2");
    if (!positive(snr())) throw std::domain_error("SystemParams: derived snr must be finite and > 0");
}

// Decay rate theta of the queue-tail distribution, 1/bits. theta == 0 selects
// the relaxed-QoS limit in which only the mean service rate matters.
struct QosExponent {
    double theta = 0.0;

    QosExponent() = default;
    explicit QosExponent(double t) : theta(t) {
        if (!(std::isfinite(t) && t >= 0.0))
            throw std::domain_error("QosExponent: theta must be finite and >= 0");
    }

    bool is_zero() const { return theta == 0.0; }
};

}  // namespace effcap
