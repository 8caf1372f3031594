#include "effcap/queue_sim.hpp"

#include <algorithm>
#include <cmath>

#include "effcap/channel.hpp"
#include "effcap/rng.hpp"

namespace effcap {

namespace {

// Pilot passes must never share draws with measurement runs; they live in a
// far-away stream band.
constexpr std::uint64_t kPilotStreamOffset = 1u << 20;

QueueSummary simulate_impl(const SimConfig& cfg, const SystemParams& params,
                           std::vector<double>* trace) {
    params.validate();
    cfg.validate();

    const double snr_eff = estimation_stats(params, cfg.rho).snr_eff;
    const double alpha = alpha_threshold(cfg.r, snr_eff, params);
    const double service_on = cfg.r * params.frame_t;  // bits per ON frame
    const double arrival = cfg.arrival_per_frame;
    const std::uint64_t warmup = cfg.warmup_frames();

    QueueSummary s;
    s.q_levels = cfg.q_levels;
    s.exceed_counts.assign(cfg.q_levels.size(), 0);
    s.alpha = alpha;
    s.stable = arrival < service_on * std::exp(-alpha);
    s.arrival_per_frame = arrival;
    s.r = cfg.r;
    s.rho = cfg.rho;
    s.seed = cfg.seed;

    if (trace) {
        trace->clear();
        trace->reserve(cfg.frames - warmup);
    }

    FrameRng rng(cfg.seed, cfg.stream);
    double q = 0.0;
    double service_sum = 0.0;
    std::uint64_t on_frames = 0;
    bool prev_on = false;
    bool have_prev = false;

    const std::size_t n_levels = cfg.q_levels.size();
    const double* levels = cfg.q_levels.data();

    for (std::uint64_t n = 0; n < cfg.frames; ++n) {
        const bool on = rng.exponential() > alpha;
        const double service = on ? service_on : 0.0;
        q = std::max(q + arrival - service, 0.0);

        if (n >= warmup) {
            on_frames += on;
            service_sum += service;
            for (std::size_t k = 0; k < n_levels; ++k) {
                if (q >= levels[k])
                    ++s.exceed_counts[k];
                else
                    break;
            }
            if (have_prev) {
                if (prev_on) {
                    ++s.prev_on;
                    s.on_after_on += on;
                } else {
                    ++s.prev_off;
                    s.on_after_off += on;
                }
            }
            if (trace) trace->push_back(q);
            prev_on = on;
            have_prev = true;
        }
    }

    s.frames_counted = cfg.frames - warmup;
    s.final_q = q;
    if (s.frames_counted > 0) {
        s.on_fraction = static_cast<double>(on_frames) / s.frames_counted;
        s.mean_service = service_sum / s.frames_counted;
    }
    return s;
}

}  // namespace

void SimConfig::validate() const {
    if (frames == 0) throw std::domain_error("SimConfig: frames must be > 0");
    if (warmup_frames() >= frames)
        throw std::domain_error("SimConfig: warmup must be smaller than frames");
    if (!(arrival_per_frame >= 0.0))
        throw std::domain_error("SimConfig: arrival_per_frame must be >= 0");
    if (!(r >= 0.0)) throw std::domain_error("SimConfig: r must be >= 0");
    if (!(rho > 0.0 && rho < 1.0))
        throw std::domain_error("SimConfig: rho must be in (0,1)");
    for (std::size_t i = 0; i < q_levels.size(); ++i) {
        if (!(q_levels[i] > 0.0))
            throw std::domain_error("SimConfig: q_levels must be positive");
        if (i > 0 && !(q_levels[i] > q_levels[i - 1]))
            throw std::domain_error("SimConfig: q_levels must be strictly increasing");
    }
}

QueueSummary simulate(const SimConfig& config, const SystemParams& params) {
    return simulate_impl(config, params, nullptr);
}

TailEstimate estimate_decay(const QueueSummary& summary) {
    if (!summary.stable)
        throw TailFitError(
            "estimate_decay: unstable configuration (arrival >= mean service); "
            "refusing tail fit");
    if (summary.frames_counted == 0)
        throw TailFitError("estimate_decay: no post-warmup frames");

    TailEstimate est;
    est.stable = true;
    std::vector<double> y;
    for (std::size_t i = 0; i < summary.q_levels.size(); ++i) {
        if (summary.exceed_counts[i] < 100) continue;  // too noisy to use
        est.q_used.push_back(summary.q_levels[i]);
        est.counts.push_back(summary.exceed_counts[i]);
        y.push_back(std::log(static_cast<double>(summary.exceed_counts[i]) /
                             static_cast<double>(summary.frames_counted)));
    }
    if (est.q_used.size() < 3)
        throw TailFitError("estimate_decay: only " + std::to_string(est.q_used.size()) +
                           " of " + std::to_string(summary.q_levels.size()) +
                           " thresholds have >= 100 exceedances; need >= 3");

    const std::size_t n = est.q_used.size();
    double qm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        qm += est.q_used[i];
        ym += y[i];
    }
    qm /= n;
    ym /= n;
    double sqq = 0.0, sqy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dq = est.q_used[i] - qm;
        const double dy = y[i] - ym;
        sqq += dq * dq;
        sqy += dq * dy;
        syy += dy * dy;
    }
    if (!(sqq > 0.0) || !(syy > 0.0))
        throw TailFitError("estimate_decay: degenerate tail (no spread in thresholds or counts)");

    const double slope = sqy / sqq;
    est.theta_hat = -slope;
    est.intercept = ym - slope * qm;
    est.r_squared = (sqy * sqy) / (sqq * syy);
    return est;
}

ValidationResult validate_theta(QosExponent theta, const SystemParams& params,
                                double safety, const SimOverrides& overrides) {
    if (theta.is_zero() || !(theta.theta > 0.0))
        throw std::domain_error("validate_theta: theta must be > 0");
    if (!(safety > 0.0 && safety <= 1.0))
        throw std::domain_error("validate_theta: safety must be in (0,1]");

    ValidationResult res;
    res.theta = theta.theta;
    res.solution = solve(theta, params);

    SimConfig cfg;
    cfg.frames = overrides.frames;
    cfg.warmup = overrides.warmup;
    cfg.seed = overrides.seed;
    cfg.stream = overrides.stream;
    cfg.r = res.solution.r_opt;
    cfg.rho = res.solution.rho_opt;
    cfg.arrival_per_frame =
        safety * res.solution.re * params.frame_t * params.bandwidth_b;

    if (!overrides.q_levels.empty()) {
        cfg.q_levels = overrides.q_levels;
    } else {
        // Pilot pass to pick the fit window [median nonzero Q, level with
        // ~1000 expected exceedances in the main run].
        SimConfig pilot = cfg;
        pilot.frames = std::min(cfg.frames,
                                std::clamp<std::uint64_t>(cfg.frames / 10, 100'000, 2'000'000));
        pilot.warmup.reset();
        pilot.stream = overrides.stream + kPilotStreamOffset;
        std::vector<double> trace;
        simulate_impl(pilot, params, &trace);

        std::vector<double> nonzero;
        nonzero.reserve(trace.size());
        for (double v : trace)
            if (v > 0.0) nonzero.push_back(v);
        if (nonzero.size() < 1000)
            throw TailFitError(
                "validate_theta: queue almost never backs up at this arrival; "
                "no tail to fit");

        auto quantile = [](std::vector<double>& v, double p) {
            const std::size_t k =
                std::min(v.size() - 1, static_cast<std::size_t>(p * v.size()));
            std::nth_element(v.begin(), v.begin() + k, v.end());
            return v[k];
        };
        const double q_lo = quantile(nonzero, 0.5);
        const double p_hi =
            1000.0 / static_cast<double>(cfg.frames - cfg.warmup_frames());
        std::vector<double> all(trace);
        const double q_hi = quantile(all, 1.0 - p_hi);
        // Below one service quantum the queue is sawtooth head, not the
        // large-deviations tail; a window stuck there means the arrival is too
        // small to ever back the queue up.
        if (q_hi < 0.5 * cfg.r * params.frame_t)
            throw TailFitError(
                "validate_theta: queue excursions stay below the per-frame "
                "service quantum; no tail to fit");
        if (!(q_hi > q_lo))
            throw TailFitError(
                "validate_theta: tail window degenerate (q_hi <= median); "
                "no tail to fit");

        const int n = std::max(overrides.n_levels, 3);
        for (int i = 0; i < n; ++i)
            cfg.q_levels.push_back(q_lo + (q_hi - q_lo) * i / (n - 1));
    }

    res.summary = simulate(cfg, params);
    res.tail = estimate_decay(res.summary);
    res.theta_hat = res.tail.theta_hat;
    res.ratio = res.theta_hat / res.theta;
    return res;
}

}  // namespace effcap
