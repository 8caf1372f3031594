#include "effcap/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "effcap/asymptotics.hpp"
#include "effcap/channel.hpp"
#include "effcap/effective_capacity.hpp"
#include "effcap/queue_sim.hpp"

namespace effcap {

namespace {

// ---------------------------------------------------------------------------
// small utilities
// ---------------------------------------------------------------------------

std::string fmt(double v) {
    char buf[48];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip
    return std::string(buf, ptr);
}

std::string fmt(std::uint64_t v) { return std::to_string(v); }

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

// Runs fn(0..n-1) on a small thread pool; results must go into per-index
// slots. The first exception wins and is rethrown after all threads join.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers = std::min<std::size_t>(hw ? hw : 1, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e)
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e)
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an integer");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t nxt = s.find(sep, pos);
        out.push_back(s.substr(pos, nxt - pos));
        if (nxt == std::string::npos) break;
        pos = nxt + 1;
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// ---------------------------------------------------------------------------
// config assembly
// ---------------------------------------------------------------------------

const std::map<std::string, RunMode> kModes = {
    {"ebn0-lowpower", RunMode::kEbn0LowPower},
    {"ebn0-wideband", RunMode::kEbn0Wideband},
    {"wideband-table", RunMode::kWidebandTable},
    {"optimal-rho", RunMode::kOptimalRho},
    {"validate-queue", RunMode::kValidateQueue},
};

std::vector<KeyValue> parse_kv_text(const std::string& text) {
    std::vector<KeyValue> pairs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        pairs.emplace_back(key, value);
    }
    return pairs;
}

RunConfig build_config(const std::vector<KeyValue>& doc,
                       std::span<const KeyValue> overrides) {
    // Duplicates within the document are mistakes; overrides may shadow.
    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : doc) {
        if (!kv.emplace(k, v).second)
            throw ConfigError("duplicate key '" + k + "' in config document");
    }
    for (const auto& [k, v] : overrides) kv[k] = v;

    RunConfig cfg;
    bool have_mode = false;
    bool have_sweep = false;
    SweepAxis axis;
    bool have_points = false, have_start = false, have_stop = false;

    for (const auto& [key, value] : kv) {
        if (key == "mode") {
            const auto it = kModes.find(value);
            if (it == kModes.end())
                throw ConfigError("key 'mode': unknown mode '" + value + "'");
            cfg.mode = it->second;
            have_mode = true;
        } else if (key == "gamma") {
            cfg.params.gamma = parse_double(key, value);
        } else if (key == "n0") {
            cfg.params.n0 = parse_double(key, value);
        } else if (key == "frame_t") {
            cfg.params.frame_t = parse_double(key, value);
        } else if (key == "bandwidth_b") {
            cfg.params.bandwidth_b = parse_double(key, value);
        } else if (key == "pbar") {
            cfg.params.pbar = parse_double(key, value);
        } else if (key == "theta_list") {
            cfg.theta_list.clear();
            for (const auto& item : split(value, ',')) {
                const double th = parse_double(key, trim(item));
                if (!(th >= 0.0))
                    throw ConfigError("key 'theta_list': theta must be >= 0, got " + item);
                cfg.theta_list.push_back(th);
            }
            if (cfg.theta_list.empty())
                throw ConfigError("key 'theta_list': empty list");
        } else if (key == "sweep.variable") {
            const auto names = split(value, ',');
            if (names.size() > 1)
                throw ConfigError("key 'sweep.variable': a sweep covers exactly one variable, got '" +
                                  value + "'");
            axis.variable = trim(names[0]);
            if (axis.variable != "snr" && axis.variable != "bandwidth")
                throw ConfigError("key 'sweep.variable': must be 'snr' or 'bandwidth', got '" +
                                  axis.variable + "'");
            have_sweep = true;
        } else if (key == "sweep.start") {
            axis.start = parse_double(key, value);
            have_start = have_sweep = true;
        } else if (key == "sweep.stop") {
            axis.stop = parse_double(key, value);
            have_stop = have_sweep = true;
        } else if (key == "sweep.points") {
            const std::uint64_t p = parse_u64(key, value);
            axis.points = static_cast<int>(p);
            have_points = have_sweep = true;
        } else if (key == "sweep.scale") {
            if (value == "log")
                axis.log_scale = true;
            else if (value == "linear")
                axis.log_scale = false;
            else
                throw ConfigError("key 'sweep.scale': must be 'log' or 'linear', got '" + value +
                                  "'");
            have_sweep = true;
        } else if (key == "output") {
            cfg.output_path = value;
        } else if (key == "seed") {
            cfg.seed = parse_u64(key, value);
        } else if (key == "frames") {
            cfg.frames = parse_u64(key, value);
            if (cfg.frames == 0) throw ConfigError("key 'frames': must be > 0");
        } else if (key == "replications") {
            const std::uint64_t reps = parse_u64(key, value);
            if (reps == 0 || reps > 1'000'000)
                throw ConfigError("key 'replications': must be in [1, 1e6]");
            cfg.replications = static_cast<int>(reps);
        } else if (key == "safety") {
            cfg.safety = parse_double(key, value);
            if (!(cfg.safety > 0.0 && cfg.safety <= 1.0))
                throw ConfigError("key 'safety': must be in (0, 1]");
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }

    if (!have_mode) throw ConfigError("key 'mode' is required");

    try {
        cfg.params.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("invalid parameters: ") + e.what());
    }

    const bool needs_sweep = cfg.mode == RunMode::kEbn0LowPower ||
                             cfg.mode == RunMode::kEbn0Wideband ||
                             cfg.mode == RunMode::kOptimalRho;
    if (needs_sweep) {
        if (!have_sweep)
            throw ConfigError(std::string("mode '") + mode_name(cfg.mode) +
                              "' requires sweep.variable/start/stop/points");
        if (axis.variable.empty())
            throw ConfigError("key 'sweep.variable' is required");
        if (!have_start || !have_stop || !have_points)
            throw ConfigError("keys 'sweep.start', 'sweep.stop', 'sweep.points' are required");
        const char* expected =
            cfg.mode == RunMode::kEbn0Wideband ? "bandwidth" : "snr";
        if (axis.variable != expected)
            throw ConfigError(std::string("mode '") + mode_name(cfg.mode) +
                              "' sweeps '" + expected + "', not '" + axis.variable + "'");
        if (axis.points < 2) throw ConfigError("key 'sweep.points': must be >= 2");
        if (!(axis.start > 0.0) || !(axis.stop > 0.0))
            throw ConfigError("keys 'sweep.start'/'sweep.stop': must be > 0");
        if (axis.start == axis.stop)
            throw ConfigError("keys 'sweep.start'/'sweep.stop': must differ");
        cfg.sweep = axis;
    } else if (have_sweep) {
        throw ConfigError(std::string("mode '") + mode_name(cfg.mode) +
                          "' takes no sweep axis");
    }

    const bool needs_theta = cfg.mode != RunMode::kOptimalRho;
    if (needs_theta && cfg.theta_list.empty())
        throw ConfigError("key 'theta_list' is required for this mode");
    if (cfg.mode == RunMode::kValidateQueue) {
        if (cfg.theta_list.size() != 1)
            throw ConfigError("key 'theta_list': validate-queue takes exactly one theta");
        if (!(cfg.theta_list[0] > 0.0))
            throw ConfigError("key 'theta_list': validate-queue requires theta > 0");
    }

    if (cfg.output_path.empty())
        throw ConfigError("output path is required (key 'output' or --out)");

    return cfg;
}

// ---------------------------------------------------------------------------
// per-mode row generation
// ---------------------------------------------------------------------------

struct Csv {
    std::string header;
    std::vector<std::string> rows;
};

Csv run_ebn0_lowpower(const RunConfig& cfg) {
    Csv csv;
    csv.header = "snr,theta,rho_opt,r_opt,re_bits_s_hz,ebn0_db";
    const std::vector<double> grid = cfg.sweep->grid();
    const std::size_t n = grid.size() * cfg.theta_list.size();
    csv.rows.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const std::size_t ti = i / grid.size();
        const std::size_t si = i % grid.size();
        const QosExponent theta(cfg.theta_list[ti]);
        const LowPowerSolution p = low_power_point(theta, cfg.params, grid[si]);
        csv.rows[i] = join({fmt(p.snr), fmt(theta.theta), fmt(p.solution.rho_opt),
                            fmt(p.solution.r_opt), fmt(p.solution.re),
                            fmt(to_db(p.bit_energy))},
                           ',');
    });
    return csv;
}

Csv run_ebn0_wideband(const RunConfig& cfg) {
    Csv csv;
    csv.header = "bandwidth,theta,re_bits_s_hz,ebn0_db";
    const std::vector<double> grid = cfg.sweep->grid();
    const std::size_t n = grid.size() * cfg.theta_list.size();
    csv.rows.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const std::size_t ti = i / grid.size();
        const std::size_t bi = i % grid.size();
        SystemParams p = cfg.params;
        p.bandwidth_b = grid[bi];
        p.validate();
        const EffCapSolution sol = solve(QosExponent(cfg.theta_list[ti]), p);
        csv.rows[i] = join({fmt(p.bandwidth_b), fmt(cfg.theta_list[ti]), fmt(sol.re),
                            fmt(to_db(bit_energy(p, sol.re)))},
                           ',');
    });
    return csv;
}

Csv run_wideband_table(const RunConfig& cfg) {
    Csv csv;
    csv.header = "theta,alpha_star,xi,ebn0_min_db,s0";
    for (double th : cfg.theta_list) {
        const WidebandResult res = wideband_result(QosExponent(th), cfg.params);
        csv.rows.push_back(join({fmt(th), fmt(res.constants.alpha_star),
                                 fmt(res.constants.xi), fmt(res.ebn0_min_db), fmt(res.s0)},
                                ','));
    }
    return csv;
}

Csv run_optimal_rho(const RunConfig& cfg) {
    Csv csv;
    csv.header = "snr,rho_opt,snr_eff_opt";
    const std::vector<double> grid = cfg.sweep->grid();
    csv.rows.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        SystemParams p = cfg.params;
        p.pbar = grid[i] * p.n0 * p.bandwidth_b;
        p.validate();
        csv.rows[i] = join({fmt(grid[i]), fmt(optimal_rho(p)), fmt(snr_eff_opt(p, grid[i]))},
                           ',');
    });
    return csv;
}

Csv run_validate_queue(const RunConfig& cfg) {
    Csv csv;
    csv.header =
        "seed,stream,frames,arrival_per_frame,r,rho,alpha,on_fraction,"
        "theta_hat,r_squared,q_levels,counts";
    const QosExponent theta(cfg.theta_list[0]);
    const std::size_t n = static_cast<std::size_t>(cfg.replications);
    csv.rows.resize(n);
    parallel_for(n, [&](std::size_t i) {
        SimOverrides overrides;
        overrides.frames = cfg.frames;
        overrides.seed = cfg.seed;
        overrides.stream = i;  // one stream per replication
        const ValidationResult res = validate_theta(theta, cfg.params, cfg.safety, overrides);
        std::vector<std::string> levels, counts;
        for (double q : res.tail.q_used) levels.push_back(fmt(q));
        for (std::uint64_t c : res.tail.counts) counts.push_back(fmt(c));
        csv.rows[i] = join({fmt(cfg.seed), fmt(static_cast<std::uint64_t>(i)),
                            fmt(static_cast<std::uint64_t>(res.summary.frames_counted)),
                            fmt(res.summary.arrival_per_frame), fmt(res.summary.r),
                            fmt(res.summary.rho), fmt(res.summary.alpha),
                            fmt(res.summary.on_fraction), fmt(res.theta_hat),
                            fmt(res.tail.r_squared), join(levels, ';'), join(counts, ';')},
                           ',');
    });
    return csv;
}

void write_atomic(const std::string& path, const Csv& csv) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << csv.header << '\n';
        for (const auto& row : csv.rows) out << row << '\n';
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw IoError("cannot move results into place at '" + path + "': " + ec.message());
    }
}

}  // namespace

const char* mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::kEbn0LowPower: return "ebn0-lowpower";
        case RunMode::kEbn0Wideband: return "ebn0-wideband";
        case RunMode::kWidebandTable: return "wideband-table";
        case RunMode::kOptimalRho: return "optimal-rho";
        case RunMode::kValidateQueue: return "validate-queue";
    }
    return "?";
}

std::vector<double> SweepAxis::grid() const {
    std::vector<double> g(points);
    if (log_scale) {
        const double l0 = std::log(start);
        const double l1 = std::log(stop);
        for (int i = 0; i < points; ++i)
            g[i] = std::exp(l0 + (l1 - l0) * i / (points - 1));
    } else {
        for (int i = 0; i < points; ++i)
            g[i] = start + (stop - start) * i / (points - 1);
    }
    g.front() = start;  // exact endpoints
    g.back() = stop;
    return g;
}

RunConfig parse_config(const std::string& text) {
    return build_config(parse_kv_text(text), {});
}

RunConfig parse_config(const std::string& text, std::span<const KeyValue> overrides) {
    return build_config(parse_kv_text(text), overrides);
}

void run(const RunConfig& config) {
    Csv csv;
    switch (config.mode) {
        case RunMode::kEbn0LowPower: csv = run_ebn0_lowpower(config); break;
        case RunMode::kEbn0Wideband: csv = run_ebn0_wideband(config); break;
        case RunMode::kWidebandTable: csv = run_wideband_table(config); break;
        case RunMode::kOptimalRho: csv = run_optimal_rho(config); break;
        case RunMode::kValidateQueue: csv = run_validate_queue(config); break;
    }
    write_atomic(config.output_path, csv);
}

}  // namespace effcap
