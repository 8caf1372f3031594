#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "effcap/system_params.hpp"

namespace effcap {

// Configuration document or override problem; the message names the key.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Output file could not be produced.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class RunMode {
    kEbn0LowPower,   // bit energy vs SNR at fixed bandwidth
    kEbn0Wideband,   // bit energy vs bandwidth at fixed power
    kWidebandTable,  // per-theta minimum bit energy and wideband slope
    kOptimalRho,     // closed-form training fraction vs SNR
    kValidateQueue,  // Monte-Carlo queue-tail validation report
};

const char* mode_name(RunMode mode);

struct SweepAxis {
    std::string variable;  // "snr" or "bandwidth"
    double start = 0.0;
    double stop = 0.0;
    int points = 0;
    bool log_scale = true;

    std::vector<double> grid() const;
};

struct RunConfig {
    RunMode mode = RunMode::kWidebandTable;
    SystemParams params;  // defaults are the reference configuration
    std::optional<SweepAxis> sweep;
    std::vector<double> theta_list;
    std::string output_path;
    std::uint64_t seed = 1;
    // validate-queue knobs
    std::uint64_t frames = 10'000'000;
    int replications = 10;
    double safety = 1.0;
};

using KeyValue = std::pair<std::string, std::string>;

// Parses a flat "key = value" document ('#' comments, comma lists, dotted
// sweep keys). Unknown keys, duplicate keys, malformed values, and invalid
// ranges are each rejected with a message naming the offender.
RunConfig parse_config(const std::string& text);

// Same, with overrides applied on top of the document (an override replaces
// the document's value for the same key).
RunConfig parse_config(const std::string& text, std::span<const KeyValue> overrides);

// Executes the configured run and writes its CSV. The file appears atomically:
// rows are fully computed first, written to a temp file, then renamed over the
// output path.
void run(const RunConfig& config);

}  // namespace effcap
