// effcap: effective-capacity sweeps for a fixed-rate link with pilot-based
// MMSE channel estimation under statistical queueing constraints.
//
//   effcap <mode> [--config path] [--set key=value ...] [--out path] [--seed N]
//
// Modes: ebn0-lowpower, ebn0-wideband, wideband-table, optimal-rho,
// validate-queue. Exit codes: 0 success, 1 config error, 2 numerical/domain
// error, 3 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "effcap/sweep.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw effcap::IoError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw effcap::IoError("error while reading '" + path + "'");
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"effective-capacity parameter sweeps"};
    std::string mode;
    std::string config_path;
    std::string out_path;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    bool have_seed = false;

    app.add_option("mode", mode,
                   "ebn0-lowpower | ebn0-wideband | wideband-table | optimal-rho | validate-queue")
        ->required();
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--set", sets, "override a config key, e.g. --set theta_list=0.01");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--seed", seed, "PRNG root seed")->each([&](const std::string&) {
        have_seed = true;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // bad flags are config errors
    }

    try {
        std::vector<effcap::KeyValue> overrides;
        overrides.emplace_back("mode", mode);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw effcap::ConfigError("--set expects key=value, got '" + s + "'");
            overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
        }
        if (!out_path.empty()) overrides.emplace_back("output", out_path);
        if (have_seed) overrides.emplace_back("seed", std::to_string(seed));

        const std::string text = config_path.empty() ? std::string{} : read_file(config_path);
        const effcap::RunConfig cfg = effcap::parse_config(text, overrides);
        effcap::run(cfg);
        return 0;
    } catch (const effcap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const effcap::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
