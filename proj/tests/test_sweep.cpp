#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "effcap/asymptotics.hpp"
#include "effcap/channel.hpp"
#include "effcap/sweep.hpp"
#include "helpers.hpp"

using namespace effcap;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        FAIL("missing column ", name);
        return 0;
    }
    double num(std::size_t row, const std::string& name) const {
        return std::strtod(rows[row][col(name)].c_str(), nullptr);
    }
};

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::size_t pos = 0;
        while (true) {
            const std::size_t nxt = s.find(',', pos);
            out.push_back(s.substr(pos, nxt - pos));
            if (nxt == std::string::npos) break;
            pos = nxt + 1;
        }
        return out;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            t.columns = split(line);
            first = false;
        } else {
            t.rows.push_back(split(line));
        }
    }
    return t;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
        std::filesystem::remove(path + ".tmp", ec);
    }
};

}  // namespace

TEST_CASE("parse_config: rejections name the offender") {
    CHECK_THROWS_WITH_AS(parse_config(""), doctest::Contains("mode"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = wideband-table\nbogus_key = 3\n"
                                      "theta_list = 0.01\noutput = x.csv"),
                         doctest::Contains("bogus_key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = time-travel\noutput = x.csv"),
                         doctest::Contains("time-travel"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = wideband-table\nmode = optimal-rho"),
                         doctest::Contains("duplicate key 'mode'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = wideband-table\ngamma = fast"),
                         doctest::Contains("gamma"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("just some words"), doctest::Contains("key = value"),
                         ConfigError);

    SUBCASE("a sweep covers exactly one variable; both names are reported") {
        const std::string doc =
            "mode = ebn0-lowpower\ntheta_list = 0.01\noutput = x.csv\n"
            "sweep.variable = snr,bandwidth\nsweep.start = 1e-6\n"
            "sweep.stop = 1\nsweep.points = 5";
        CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("snr,bandwidth"),
                             ConfigError);
    }
    SUBCASE("sweep axis must match the mode") {
        const std::string doc =
            "mode = ebn0-wideband\ntheta_list = 0.01\noutput = x.csv\n"
            "sweep.variable = snr\nsweep.start = 1e-6\nsweep.stop = 1\nsweep.points = 5";
        CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("bandwidth"), ConfigError);
    }
    SUBCASE("table modes take no sweep") {
        const std::string doc =
            "mode = wideband-table\ntheta_list = 0.01\noutput = x.csv\n"
            "sweep.variable = snr\nsweep.start = 1\nsweep.stop = 2\nsweep.points = 5";
        CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("no sweep"), ConfigError);
    }
    SUBCASE("points must be at least 2") {
        const std::string doc =
            "mode = optimal-rho\noutput = x.csv\n"
            "sweep.variable = snr\nsweep.start = 1e-3\nsweep.stop = 1\nsweep.points = 1";
        CHECK_THROWS_WITH_AS(parse_config(doc), doctest::Contains("points"), ConfigError);
    }
    SUBCASE("validate-queue wants exactly one positive theta") {
        CHECK_THROWS_WITH_AS(
            parse_config("mode = validate-queue\ntheta_list = 0.01,0.1\noutput = x.csv"),
            doctest::Contains("exactly one theta"), ConfigError);
        CHECK_THROWS_WITH_AS(
            parse_config("mode = validate-queue\ntheta_list = 0\noutput = x.csv"),
            doctest::Contains("theta > 0"), ConfigError);
    }
}

TEST_CASE("parse_config: a full document and overrides") {
    const std::string doc =
        "# reference run\n"
        "mode = wideband-table\n"
        "theta_list = 0,0.001,0.01,0.1,1\n"
        "output = table.csv\n";
    const RunConfig cfg = parse_config(doc);
    CHECK(cfg.mode == RunMode::kWidebandTable);
    CHECK(cfg.theta_list == std::vector<double>{0.0, 0.001, 0.01, 0.1, 1.0});
    CHECK(cfg.params.gamma == 1.0);
    CHECK(cfg.params.frame_t == 2e-3);
    CHECK(cfg.params.bandwidth_b == 1e5);
    CHECK(cfg.params.pbar / cfg.params.n0 == 1e4);

    SUBCASE("flag overrides beat the document") {
        const KeyValue ov[] = {{"output", "elsewhere.csv"}, {"seed", "42"}};
        const RunConfig cfg2 = parse_config(doc, ov);
        CHECK(cfg2.output_path == "elsewhere.csv");
        CHECK(cfg2.seed == 42);
    }
    SUBCASE("unknown override key is rejected") {
        const KeyValue ov[] = {{"outputt", "typo.csv"}};
        CHECK_THROWS_WITH_AS(parse_config(doc, ov), doctest::Contains("outputt"),
                             ConfigError);
    }
}

TEST_CASE("wideband-table run reproduces the reference table") {
    TempFile out("effcap_test_table.csv");
    RunConfig cfg = parse_config(
        "mode = wideband-table\ntheta_list = 0,0.001,0.01,0.1,1\noutput = " + out.path);
    run(cfg);

    const Table t = parse_csv(slurp(out.path));
    REQUIRE(t.rows.size() == 5);
    const double expect_db[] = {4.6776, 4.7029, 4.9177, 6.3828, 10.8333};
    const double expect_s0[] = {0.4720, 0.4749, 0.4978, 0.6151, 0.6061};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::abs(t.num(i, "ebn0_min_db") - expect_db[i]) < 1e-3);
        CHECK(std::abs(t.num(i, "s0") - expect_s0[i]) < 1e-3);
    }

    SUBCASE("values round-trip exactly through the CSV") {
        for (std::size_t i = 0; i < 5; ++i) {
            const WidebandResult res =
                wideband_result(QosExponent(t.num(i, "theta")), cfg.params);
            CHECK(t.num(i, "ebn0_min_db") == res.ebn0_min_db);  // bit-exact
            CHECK(t.num(i, "alpha_star") == res.constants.alpha_star);
            CHECK(t.num(i, "xi") == res.constants.xi);
            CHECK(t.num(i, "s0") == res.s0);
        }
    }

    SUBCASE("same config gives a byte-identical file") {
        const std::string first = slurp(out.path);
        run(cfg);
        CHECK(slurp(out.path) == first);
    }
}

TEST_CASE("ebn0-lowpower run shows the U-shape against ascending snr") {
    TempFile out("effcap_test_lowpower.csv");
    const RunConfig cfg = parse_config(
        "mode = ebn0-lowpower\ntheta_list = 0.01\n"
        "sweep.variable = snr\nsweep.start = 1e-6\nsweep.stop = 1\n"
        "sweep.points = 13\nsweep.scale = log\noutput = " +
        out.path);
    run(cfg);

    const Table t = parse_csv(slurp(out.path));
    REQUIRE(t.rows.size() == 13);
    CHECK(t.num(0, "snr") == 1e-6);
    CHECK(t.num(12, "snr") == 1.0);

    int direction_changes = 0;
    int last_sign = 0;
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        const double diff = t.num(i, "ebn0_db") - t.num(i - 1, "ebn0_db");
        const int sign = diff > 0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) ++direction_changes;
        last_sign = sign;
    }
    CHECK(direction_changes == 1);  // falls to the minimum, then rises
    CHECK(last_sign == 1);
}

TEST_CASE("ebn0-wideband run converges to the wideband-table value") {
    TempFile out("effcap_test_wideband.csv");
    const RunConfig cfg = parse_config(
        "mode = ebn0-wideband\ntheta_list = 0.01\n"
        "sweep.variable = bandwidth\nsweep.start = 1e5\nsweep.stop = 1e7\n"
        "sweep.points = 3\noutput = " +
        out.path);
    run(cfg);

    const Table t = parse_csv(slurp(out.path));
    REQUIRE(t.rows.size() == 3);
    const double limit_db =
        wideband_result(QosExponent(0.01), cfg.params).ebn0_min_db;
    CHECK(t.num(0, "ebn0_db") > t.num(1, "ebn0_db"));
    CHECK(t.num(1, "ebn0_db") > t.num(2, "ebn0_db"));
    CHECK(std::abs(t.num(2, "ebn0_db") - limit_db) < 0.05);
}

TEST_CASE("optimal-rho run emits the closed form") {
    TempFile out("effcap_test_rho.csv");
    const RunConfig cfg = parse_config(
        "mode = optimal-rho\n"
        "sweep.variable = snr\nsweep.start = 1e-4\nsweep.stop = 10\n"
        "sweep.points = 8\noutput = " +
        out.path);
    run(cfg);

    const Table t = parse_csv(slurp(out.path));
    REQUIRE(t.rows.size() == 8);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        SystemParams p = cfg.params;
        p.pbar = t.num(i, "snr") * p.n0 * p.bandwidth_b;
        CHECK(t.num(i, "rho_opt") == optimal_rho(p));  // bit-exact round trip
        CHECK(t.num(i, "snr_eff_opt") == snr_eff_opt(p, t.num(i, "snr")));
    }
}

TEST_CASE("validate-queue run emits one row per replication") {
    TempFile out("effcap_test_queue.csv");
    const RunConfig cfg = parse_config(
        "mode = validate-queue\ntheta_list = 0.01\nframes = 400000\n"
        "replications = 2\nseed = 9\noutput = " +
        out.path);
    run(cfg);

    const Table t = parse_csv(slurp(out.path));
    REQUIRE(t.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(t.num(i, "seed") == 9.0);
        CHECK(t.num(i, "stream") == static_cast<double>(i));
        CHECK(t.num(i, "theta_hat") > 0.0);
        CHECK(t.num(i, "r_squared") > 0.5);
        CHECK(t.num(i, "on_fraction") > 0.0);
        CHECK(!t.rows[i][t.col("q_levels")].empty());
        CHECK(!t.rows[i][t.col("counts")].empty());
    }
}

TEST_CASE("unwritable output leaves nothing behind") {
    RunConfig cfg = parse_config(
        "mode = wideband-table\ntheta_list = 0.01\n"
        "output = /nonexistent-dir/effcap.csv");
    CHECK_THROWS_AS(run(cfg), IoError);
    CHECK_FALSE(std::filesystem::exists("/nonexistent-dir/effcap.csv"));
}
