#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "trigdens/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("trigdens_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

long count_lines(const std::string& content) {
    long n = 0;
    for (char c : content)
        if (c == '\n') ++n;
    return n;
}

int run(const std::vector<std::string>& args) { return trigdens::cli_main(args); }

}  // namespace

TEST_CASE("simulate command") {
    TempDir tmp;
    SUBCASE("row count and determinism") {
        const std::string out = tmp.file("d.csv");
        CHECK(run({"simulate", "--target", "logsine", "--n", "500", "--seed", "7", "--out", out}) == 0);
        const std::string first = slurp(out);
        CHECK(count_lines(first) == 501);  // header + 500 rows
        CHECK(first.substr(0, 2) == "x\n");
        CHECK(fs::exists(tmp.file("d.json")));

        CHECK(run({"simulate", "--target", "logsine", "--n", "500", "--seed", "7", "--out", out}) == 0);
        CHECK(slurp(out) == first);
    }
    SUBCASE("n = 0 is a config error") {
        CHECK(run({"simulate", "--target", "uniform", "--n", "0", "--out", tmp.file("u.csv")}) == 2);
    }
    SUBCASE("unknown target is a config error") {
        CHECK(run({"simulate", "--target", "cauchy", "--n", "5", "--out", tmp.file("u.csv")}) == 2);
    }
    SUBCASE("finite theta target") {
        const std::string out = tmp.file("t.csv");
        CHECK(run({"simulate", "--target", "theta", "--theta", "0,0.4,-0.2", "--n", "50", "--out",
                   out}) == 0);
        CHECK(count_lines(slurp(out)) == 51);
    }
}

TEST_CASE("fit command") {
    TempDir tmp;
    const std::string data = tmp.file("d.csv");
    REQUIRE(run({"simulate", "--target", "logsine", "--n", "300", "--seed", "3", "--out", data}) == 0);

    SUBCASE("fixed estimator writes density and sidecar") {
        const std::string out = tmp.file("est.csv");
        CHECK(run({"fit", "--data", data, "--estimator", "fixed", "--p", "2", "--q", "1", "--out",
                   out}) == 0);
        const std::string csv = slurp(out);
        CHECK(csv.substr(0, 4) == "x,f\n");
        const std::string meta = slurp(tmp.file("est.json"));
        CHECK(meta.find("\"N_used\"") != std::string::npos);
        CHECK(meta.find("\"seed\"") != std::string::npos);
    }
    SUBCASE("missing data file exits 3") {
        CHECK(run({"fit", "--data", tmp.file("nope.csv"), "--out", tmp.file("e.csv")}) == 3);
    }
    SUBCASE("corrupt data file exits 3") {
        const std::string bad = tmp.file("bad.csv");
        std::ofstream(bad) << "x\n0.5\nnot-a-number\n";
        CHECK(run({"fit", "--data", bad, "--out", tmp.file("e.csv")}) == 3);
    }
    SUBCASE("unknown estimator exits 2") {
        CHECK(run({"fit", "--data", data, "--estimator", "magic", "--out", tmp.file("e.csv")}) == 2);
    }
    SUBCASE("adaptive requires a grid") {
        CHECK(run({"fit", "--data", data, "--estimator", "adaptive", "--out", tmp.file("e.csv")}) == 2);
        CHECK(run({"fit", "--data", data, "--estimator", "adaptive", "--grid", "1,2,3", "--out",
                   tmp.file("e.csv")}) == 0);
        const std::string meta = slurp(tmp.file("e.json"));
        CHECK(meta.find("\"model_weights\"") != std::string::npos);
    }
    SUBCASE("mcmc estimator with a chain dump") {
        const std::string out = tmp.file("post.csv");
        const std::string chain = tmp.file("chain.csv");
        CHECK(run({"fit", "--data", data, "--estimator", "mcmc", "--p", "2", "--q", "1", "--seed",
                   "11", "--out", out, "--chain-out", chain, "--mcmc-burnin", "500",
                   "--mcmc-draws", "100", "--mcmc-thinning", "2", "--quad-points", "1024"}) == 0);
        const std::string chain_csv = slurp(chain);
        CHECK(chain_csv.substr(0, 6) == "theta1");
        CHECK(count_lines(chain_csv) == 101);
        CHECK(slurp(tmp.file("post.json")).find("acceptance_rate") != std::string::npos);
        CHECK(fs::exists(tmp.file("chain.json")));
    }
}

TEST_CASE("rate-study command") {
    TempDir tmp;
    const std::string config = tmp.file("rs.json");
    SUBCASE("minimal valid study") {
        std::ofstream(config) << R"({
            "schema": 1,
            "target": {"kind": "theta", "coeffs": [0.0, 0.1, 0.06]},
            "p": 2, "q": 1.0, "estimator": "fixed",
            "n_grid": [64, 512, 4096], "replications": 50,
            "seed": 5, "quad_points": 1024
        })";
        const std::string out = tmp.file("report.json");
        CHECK(run({"rate-study", "--config", config, "--out", out}) == 0);
        const std::string report = slurp(out);
        CHECK(report.find("\"slope\"") != std::string::npos);
        CHECK(report.find("\"reference_slope\": -0.8") != std::string::npos);
        CHECK(report.find("\"replications\": 50") != std::string::npos);
        CHECK(fs::exists(tmp.file("report.csv")));

        // byte-identical on rerun
        const std::string out2 = tmp.file("report2.json");
        CHECK(run({"rate-study", "--config", config, "--out", out2}) == 0);
        CHECK(slurp(out2) == report);
    }
    SUBCASE("n_grid of length 2 is rejected") {
        std::ofstream(config) << R"({
            "schema": 1, "target": {"kind": "logsine"},
            "n_grid": [64, 4096], "replications": 50, "quad_points": 1024
        })";
        CHECK(run({"rate-study", "--config", config, "--out", tmp.file("r.json")}) == 2);
    }
    SUBCASE("unknown keys are rejected") {
        std::ofstream(config) << R"({
            "schema": 1, "target": {"kind": "logsine"},
            "n_grid": [64, 512, 4096], "replications": 50,
            "bandwidth": 0.1
        })";
        CHECK(run({"rate-study", "--config", config, "--out", tmp.file("r.json")}) == 2);
    }
    SUBCASE("wrong schema version is rejected") {
        std::ofstream(config) << R"({"schema": 2, "target": {"kind": "logsine"}, "n_grid": [64,512,4096]})";
        CHECK(run({"rate-study", "--config", config, "--out", tmp.file("r.json")}) == 2);
    }
    SUBCASE("missing config file exits 3") {
        CHECK(run({"rate-study", "--config", tmp.file("absent.json"), "--out", "-"}) == 3);
    }
}

TEST_CASE("contraction command") {
    TempDir tmp;
    const std::string config = tmp.file("ct.json");
    SUBCASE("radius sqrt2 gives zero fractions") {
        std::ofstream(config) << R"({
            "schema": 1,
            "target": {"kind": "theta", "coeffs": [0.0, 0.2]},
            "p": 2, "q": 1.0,
            "n_grid": [100], "chains": 2, "seed": 3,
            "quad_points": 1024,
            "radius_fixed": 1.4142135623730951,
            "mcmc": {"burn_in": 300, "thinning": 2, "n_draws": 100, "psi_quad_points": 1024}
        })";
        const std::string out = tmp.file("diag.json");
        CHECK(run({"contraction", "--config", config, "--out", out}) == 0);
        const std::string diag = slurp(out);
        CHECK(diag.find("\"mean_fraction\": 0.0") != std::string::npos);
    }
    SUBCASE("exactly one radius specification is required") {
        std::ofstream(config) << R"({
            "schema": 1, "target": {"kind": "logsine"}, "n_grid": [100],
            "radius_fixed": 0.5, "radius_multiplier": 5.0
        })";
        CHECK(run({"contraction", "--config", config, "--out", "-"}) == 2);
    }
    SUBCASE("unknown mcmc key rejected") {
        std::ofstream(config) << R"({
            "schema": 1, "target": {"kind": "logsine"}, "n_grid": [100],
            "radius_fixed": 0.5, "mcmc": {"leapfrog": 7}
        })";
        CHECK(run({"contraction", "--config", config, "--out", "-"}) == 2);
    }
}

TEST_CASE("bad flags exit 2") {
    CHECK(run({"simulate", "--n", "10"}) == 2);           // missing --out
    CHECK(run({"no-such-command"}) == 2);
    CHECK(run({}) == 2);
}
