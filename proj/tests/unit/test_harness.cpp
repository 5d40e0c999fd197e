#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "../support/oracles.hpp"
#include "trigdens/harness.hpp"
#include "trigdens/metrics.hpp"

using namespace trigdens;

namespace {
const ModelConfig kCfg = ModelConfig::make(2, 1.0);
}

TEST_CASE("condition diagnostics") {
    SUBCASE("uniform target: S11 = 0 plateaus, S12 diverges") {
        const auto diag = condition_diagnostics(TargetDensity::finite(CoefficientVector{{0.0}}), 2, kCfg);
        CHECK(diag.S11 == 0.0);
        CHECK(diag.s11_converged);
        CHECK_FALSE(diag.s12_converged);
        // V0[phi_j] = 1 for every j under the uniform law
        CHECK(diag.S12 == doctest::Approx(static_cast<double>(diag.terms_used)).epsilon(1e-10));
        CHECK(diag.max_variance == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("log-sine target: frozen quadrature values; only p0 = 1 stays bounded") {
        // The periodic extension of sin(pi x) has a derivative kink at the
        // boundary, so E0[phi_j] ~ j^{-2}: S11 converges only for p0 = 1 and
        // S12 always grows by ~1 per term. Values frozen from an independent
        // quadrature oracle at the same resolution (m = 4096, j <= 1024).
        const auto d1 = condition_diagnostics(TargetDensity::logsine(), 1, kCfg);
        CHECK(d1.S11 == doctest::Approx(0.34468817670889845).epsilon(1e-6));
        CHECK(d1.S12 == doctest::Approx(1023.920318063494).epsilon(1e-9));
        CHECK_FALSE(d1.s12_converged);
        const auto d2 = condition_diagnostics(TargetDensity::logsine(), 2, kCfg);
        CHECK(d2.S11 == doctest::Approx(105.36972002999396).epsilon(1e-6));
        CHECK_FALSE(d2.s11_converged);
        CHECK(d1.max_abs_mean <= std::sqrt(2.0));
        CHECK(d1.max_variance <= 2.0);
    }
    SUBCASE("finite-theta target: exponentially decaying coefficients plateau") {
        const auto diag =
            condition_diagnostics(TargetDensity::finite(CoefficientVector{{0.0, 0.3}}), 2, kCfg);
        CHECK(diag.s11_converged);
        CHECK(diag.S11 > 0.0);
        CHECK_FALSE(diag.s12_converged);
    }
}

TEST_CASE("figure 1 replication") {
    const std::string csv = "fig1_test_out.csv";
    const Figure1Result r = figure1_replication(1, kCfg, 0.1, 500, csv);
    SUBCASE("truth value at the middle of the grid") {
        // f0(1/2) = e / int e^{sin(pi t)} dt; the closest midpoint sits 1.2e-4
        // away from 1/2 where the density is flat
        const int mid = kCfg.quad_points / 2;
        CHECK(r.truth.values[mid] == doctest::Approx(1.3754335687677483).epsilon(1e-5));
    }
    SUBCASE("estimates integrate to one and sit close together") {
        CHECK(std::abs(r.est9.density.integral() - 1.0) < 1e-8);
        CHECK(std::abs(r.est10.density.integral() - 1.0) < 1e-8);
        CHECK(r.dh_est9_est10 < 0.05);
        CHECK(r.est9.N_used == 12);
    }
    SUBCASE("distance summary is populated and the CSV exists") {
        CHECK(r.dh9 > 0.0);
        CHECK(r.kl9 >= 0.0);
        CHECK(r.l2_9 > 0.0);
        std::ifstream in(csv);
        REQUIRE(in.good());
        std::string header;
        std::getline(in, header);
        CHECK(header == "x,truth,est9,est10");
        std::remove(csv.c_str());
    }
}

TEST_CASE("rate study validation") {
    RateStudyConfig rc;
    rc.target = TargetDensity::logsine();
    rc.n_grid = {100, 200};
    rc.replications = 50;
    CHECK_THROWS_AS(rate_study(rc, kCfg), std::invalid_argument);
    rc.n_grid = {100, 200, 400};  // only 0.6 decades
    CHECK_THROWS_AS(rate_study(rc, kCfg), std::invalid_argument);
    rc.n_grid = {100, 1000, 10000};
    rc.replications = 10;
    CHECK_THROWS_AS(rate_study(rc, kCfg), std::invalid_argument);
}

TEST_CASE("rate study on a small finite-theta target") {
    RateStudyConfig rc;
    rc.target = TargetDensity::finite(CoefficientVector{{0.0, 0.10, 0.066}});
    rc.p = 2;
    rc.Q = 1.0;
    rc.estimator = EstimatorKind::Fixed;
    rc.n_grid = {64, 512, 4096};
    rc.replications = 50;
    rc.seed = 5;
    const ModelConfig cfg = ModelConfig::make(2, 1.0, 1024);
    const RateStudyReport report = rate_study(rc, cfg);
    REQUIRE(report.mean_h2.size() == 3);
    for (double r : report.mean_h2) CHECK(r > 0.0);
    // risk strictly decreasing within 2 joint standard errors
    for (std::size_t i = 0; i + 1 < report.mean_h2.size(); ++i) {
        const double band =
            2.0 * std::sqrt(report.se_h2[i] * report.se_h2[i] +
                            report.se_h2[i + 1] * report.se_h2[i + 1]);
        CHECK(report.mean_h2[i + 1] < report.mean_h2[i] + band);
    }
    CHECK(report.slope < 0.0);
    CHECK(report.reference_slope == doctest::Approx(-0.8));
    CHECK(report.residuals.size() == 3);
    CHECK(report.replications == 50);

    SUBCASE("reports are a pure function of config and seed") {
        const RateStudyReport again = rate_study(rc, cfg);
        CHECK(again.mean_h2 == report.mean_h2);
        CHECK(again.slope == report.slope);
        RateStudyConfig rc1 = rc;
        rc1.threads = 1;
        const RateStudyReport serial = rate_study(rc1, cfg);
        CHECK(serial.mean_h2 == report.mean_h2);  // thread count cannot matter
    }
}

TEST_CASE("adaptive study") {
    AdaptiveStudyConfig ac;
    ac.target = TargetDensity::logsine();
    ac.smoothness_grid = {1, 2, 3};
    ac.weights = {1.0, 1.0, 1.0};
    ac.p0 = 2;
    ac.Q = 1.0;
    ac.n_grid = {500, 2000};
    ac.replications = 5;
    ac.seed = 9;
    const ModelConfig cfg = ModelConfig::make(2, 1.0, 1024);
    const AdaptiveStudyReport report = adaptive_study(ac, cfg);
    REQUIRE(report.mean_coarse_weight.size() == 2);
    for (double w : report.mean_coarse_weight) {
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
    }
    for (double r : report.mean_adaptive_h2) CHECK(r > 0.0);

    SUBCASE("singleton grid: adaptive risk equals the oracle risk") {
        AdaptiveStudyConfig single = ac;
        single.smoothness_grid = {2};
        single.weights = {1.0};
        const AdaptiveStudyReport r = adaptive_study(single, cfg);
        CHECK(r.mean_adaptive_h2 == r.mean_oracle_h2);
        for (double w : r.mean_coarse_weight) CHECK(w == 0.0);
    }
    SUBCASE("weight rescaling leaves the report bit-identical") {
        AdaptiveStudyConfig scaled = ac;
        scaled.weights = {3.0, 3.0, 3.0};
        const AdaptiveStudyReport r = adaptive_study(scaled, cfg);
        CHECK(r.mean_coarse_weight == report.mean_coarse_weight);
        CHECK(r.mean_adaptive_h2 == report.mean_adaptive_h2);
        CHECK(r.mean_oracle_h2 == report.mean_oracle_h2);
    }
    SUBCASE("coarse weight is already low at n = 4000") {
        AdaptiveStudyConfig big = ac;
        big.n_grid = {4000};
        big.replications = 5;
        const AdaptiveStudyReport r = adaptive_study(big, cfg);
        CHECK(r.mean_coarse_weight[0] < 0.1);
    }
}
