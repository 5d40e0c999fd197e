#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "../support/oracles.hpp"
#include "trigdens/estimators.hpp"
#include "trigdens/metrics.hpp"

using namespace trigdens;

namespace {
const ModelConfig kCfg = ModelConfig::make(2, 1.0);

Dataset lattice_dataset(int K) {
    // phibar_j vanishes on the uniform lattice for all j below 2K
    Dataset d;
    for (int i = 0; i < K; ++i) d.samples.push_back((i + 0.5) / K);
    return d;
}
}  // namespace

TEST_CASE("fixed estimator") {
    SUBCASE("uniform data stays near uniform") {
        const Dataset d = sample(CoefficientVector{{}}, 100'000, kCfg, 17);
        const EstimateResult est = estimate_fixed(d, 2, 1.0, kCfg);
        double worst = 0.0;
        for (double v : est.density.values) worst = std::max(worst, std::abs(v - 1.0));
        CHECK(worst < 0.05);
        CHECK(std::abs(est.density.integral() - 1.0) < 1e-12);
    }
    SUBCASE("n=1 exponent matches the hand formula") {
        Dataset d;
        d.samples = {0.25};
        const EstimateResult est = estimate_fixed_dim(d, 2, 1, kCfg);
        // E(x) = (phi_1^2(x) + 2 phi_1(0.25) phi_1(x)) / (2 (2^5 + 2))
        const int m = kCfg.quad_points;
        auto hand = [&](double x) {
            const double ph = testsupport::ref_phi(1, x);
            return 0.5 * (ph * ph + 2.0 * std::numbers::sqrt2 * ph) / (32.0 + 1.0 + 1.0);
        };
        const double x0 = 0.5 / m;
        for (int g : {7, 100, 1000, 2000, 4000}) {
            const double x = (g + 0.5) / m;
            const double lhs = std::log(est.density.values[g]) - std::log(est.density.values[0]);
            CHECK(lhs == doctest::Approx(hand(x) - hand(x0)).epsilon(1e-10));
        }
        CHECK(est.N_used == 1);
    }
    SUBCASE("small Q drives N to 1") {
        Dataset d;
        d.samples = {0.25};
        const EstimateResult est = estimate_fixed(d, 2, 0.1, kCfg);
        CHECK(est.N_used == 1);
    }
    SUBCASE("normalizer reproduces the density") {
        const Dataset d = sample(CoefficientVector{{0.0, 0.3}}, 500, kCfg, 19);
        const EstimateResult est = estimate_fixed(d, 2, 1.0, kCfg);
        CHECK(est.normalizer > 0.0);
        CHECK(std::abs(est.density.integral() - 1.0) < 1e-12);
    }
}

TEST_CASE("sieve estimator") {
    SUBCASE("rho_n(1) for p=2, n=4") {
        CHECK(std::exp(log_rho(1, 2, 4)) == doctest::Approx(0.92998110995055425).epsilon(1e-12));
    }
    SUBCASE("N=1 collapses to the single-component estimator for any gamma") {
        Dataset d;
        d.samples = {0.3, 0.6, 0.9};
        // Q = 0.1 gives N = 1 at p = 2
        const EstimateResult fixed = estimate_fixed(d, 2, 0.1, kCfg);
        REQUIRE(fixed.N_used == 1);
        for (double gamma : {0.05, 0.1, 0.5}) {
            const EstimateResult sieve = estimate_sieve(d, 2, 0.1, gamma, kCfg);
            REQUIRE(sieve.N_used == 1);
            for (int g = 0; g < kCfg.quad_points; g += 97)
                CHECK(sieve.density.values[g] ==
                      doctest::Approx(fixed.density.values[g]).epsilon(1e-12));
        }
    }
    SUBCASE("close to the fixed estimator on figure-style data") {
        std::vector<double> logf(kCfg.quad_points);
        for (int i = 0; i < kCfg.quad_points; ++i)
            logf[i] = std::sin(std::numbers::pi * (i + 0.5) / kCfg.quad_points);
        const Dataset d = sample_from_density(density_from_log_values(std::move(logf)), 500, 23);
        const EstimateResult e9 = estimate_fixed(d, 2, 1.0, kCfg);
        const EstimateResult e10 = estimate_sieve(d, 2, 1.0, 0.1, kCfg);
        CHECK(metrics::hellinger(e9.density, e10.density) < 0.05);
        CHECK(std::abs(e10.density.integral() - 1.0) < 1e-12);
    }
}

TEST_CASE("approximate log marginal likelihood") {
    SUBCASE("vanishing empirical coefficients leave only the complexity penalty") {
        const Dataset d = lattice_dataset(64);
        const double got = approx_log_marginal(d, 2, kCfg);
        // N_2 = ceil(64^{1/5}) = 3; v = 2,2,4
        const double expect = -0.5 * (std::log(1.0 + 64.0 / 32.0) + std::log(1.0 + 64.0 / 32.0) +
                                      std::log(1.0 + 64.0 / 1024.0));
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
        CHECK(got < 0.0);
    }
    SUBCASE("N_m = 1 keeps exactly one term") {
        Dataset d;
        d.samples = {0.3};
        const double got = approx_log_marginal(d, 3, kCfg);
        const double phibar = testsupport::ref_phi(1, 0.3);
        const double vpow = std::pow(2.0, 7.0);
        const double expect = -0.5 * std::log1p(1.0 / vpow) + phibar * phibar / (2.0 * (1.0 + vpow));
        CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("model posterior weights") {
    SUBCASE("equal marginals return the normalized prior") {
        const std::vector<double> lm = {-5.0, -5.0, -5.0};
        const std::vector<double> w = {1.0, 2.0, 1.0};
        const auto got = model_posterior_weights(lm, w);
        CHECK(got[0] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(got[1] == doctest::Approx(0.5).epsilon(1e-14));
        double total = 0.0;
        for (double x : got) total += x;
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
    SUBCASE("rescaling the prior weights is bit-exact") {
        const std::vector<double> lm = {-3.0, -1.0, -7.5};
        const std::vector<double> w = {1.0, 2.0, 4.0};
        std::vector<double> w3 = w;
        for (double& x : w3) x *= 3.0;
        const auto a = model_posterior_weights(lm, w);
        const auto b = model_posterior_weights(lm, w3);
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    }
    CHECK_THROWS_AS(model_posterior_weights(std::vector<double>{1.0}, std::vector<double>{-1.0}),
                    std::invalid_argument);
}

TEST_CASE("adaptive estimator") {
    const Dataset d = sample(CoefficientVector{{0.0, 0.2, 0.1}}, 800, kCfg, 29);
    SUBCASE("singleton grid equals the fixed estimator of the same model") {
        const std::vector<int> grid = {2};
        const std::vector<double> w = {1.0};
        const EstimateResult a = estimate_adaptive(d, grid, w, 1.0, kCfg);
        const int N2 = dimension_N(PriorVariant::AdaptiveMixture, 2, 1.0, d.n(), 0.0);
        const EstimateResult f = estimate_fixed_dim(d, 2, N2, kCfg);
        CHECK(a.model_weights == std::vector<double>{1.0});
        CHECK(a.density.values == f.density.values);
        CHECK(a.N_used == N2);
    }
    SUBCASE("weights sum to one and the density is a proper mixture") {
        const std::vector<int> grid = {1, 2, 3};
        const std::vector<double> w = {1.0, 1.0, 1.0};
        const EstimateResult a = estimate_adaptive(d, grid, w, 1.0, kCfg);
        double total = 0.0;
        for (double x : a.model_weights) total += x;
        CHECK(std::abs(total - 1.0) < 1e-12);
        CHECK(std::abs(a.density.integral() - 1.0) < 1e-12);
        CHECK(*std::min_element(a.density.values.begin(), a.density.values.end()) > 0.0);
    }
    SUBCASE("prior-weight rescaling leaves everything bit-identical") {
        const std::vector<int> grid = {1, 2, 3};
        const std::vector<double> w = {1.0, 1.0, 1.0};
        const std::vector<double> w3 = {3.0, 3.0, 3.0};
        const EstimateResult a = estimate_adaptive(d, grid, w, 1.0, kCfg);
        const EstimateResult b = estimate_adaptive(d, grid, w3, 1.0, kCfg);
        CHECK(a.model_weights == b.model_weights);
        CHECK(a.density.values == b.density.values);
    }
}

TEST_CASE("estimators depend on data only through the empirical coefficients") {
    Dataset d = sample(CoefficientVector{{0.0, 0.2}}, 400, kCfg, 31);
    Dataset shuffled = d;
    Rng rng = make_rng(33);
    std::shuffle(shuffled.samples.begin(), shuffled.samples.end(), rng);

    const EstimateResult f1 = estimate_fixed(d, 2, 1.0, kCfg);
    const EstimateResult f2 = estimate_fixed(shuffled, 2, 1.0, kCfg);
    CHECK(f1.density.values == f2.density.values);

    const EstimateResult s1 = estimate_sieve(d, 2, 1.0, 0.1, kCfg);
    const EstimateResult s2 = estimate_sieve(shuffled, 2, 1.0, 0.1, kCfg);
    CHECK(s1.density.values == s2.density.values);

    const std::vector<int> grid = {1, 2};
    const std::vector<double> w = {1.0, 1.0};
    const EstimateResult a1 = estimate_adaptive(d, grid, w, 1.0, kCfg);
    const EstimateResult a2 = estimate_adaptive(shuffled, grid, w, 1.0, kCfg);
    CHECK(a1.density.values == a2.density.values);
}

TEST_CASE("hellinger ball estimate") {
    const ModelConfig cfg = ModelConfig::make(2, 1.0, 1024);
    SUBCASE("identical draws give a zero radius") {
        const CoefficientVector theta{{0.0, 0.15, 0.05}};
        std::vector<CoefficientVector> draws(120, theta);
        const HellingerBall ball = hellinger_ball_estimate(draws, cfg);
        CHECK(ball.delta_star == 0.0);
        CHECK(ball.center.coeffs == theta.coeffs);
    }
    SUBCASE("80/20 split picks the majority point") {
        const CoefficientVector a{{0.0, 0.2}};
        const CoefficientVector b{{0.0, -0.2}};
        std::vector<CoefficientVector> draws;
        for (int i = 0; i < 160; ++i) draws.push_back(a);
        for (int i = 0; i < 40; ++i) draws.push_back(b);
        const HellingerBall ball = hellinger_ball_estimate(draws, cfg);
        CHECK(ball.center.coeffs == a.coeffs);
        CHECK(ball.delta_star == 0.0);
    }
    SUBCASE("needs at least 100 draws") {
        std::vector<CoefficientVector> draws(99, CoefficientVector{{0.0}});
        CHECK_THROWS_AS(hellinger_ball_estimate(draws, cfg), std::invalid_argument);
    }
    SUBCASE("spread draws: ball mass reaches 3/4") {
        Rng rng = make_rng(35);
        std::vector<CoefficientVector> draws;
        for (int i = 0; i < 150; ++i)
            draws.push_back(testsupport::random_in_ellipsoid(2, 1.0, 6, rng));
        const HellingerBall ball = hellinger_ball_estimate(draws, cfg);
        const GridDensity fc = density_eval(ball.center, cfg);
        long inside = 0;
        for (const auto& t : draws)
            if (metrics::hellinger(fc, density_eval(t, cfg)) <= ball.delta_star) ++inside;
        CHECK(inside * 4 >= 3 * static_cast<long>(draws.size()));
        CHECK(ball.delta_star > 0.0);
    }
}
