#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trigdens/expfam.hpp"

namespace trigdens {

enum class PriorVariant {
    GaussianInfinite,  // sample-size-dependent infinite product of normals
    Sieve,             // dimension k ~ lambda(k), Gaussian coordinates given k
    TruncatedFixed,    // N(n) coordinates, degenerate beyond
    TruncatedSieve,    // k ~ lambda_n(k) on 1..N(n)
    AdaptiveMixture,   // smoothness p ~ w(m), then N_m(n) coordinates
};

std::string to_string(PriorVariant v);

struct PriorSpec {
    PriorVariant variant = PriorVariant::TruncatedFixed;
    int p = 2;
    double Q = 1.0;
    long n = 100;         // sample size driving N for size-dependent variants
    double sigma2 = 1.0;  // prior scale; results are stated for sigma2 = 1
    double alpha = 1.0;   // tail exponent of the infinite variant, > 1/2
    double gamma = 0.1;   // sieve decay, > 0
    int J_max = 0;        // 0 = auto (4N) truncation of the infinite variant
    std::vector<int> smoothness_grid;  // adaptive variant
    std::vector<double> weights;       // adaptive variant, positive

    void validate() const;  // throws std::invalid_argument
};

// Model dimension:
//   GaussianInfinite: ceil((8Q/(B1^2 eps_n^2))^{1/(2p)}), eps_n = n^{-p/(2p+1)}
//   TruncatedFixed / TruncatedSieve: ceil((2Q/B1^2)^{1/(2p)} n^{1/(2p+1)})
//   AdaptiveMixture (per grid point p_m): ceil(n^{1/(2p_m+1)})
int dimension_N(PriorVariant variant, int p, double Q, long n, double B1_sq);

// Coordinate variance tau_j^2: 0 at j = 0; v_j^{-(2p+1)} for 1 <= j <= N;
// v_j^{-(4p+2alpha)} beyond N (only the infinite variant has mass there).
double prior_variance(int j, PriorVariant variant, int p, int N, double alpha,
                      double sigma2 = 1.0);

// lambda_n(k) proportional to e^{-gamma k} on k = 1..N, summing to 1.
std::vector<double> sieve_weights_finite(double gamma, int N);

// lambda(k) = (e^gamma - 1) e^{-gamma k} on k >= 1.
double sieve_weight_infinite(double gamma, int k);

// Draws from the unrestricted product/mixture measure and rejects until the
// draw lies in the ellipsoid. Throws std::runtime_error after 1e6 consecutive
// rejections (Q too small for the variance schedule).
CoefficientVector sample_prior(const PriorSpec& spec, const ModelConfig& cfg, Rng& rng);

struct PriorMassCheck {
    double mass;       // restricted-prior probability of the theta_0 ball
    double threshold;  // c2 e^{-c1 n eps_n^2}
    double eps_n;
    long hits;
    long draws;
};

// Monte Carlo estimate of pi_n({theta : sum (theta_j - theta0_j)^2 <= B1^2 eps_n^2})
// against the threshold c2 e^{-c1 n eps_n^2}. A diagnostic, not an assertion.
// eps_override > 0 replaces eps_n.
PriorMassCheck prior_mass_condition_check(const PriorSpec& spec, const CoefficientVector& theta0,
                                          long n, double c1, double c2, long n_draws,
                                          const ModelConfig& cfg, std::uint64_t seed,
                                          double eps_override = 0.0);

// Pr(chi^2_N < Q), the paper's lower bound for the unrestricted-prior mass of
// the ellipsoid.
double chi_square_lower_mass(int N, double Q);

}  // namespace trigdens
