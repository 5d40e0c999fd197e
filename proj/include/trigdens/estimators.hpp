#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trigdens/expfam.hpp"
#include "trigdens/priors.hpp"

namespace trigdens {

enum class EstimatorKind { Fixed, Sieve, Adaptive, McmcMean };

std::string to_string(EstimatorKind k);

struct EstimateResult {
    GridDensity density;
    EstimatorKind variant = EstimatorKind::Fixed;
    int N_used = 0;
    std::vector<double> model_weights;  // adaptive only
    double normalizer = 0.0;            // C_{1,n} or C_{2,n}
};

// Closed-form approximate Bayes estimator under the truncated fixed-dimension
// prior: density proportional to
//   exp{ (1/2) sum_{j<=N} (phi_j^2(x) + 2 n phibar_j phi_j(x)) / (v_j^{2p+1}+n+1) }.
// estimate_fixed derives N from p, Q and n; estimate_fixed_dim pins N.
EstimateResult estimate_fixed(const Dataset& data, int p, double Q, const ModelConfig& cfg);
EstimateResult estimate_fixed_dim(const Dataset& data, int p, int N, const ModelConfig& cfg);

// Sieve-mixture estimator: C_{2,n} sum_k lambda_n(k) rho_n(k) exp{...k terms...}
// with rho_n(k) = prod_{j<=k} (1 + (n+1) v_j^{-(2p+1)})^{-1/2}; combined in
// log space.
EstimateResult estimate_sieve(const Dataset& data, int p, double Q, double gamma,
                              const ModelConfig& cfg);

// log rho_n(k) for the sieve estimator.
double log_rho(int k, int p, long n);

// Gaussian-quadratic approximation of the log marginal likelihood of the
// p_m model (up to a model-independent constant):
//   sum_{j<=N_m} [ -1/2 log(1 + n v_j^{-(2p_m+1)}) + (n phibar_j)^2 / (2(n + v_j^{2p_m+1})) ]
double approx_log_marginal(const Dataset& data, int p_m, const ModelConfig& cfg);

// Posterior model weights proportional to w(m) exp(log_marginal_m). Prior
// weights are canonicalized by their maximum first, so exactly rescaled
// inputs produce bit-identical output.
std::vector<double> model_posterior_weights(std::span<const double> log_marginals,
                                            std::span<const double> prior_weights);

// Smoothness-mixture estimator: posterior-weight average of the per-model
// fixed estimators with N_m = ceil(n^{1/(2 p_m + 1)}).
EstimateResult estimate_adaptive(const Dataset& data, std::span<const int> smoothness_grid,
                                 std::span<const double> prior_weights, double Q,
                                 const ModelConfig& cfg);

struct HellingerBall {
    CoefficientVector center;
    double delta_star;
    std::size_t center_index;
};

// Smallest-radius 3/4-mass Hellinger ball over candidate centers taken from
// the posterior sample itself: delta_star = min over centers of the
// ceil(3S/4)-th smallest distance to the other draws. Requires >= 100 draws.
HellingerBall hellinger_ball_estimate(std::span<const CoefficientVector> draws,
                                      const ModelConfig& cfg);

}  // namespace trigdens
