#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trigdens/estimators.hpp"
#include "trigdens/expfam.hpp"

namespace trigdens {

// Ground truth for simulation studies: either f_theta for a finite theta, or
// the fixed closed-form density exp{sin(pi x)} / int_0^1 exp{sin(pi t)} dt.
struct TargetDensity {
    enum class Kind { FiniteTheta, LogSine };

    Kind kind = Kind::LogSine;
    CoefficientVector theta;  // FiniteTheta only

    static TargetDensity logsine();
    static TargetDensity finite(CoefficientVector theta);

    GridDensity density(int quad_points) const;
    Dataset draw(long n, std::uint64_t seed, int quad_points) const;
    std::string name() const;
};

struct ConditionDiagnostics {
    double S11 = 0.0;  // sum_j v_j^{2 p0} (E0[phi_j])^2
    double S12 = 0.0;  // sum_j V0[phi_j]
    bool s11_converged = false;
    bool s12_converged = false;
    int terms_used = 0;
    double max_abs_mean = 0.0;  // max_j |E0[phi_j]|
    double max_variance = 0.0;  // max_j V0[phi_j]
};

// Partial sums of the summability conditions with plateau detection: a sum
// counts as converged when the relative increment over the last doubling of
// terms is below 1e-8. Non-convergence is reported, not thrown.
ConditionDiagnostics condition_diagnostics(const TargetDensity& target, int p0,
                                           const ModelConfig& cfg);

struct Figure1Result {
    GridDensity truth;
    EstimateResult est9;
    EstimateResult est10;
    Dataset data;
    double dh9 = 0.0, dh10 = 0.0, dh_est9_est10 = 0.0;
    double kl9 = 0.0, kl10 = 0.0;
    double l2_9 = 0.0, l2_10 = 0.0;
};

// n = 500 draws from the log-sine density, p = 2, Q = 1, gamma = 0.1;
// estimators (fixed and sieve) plus distance summary. Writes a comparison
// CSV when csv_out is nonempty.
Figure1Result figure1_replication(std::uint64_t seed, const ModelConfig& cfg, double gamma = 0.1,
                                  long n = 500, const std::string& csv_out = "");

struct RateStudyConfig {
    TargetDensity target;
    int p = 2;
    double Q = 1.0;
    EstimatorKind estimator = EstimatorKind::Fixed;
    double gamma = 0.1;
    std::vector<long> n_grid;
    int replications = 100;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct RateStudyReport {
    std::vector<long> n_grid;
    std::vector<double> mean_h2, se_h2;  // squared Hellinger risk per n
    std::vector<double> mean_kl, mean_l2_sq;
    double slope = 0.0, slope_se = 0.0, intercept = 0.0;
    double reference_slope = 0.0;  // -2p/(2p+1)
    std::vector<double> residuals;  // OLS residuals of log mean risk
    int replications = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo risk study: per n, simulate/estimate/measure, then OLS of
// log(mean squared-Hellinger risk) on log n. Requires >= 3 grid points
// spanning >= 1.5 decades and >= 50 replications.
RateStudyReport rate_study(const RateStudyConfig& config, const ModelConfig& cfg);

struct AdaptiveStudyConfig {
    TargetDensity target;
    std::vector<int> smoothness_grid;
    std::vector<double> weights;
    int p0 = 2;  // oracle smoothness
    double Q = 1.0;
    std::vector<long> n_grid;
    int replications = 20;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct AdaptiveStudyReport {
    std::vector<long> n_grid;
    std::vector<double> mean_coarse_weight, se_coarse_weight;  // posterior mass below p0
    std::vector<double> mean_adaptive_h2, se_adaptive_h2;
    std::vector<double> mean_oracle_h2, se_oracle_h2;
    int replications = 0;
    std::uint64_t seed = 0;
};

// Adaptive-vs-oracle comparison: the oracle fits the known-p0 model of the
// same hierarchy (N = ceil(n^{1/(2 p0 + 1)})).
AdaptiveStudyReport adaptive_study(const AdaptiveStudyConfig& config, const ModelConfig& cfg);

}  // namespace trigdens
