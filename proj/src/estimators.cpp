#include "trigdens/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "trigdens/diag.hpp"
#include "trigdens/metrics.hpp"

namespace trigdens {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;

// phi_j evaluated across the midpoint grid.
std::vector<double> basis_row(int j, int m) {
    std::vector<double> row(m);
    for (int i = 0; i < m; ++i) row[i] = basis::eval(j, (i + 0.5) / m);
    return row;
}

void warn_small_prior_mass(int N, int p, double Q) {
    const double mass = chi_square_lower_mass(N, Q);
    if (mass < 0.5) {
        std::ostringstream key;
        key << "chi2-mass-" << N << "-" << p << "-" << Q;
        std::ostringstream msg;
        msg << "Pr(chi^2_" << N << " < Q=" << Q << ") = " << mass
            << " < 0.5; the ellipsoid restriction is not negligible and the "
               "closed-form estimator may drift from the exact Bayes estimate";
        log_once(key.str(), msg.str());
    }
}
}  // namespace

std::string to_string(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::Fixed: return "fixed";
        case EstimatorKind::Sieve: return "sieve";
        case EstimatorKind::Adaptive: return "adaptive";
        case EstimatorKind::McmcMean: return "mcmc";
    }
    return "?";
}

EstimateResult estimate_fixed_dim(const Dataset& data, int p, int N, const ModelConfig& cfg) {
    if (data.samples.empty()) throw std::invalid_argument("estimate_fixed: empty dataset");
    if (N < 1) throw std::invalid_argument("estimate_fixed: N must be >= 1");
    const long n = data.n();
    const int m = cfg.quad_points;
    const std::vector<double> phibar = empirical_coeffs(data, N);

    // The exponent is a trig polynomial. The phi_j^2 terms of paired indices
    // share v_{2k-1} = v_{2k} and collapse to constants; an unpaired trailing
    // sine term leaves -a_N cos(4 pi K x), i.e. a coefficient on phi_{4K}.
    // a_j = 1 / (2 (v_j^{2p+1} + n + 1)).
    const int K_last = (N + 1) / 2;
    const int eff_dim = (N % 2 == 1) ? 4 * K_last : N;
    std::vector<double> eff(eff_dim + 1, 0.0);
    double const_term = 0.0;
    for (int j = 1; j <= N; ++j) {
        const double denom = std::pow(basis::sobolev_weight(j), 2.0 * p + 1.0) + n + 1.0;
        const double a = 0.5 / denom;
        eff[j] += n * phibar[j - 1] / denom;
        const_term += a;
        if (j == N && N % 2 == 1) eff[4 * K_last] -= a / kSqrt2;
    }

    std::vector<double> log_vals = basis::theta_dot_phi(eff, m);
    // C_{1,n} makes the full exponent (constants included) integrate to 1.
    const double mx = *std::max_element(log_vals.begin(), log_vals.end());
    double acc = 0.0;
    for (double v : log_vals) acc += std::exp(v - mx);
    const double log_integral = const_term + mx + std::log(acc / m);

    EstimateResult out;
    out.density = density_from_log_values(std::move(log_vals));
    out.variant = EstimatorKind::Fixed;
    out.N_used = N;
    out.normalizer = std::exp(-log_integral);
    return out;
}

EstimateResult estimate_fixed(const Dataset& data, int p, double Q, const ModelConfig& cfg) {
    const double B1_sq = basis::tail_constants(p, Q).B1_sq;
    const int N = dimension_N(PriorVariant::TruncatedFixed, p, Q, data.n(), B1_sq);
    warn_small_prior_mass(N, p, Q);
    return estimate_fixed_dim(data, p, N, cfg);
}

double log_rho(int k, int p, long n) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j)
        s += std::log1p((n + 1.0) * std::pow(basis::sobolev_weight(j), -(2.0 * p + 1.0)));
    return -0.5 * s;
}

EstimateResult estimate_sieve(const Dataset& data, int p, double Q, double gamma,
                              const ModelConfig& cfg) {
    if (data.samples.empty()) throw std::invalid_argument("estimate_sieve: empty dataset");
    const long n = data.n();
    const int m = cfg.quad_points;
    const double B1_sq = basis::tail_constants(p, Q).B1_sq;
    const int N = dimension_N(PriorVariant::TruncatedSieve, p, Q, n, B1_sq);
    warn_small_prior_mass(N, p, Q);

    const std::vector<double> phibar = empirical_coeffs(data, N);
    const std::vector<double> lambda = sieve_weights_finite(gamma, N);

    // Streaming log-sum-exp over k of log lambda(k) + log rho(k) + E_k(x),
    // where E_k adds the j = k term to E_{k-1}.
    std::vector<double> running(m, 0.0);    // E_k(x)
    std::vector<double> lse_max(m, -std::numeric_limits<double>::infinity());
    std::vector<double> lse_sum(m, 0.0);
    double log_rho_k = 0.0;
    for (int k = 1; k <= N; ++k) {
        const double denom = std::pow(basis::sobolev_weight(k), 2.0 * p + 1.0) + n + 1.0;
        log_rho_k += -0.5 * std::log1p((n + 1.0) / (std::pow(basis::sobolev_weight(k), 2.0 * p + 1.0)));
        const std::vector<double> row = basis_row(k, m);
        const double shift = n * phibar[k - 1];
        const double offset = std::log(lambda[k - 1]) + log_rho_k;
        for (int i = 0; i < m; ++i) {
            const double z = row[i] + shift;
            running[i] += 0.5 * z * z / denom;
            const double t = offset + running[i];
            if (t <= lse_max[i]) {
                lse_sum[i] += std::exp(t - lse_max[i]);
            } else {
                lse_sum[i] = lse_sum[i] * std::exp(lse_max[i] - t) + 1.0;
                lse_max[i] = t;
            }
        }
    }
    std::vector<double> log_vals(m);
    for (int i = 0; i < m; ++i) log_vals[i] = lse_max[i] + std::log(lse_sum[i]);

    const double mx = *std::max_element(log_vals.begin(), log_vals.end());
    double acc = 0.0;
    for (double v : log_vals) acc += std::exp(v - mx);
    const double log_integral = mx + std::log(acc / m);

    EstimateResult out;
    out.density = density_from_log_values(std::move(log_vals));
    out.variant = EstimatorKind::Sieve;
    out.N_used = N;
    out.normalizer = std::exp(-log_integral);
    return out;
}

double approx_log_marginal(const Dataset& data, int p_m, const ModelConfig& cfg) {
    if (data.samples.empty()) throw std::invalid_argument("approx_log_marginal: empty dataset");
    (void)cfg;
    const long n = data.n();
    const int N_m = dimension_N(PriorVariant::AdaptiveMixture, p_m, 0.0, n, 0.0);
    const std::vector<double> phibar = empirical_coeffs(data, N_m);
    double s = 0.0;
    for (int j = 1; j <= N_m; ++j) {
        const double vpow = std::pow(basis::sobolev_weight(j), 2.0 * p_m + 1.0);
        const double nb = n * phibar[j - 1];
        s += -0.5 * std::log1p(n / vpow) + nb * nb / (2.0 * (n + vpow));
    }
    return s;
}

std::vector<double> model_posterior_weights(std::span<const double> log_marginals,
                                            std::span<const double> prior_weights) {
    if (log_marginals.size() != prior_weights.size() || log_marginals.empty())
        throw std::invalid_argument("model_posterior_weights: size mismatch");
    const double w_max = *std::max_element(prior_weights.begin(), prior_weights.end());
    if (w_max <= 0.0) throw std::invalid_argument("model_posterior_weights: weights must be positive");

    const std::size_t M = log_marginals.size();
    std::vector<double> lw(M);
    for (std::size_t i = 0; i < M; ++i) {
        if (prior_weights[i] <= 0.0)
            throw std::invalid_argument("model_posterior_weights: weights must be positive");
        lw[i] = std::log(prior_weights[i] / w_max) + log_marginals[i];
    }
    const double mx = *std::max_element(lw.begin(), lw.end());
    double total = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        lw[i] = std::exp(lw[i] - mx);
        total += lw[i];
    }
    for (double& w : lw) w /= total;
    return lw;
}

EstimateResult estimate_adaptive(const Dataset& data, std::span<const int> smoothness_grid,
                                 std::span<const double> prior_weights, double Q,
                                 const ModelConfig& cfg) {
    if (smoothness_grid.empty())
        throw std::invalid_argument("estimate_adaptive: empty smoothness grid");
    if (smoothness_grid.size() != prior_weights.size())
        throw std::invalid_argument("estimate_adaptive: weights/grid size mismatch");
    (void)Q;

    const std::size_t M = smoothness_grid.size();
    if (M == 1) {
        // Degenerate mixture: the known-p model itself.
        const int N_m =
            dimension_N(PriorVariant::AdaptiveMixture, smoothness_grid[0], 0.0, data.n(), 0.0);
        EstimateResult out = estimate_fixed_dim(data, smoothness_grid[0], N_m, cfg);
        out.variant = EstimatorKind::Adaptive;
        out.model_weights = {1.0};
        return out;
    }
    std::vector<double> lm(M);
    for (std::size_t i = 0; i < M; ++i)
        lm[i] = approx_log_marginal(data, smoothness_grid[i], cfg);
    const std::vector<double> w_post = model_posterior_weights(lm, prior_weights);

    const int m = cfg.quad_points;
    std::vector<double> mix(m, 0.0);
    int N_best = 0;
    double w_best = -1.0;
    for (std::size_t i = 0; i < M; ++i) {
        const int N_m = dimension_N(PriorVariant::AdaptiveMixture, smoothness_grid[i], 0.0,
                                    data.n(), 0.0);
        const EstimateResult em = estimate_fixed_dim(data, smoothness_grid[i], N_m, cfg);
        for (int g = 0; g < m; ++g) mix[g] += w_post[i] * em.density.values[g];
        if (w_post[i] > w_best) {
            w_best = w_post[i];
            N_best = N_m;
        }
    }
    // Convex combination of normalized densities; renormalize the residual
    // quadrature drift.
    double total = 0.0;
    for (double v : mix) total += v;
    total /= m;
    for (double& v : mix) v /= total;

    EstimateResult out;
    out.density.values = std::move(mix);
    out.variant = EstimatorKind::Adaptive;
    out.N_used = N_best;
    out.model_weights = w_post;
    out.normalizer = 1.0;
    return out;
}

HellingerBall hellinger_ball_estimate(std::span<const CoefficientVector> draws,
                                      const ModelConfig& cfg) {
    const std::size_t S = draws.size();
    if (S < 100) throw std::invalid_argument("hellinger_ball_estimate: needs >= 100 draws");
    const int m = cfg.quad_points;

    // Precompute sqrt-densities once; pairwise Hellinger distances follow.
    std::vector<std::vector<double>> roots(S);
    for (std::size_t i = 0; i < S; ++i) {
        const GridDensity f = density_eval(draws[i], m);
        roots[i].resize(m);
        for (int g = 0; g < m; ++g) roots[i][g] = std::sqrt(f.values[g]);
    }
    std::vector<std::vector<double>> dist(S, std::vector<double>(S, 0.0));
    for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t j = i + 1; j < S; ++j) {
            double s = 0.0;
            for (int g = 0; g < m; ++g) {
                const double d = roots[i][g] - roots[j][g];
                s += d * d;
            }
            dist[i][j] = dist[j][i] = std::sqrt(s / m);
        }
    }

    // Mass >= 3/4 means at least ceil(3S/4) draws inside the closed ball, the
    // center's own draw included; the minimizing radius for a center is its
    // ceil(3S/4)-th smallest distance.
    const std::size_t need = (3 * S + 3) / 4;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    std::vector<double> buf(S);
    for (std::size_t i = 0; i < S; ++i) {
        buf = dist[i];
        std::nth_element(buf.begin(), buf.begin() + (need - 1), buf.end());
        const double delta_i = buf[need - 1];
        if (delta_i < best) {
            best = delta_i;
            best_idx = i;
        }
    }
    if (!(best <= std::numbers::sqrt2 + 1e-12))
        throw std::runtime_error("hellinger_ball_estimate: no 3/4-mass ball found");

    HellingerBall out;
    out.center = draws[best_idx];
    out.delta_star = best;
    out.center_index = best_idx;
    return out;
}

}  // namespace trigdens
