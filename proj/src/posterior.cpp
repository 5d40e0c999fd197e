#include "trigdens/posterior.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "trigdens/diag.hpp"
#include "trigdens/metrics.hpp"
#include "trigdens/priors.hpp"

namespace trigdens {

namespace {

struct LogPosterior {
    const std::vector<double>* phibar;  // null when n = 0
    long n;
    int N;
    int p;
    double Q;
    int psi_quad_points;
    std::vector<double> inv_tau_sq;  // 1/tau_j^2, j = 1..N

    // -inf outside E_{p,N}(Q).
    double operator()(const CoefficientVector& theta) const {
        if (sobolev_norm_sq(theta, p) >= Q) return -std::numeric_limits<double>::infinity();
        double lp = 0.0;
        for (int j = 1; j <= N; ++j) lp -= 0.5 * theta.coeffs[j] * theta.coeffs[j] * inv_tau_sq[j - 1];
        if (n > 0) {
            double dot = 0.0;
            for (int j = 1; j <= N; ++j) dot += theta.coeffs[j] * (*phibar)[j - 1];
            lp += n * dot - n * log_normalizer(theta, psi_quad_points);
        }
        return lp;
    }
};

}  // namespace

Chain rw_metropolis(const Dataset& data, int p, double Q, int N, const ModelConfig& cfg,
                    const McmcParams& params, std::uint64_t seed) {
    if (N < 1) throw std::invalid_argument("rw_metropolis: N must be >= 1");
    if (params.n_draws < 1 || params.thinning < 1 || params.burn_in < 0)
        throw std::invalid_argument("rw_metropolis: bad chain sizes");
    if (params.step_scale && *params.step_scale < 0.0)
        throw std::invalid_argument("rw_metropolis: step scale must be >= 0");
    (void)cfg;

    const long n = data.n();
    std::vector<double> phibar;
    if (n > 0) phibar = empirical_coeffs(data, N);

    LogPosterior target;
    target.phibar = n > 0 ? &phibar : nullptr;
    target.n = n;
    target.N = N;
    target.p = p;
    target.Q = Q;
    target.psi_quad_points = params.psi_quad_points;
    std::vector<double> prior_sd(N);
    target.inv_tau_sq.resize(N);
    for (int j = 1; j <= N; ++j) {
        const double tau_sq = std::pow(basis::sobolev_weight(j), -(2.0 * p + 1.0));
        prior_sd[j - 1] = std::sqrt(tau_sq);
        target.inv_tau_sq[j - 1] = 1.0 / tau_sq;
    }

    double scale = params.step_scale ? *params.step_scale : 2.4 / std::sqrt(static_cast<double>(N));

    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    CoefficientVector theta;
    theta.coeffs.assign(N + 1, 0.0);
    double lp = target(theta);

    CoefficientVector prop = theta;
    const long total = params.burn_in + params.n_draws * params.thinning;
    long accepted_post = 0, window_accepted = 0, window_count = 0;
    constexpr long kAdaptWindow = 200;

    Chain chain;
    chain.draws.reserve(params.n_draws);
    for (long it = 0; it < total; ++it) {
        for (int j = 1; j <= N; ++j)
            prop.coeffs[j] = theta.coeffs[j] + scale * prior_sd[j - 1] * normal(rng);
        const double lp_prop = target(prop);
        const double u = unif(rng);
        bool accept;
        if (lp_prop >= lp) accept = true;
        else accept = std::log(u) < lp_prop - lp;
        if (accept) {
            theta.coeffs = prop.coeffs;
            lp = lp_prop;
        }

        const bool in_burn_in = it < params.burn_in;
        if (in_burn_in && params.adapt_during_burn_in) {
            window_accepted += accept ? 1 : 0;
            if (++window_count == kAdaptWindow) {
                const double rate = static_cast<double>(window_accepted) / kAdaptWindow;
                if (rate > 0.35) scale *= 1.15;
                else if (rate < 0.25) scale /= 1.15;
                window_accepted = 0;
                window_count = 0;
            }
        }
        if (!in_burn_in) {
            accepted_post += accept ? 1 : 0;
            const long k = it - params.burn_in;
            if ((k + 1) % params.thinning == 0) chain.draws.push_back(theta);
        }
    }

    chain.acceptance_rate =
        static_cast<double>(accepted_post) / static_cast<double>(params.n_draws * params.thinning);
    chain.params = params;
    chain.N = N;
    chain.p = p;
    chain.Q = Q;
    chain.seed = seed;

    if (chain.acceptance_rate < 0.1 || chain.acceptance_rate > 0.6) {
        std::ostringstream key;
        key << "mcmc-acc-" << N << "-" << n << "-" << seed;
        std::ostringstream msg;
        msg << "rw_metropolis acceptance rate " << chain.acceptance_rate
            << " outside [0.1, 0.6] (N=" << N << ", n=" << n << ")";
        log_once(key.str(), msg.str());
    }
    return chain;
}

GridDensity posterior_mean_density(const Chain& chain, const ModelConfig& cfg) {
    if (chain.draws.empty()) throw std::invalid_argument("posterior_mean_density: empty chain");
    const int m = cfg.quad_points;
    std::vector<double> acc(m, 0.0);
    for (const CoefficientVector& theta : chain.draws) {
        const GridDensity f = density_eval(theta, m);
        for (int i = 0; i < m; ++i) acc[i] += f.values[i];
    }
    double total = 0.0;
    for (double& v : acc) {
        v /= static_cast<double>(chain.draws.size());
        total += v;
    }
    total /= m;
    GridDensity out;
    out.values.resize(m);
    for (int i = 0; i < m; ++i) out.values[i] = acc[i] / total;
    return out;
}

double contraction_diagnostic(const Chain& chain, const GridDensity& truth, double radius,
                              const ModelConfig& cfg) {
    if (chain.draws.empty()) throw std::invalid_argument("contraction_diagnostic: empty chain");
    const int m = truth.grid_size();
    (void)cfg;
    long outside = 0;
    for (const CoefficientVector& theta : chain.draws) {
        const GridDensity f = density_eval(theta, m);
        if (metrics::hellinger(truth, f) > radius) ++outside;
    }
    return static_cast<double>(outside) / static_cast<double>(chain.draws.size());
}

double contraction_diagnostic(const Chain& chain, const CoefficientVector& theta0, double radius,
                              const ModelConfig& cfg) {
    return contraction_diagnostic(chain, density_eval(theta0, cfg), radius, cfg);
}

}  // namespace trigdens
