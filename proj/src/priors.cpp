#include "trigdens/priors.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trigdens/diag.hpp"

namespace trigdens {

namespace {
constexpr long kMaxConsecutiveRejections = 1'000'000;

std::mutex g_log_mutex;
std::set<std::string>& seen_keys() {
    static std::set<std::string> s;
    return s;
}
}  // namespace

void log_once(const std::string& key, const std::string& message) {
    std::lock_guard<std::mutex> lock(g_log_mutex);
    if (seen_keys().insert(key).second)
        std::fprintf(stderr, "trigdens: %s\n", message.c_str());
}

std::string to_string(PriorVariant v) {
    switch (v) {
        case PriorVariant::GaussianInfinite: return "gaussian-infinite";
        case PriorVariant::Sieve: return "sieve";
        case PriorVariant::TruncatedFixed: return "truncated-fixed";
        case PriorVariant::TruncatedSieve: return "truncated-sieve";
        case PriorVariant::AdaptiveMixture: return "adaptive-mixture";
    }
    return "?";
}

void PriorSpec::validate() const {
    if (p < 1) throw std::invalid_argument("PriorSpec: p must be >= 1");
    if (Q <= 0.0) throw std::invalid_argument("PriorSpec: Q must be > 0");
    if (n < 1) throw std::invalid_argument("PriorSpec: n must be >= 1");
    if (sigma2 <= 0.0) throw std::invalid_argument("PriorSpec: sigma2 must be > 0");
    if (variant == PriorVariant::GaussianInfinite && alpha <= 0.5)
        throw std::invalid_argument("PriorSpec: alpha must be > 1/2");
    if ((variant == PriorVariant::Sieve || variant == PriorVariant::TruncatedSieve) && gamma <= 0.0)
        throw std::invalid_argument("PriorSpec: gamma must be > 0");
    if (variant == PriorVariant::AdaptiveMixture) {
        if (smoothness_grid.empty())
            throw std::invalid_argument("PriorSpec: empty smoothness grid");
        if (weights.size() != smoothness_grid.size())
            throw std::invalid_argument("PriorSpec: weights/grid size mismatch");
        for (int pm : smoothness_grid)
            if (pm < 1) throw std::invalid_argument("PriorSpec: grid entries must be >= 1");
        for (double w : weights)
            if (w <= 0.0) throw std::invalid_argument("PriorSpec: weights must be positive");
    }
}

int dimension_N(PriorVariant variant, int p, double Q, long n, double B1_sq) {
    if (n < 1) throw std::invalid_argument("dimension_N: n must be >= 1");
    const double nn = static_cast<double>(n);
    double value = 0.0;
    switch (variant) {
        case PriorVariant::GaussianInfinite:
            value = std::pow(8.0 * Q / B1_sq, 1.0 / (2.0 * p)) * std::pow(nn, 1.0 / (2.0 * p + 1.0));
            break;
        case PriorVariant::TruncatedFixed:
        case PriorVariant::TruncatedSieve:
            value = std::pow(2.0 * Q / B1_sq, 1.0 / (2.0 * p)) * std::pow(nn, 1.0 / (2.0 * p + 1.0));
            break;
        case PriorVariant::Sieve:
            throw std::invalid_argument("dimension_N: the sieve prior has no fixed dimension");
        case PriorVariant::AdaptiveMixture:
            value = std::pow(nn, 1.0 / (2.0 * p + 1.0));
            break;
    }
    const double c = std::ceil(value);
    return c < 1.0 ? 1 : static_cast<int>(c);
}

double prior_variance(int j, PriorVariant variant, int p, int N, double alpha, double sigma2) {
    if (j == 0) return 0.0;
    const double v = basis::sobolev_weight(j);
    if (j <= N) return sigma2 * std::pow(v, -(2.0 * p + 1.0));
    if (variant == PriorVariant::GaussianInfinite)
        return sigma2 * std::pow(v, -(4.0 * p + 2.0 * alpha));
    return 0.0;
}

std::vector<double> sieve_weights_finite(double gamma, int N) {
    if (gamma <= 0.0) throw std::invalid_argument("sieve_weights_finite: gamma must be > 0");
    if (N < 1) throw std::invalid_argument("sieve_weights_finite: N must be >= 1");
    std::vector<double> w(N);
    double total = 0.0;
    for (int k = 1; k <= N; ++k) {
        w[k - 1] = std::exp(-gamma * k);
        total += w[k - 1];
    }
    for (double& x : w) x /= total;
    return w;
}

double sieve_weight_infinite(double gamma, int k) {
    if (gamma <= 0.0) throw std::invalid_argument("sieve_weight_infinite: gamma must be > 0");
    if (k < 1) return 0.0;
    return (std::exp(gamma) - 1.0) * std::exp(-gamma * k);
}

namespace {

// Upper bound on the prior variance mass omitted by truncating the infinite
// variant at J_max (integral comparison on v_j = 2k).
double omitted_tail_variance_bound(int J_max, int p, double alpha, double sigma2) {
    const double q = 4.0 * p + 2.0 * alpha;
    const double k0 = std::floor(J_max / 2.0) + 1.0;
    return sigma2 * 2.0 *
           (std::pow(2.0 * k0, -q) + std::pow(2.0 * k0 + 1.0, 1.0 - q) / (2.0 * (q - 1.0)));
}

// One draw from the unrestricted measure of the given variant.
CoefficientVector draw_unrestricted(const PriorSpec& spec, int& ellipsoid_p, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ellipsoid_p = spec.p;
    switch (spec.variant) {
        case PriorVariant::GaussianInfinite: {
            const int N = dimension_N(spec.variant, spec.p, spec.Q, spec.n,
                                      basis::tail_constants(spec.p, spec.Q).B1_sq);
            const int J_max = spec.J_max > 0 ? spec.J_max : 4 * N;
            {
                std::ostringstream key;
                key << "gi-tail-" << spec.p << "-" << spec.alpha << "-" << J_max;
                std::ostringstream msg;
                msg << "gaussian-infinite prior truncated at J_max=" << J_max
                    << "; omitted tail sd bound "
                    << std::sqrt(omitted_tail_variance_bound(J_max, spec.p, spec.alpha, spec.sigma2));
                log_once(key.str(), msg.str());
            }
            CoefficientVector theta;
            theta.coeffs.assign(J_max + 1, 0.0);
            for (int j = 1; j <= J_max; ++j)
                theta.coeffs[j] =
                    std::sqrt(prior_variance(j, spec.variant, spec.p, N, spec.alpha, spec.sigma2)) *
                    normal(rng);
            return theta;
        }
        case PriorVariant::Sieve: {
            std::geometric_distribution<int> geo(1.0 - std::exp(-spec.gamma));
            const int k = geo(rng) + 1;
            CoefficientVector theta;
            theta.coeffs.assign(k + 1, 0.0);
            for (int j = 1; j <= k; ++j)
                theta.coeffs[j] =
                    std::sqrt(prior_variance(j, spec.variant, spec.p, k, spec.alpha, spec.sigma2)) *
                    normal(rng);
            return theta;
        }
        case PriorVariant::TruncatedFixed: {
            const int N = dimension_N(spec.variant, spec.p, spec.Q, spec.n,
                                      basis::tail_constants(spec.p, spec.Q).B1_sq);
            CoefficientVector theta;
            theta.coeffs.assign(N + 1, 0.0);
            for (int j = 1; j <= N; ++j)
                theta.coeffs[j] =
                    std::sqrt(prior_variance(j, spec.variant, spec.p, N, spec.alpha, spec.sigma2)) *
                    normal(rng);
            return theta;
        }
        case PriorVariant::TruncatedSieve: {
            const int N = dimension_N(spec.variant, spec.p, spec.Q, spec.n,
                                      basis::tail_constants(spec.p, spec.Q).B1_sq);
            const std::vector<double> lambda = sieve_weights_finite(spec.gamma, N);
            std::discrete_distribution<int> pick(lambda.begin(), lambda.end());
            const int k = pick(rng) + 1;
            CoefficientVector theta;
            theta.coeffs.assign(k + 1, 0.0);
            for (int j = 1; j <= k; ++j)
                theta.coeffs[j] =
                    std::sqrt(prior_variance(j, spec.variant, spec.p, k, spec.alpha, spec.sigma2)) *
                    normal(rng);
            return theta;
        }
        case PriorVariant::AdaptiveMixture: {
            std::discrete_distribution<int> pick(spec.weights.begin(), spec.weights.end());
            const int m = pick(rng);
            const int pm = spec.smoothness_grid[m];
            ellipsoid_p = pm;
            const int Nm = dimension_N(PriorVariant::AdaptiveMixture, pm, spec.Q, spec.n, 0.0);
            CoefficientVector theta;
            theta.coeffs.assign(Nm + 1, 0.0);
            for (int j = 1; j <= Nm; ++j)
                theta.coeffs[j] =
                    std::sqrt(prior_variance(j, spec.variant, pm, Nm, spec.alpha, spec.sigma2)) *
                    normal(rng);
            return theta;
        }
    }
    throw std::logic_error("draw_unrestricted: unreachable");
}

}  // namespace

CoefficientVector sample_prior(const PriorSpec& spec, const ModelConfig& cfg, Rng& rng) {
    spec.validate();
    (void)cfg;
    for (long rejections = 0; rejections < kMaxConsecutiveRejections; ++rejections) {
        int ellipsoid_p = spec.p;
        CoefficientVector theta = draw_unrestricted(spec, ellipsoid_p, rng);
        if (sobolev_norm_sq(theta, ellipsoid_p) < spec.Q) return theta;
    }
    std::ostringstream msg;
    msg << "sample_prior: " << kMaxConsecutiveRejections
        << " consecutive rejections for the " << to_string(spec.variant)
        << " prior (p=" << spec.p << ", Q=" << spec.Q
        << "); Q is too small for the variance schedule";
    throw std::runtime_error(msg.str());
}

PriorMassCheck prior_mass_condition_check(const PriorSpec& spec, const CoefficientVector& theta0,
                                          long n, double c1, double c2, long n_draws,
                                          const ModelConfig& cfg, std::uint64_t seed,
                                          double eps_override) {
    const double p = static_cast<double>(spec.p);
    const double eps_n =
        eps_override > 0.0 ? eps_override : std::pow(static_cast<double>(n), -p / (2.0 * p + 1.0));
    const double radius_sq = cfg.tail.B1_sq * eps_n * eps_n;

    Rng rng = make_rng(seed);
    long hits = 0;
    for (long d = 0; d < n_draws; ++d) {
        const CoefficientVector theta = sample_prior(spec, cfg, rng);
        const int J = std::max(theta.support_dim(), theta0.support_dim());
        double dist_sq = 0.0;
        for (int j = 1; j <= J; ++j) {
            const double diff = theta.at(j) - theta0.at(j);
            dist_sq += diff * diff;
        }
        if (dist_sq <= radius_sq) ++hits;
    }
    PriorMassCheck out;
    out.mass = static_cast<double>(hits) / static_cast<double>(n_draws);
    out.threshold = c2 * std::exp(-c1 * static_cast<double>(n) * eps_n * eps_n);
    out.eps_n = eps_n;
    out.hits = hits;
    out.draws = n_draws;
    return out;
}

double chi_square_lower_mass(int N, double Q) {
    boost::math::chi_squared dist(static_cast<double>(N));
    return boost::math::cdf(dist, Q);
}

}  // namespace trigdens
