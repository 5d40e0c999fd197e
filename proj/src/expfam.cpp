#include "trigdens/expfam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace trigdens {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }
}  // namespace

ModelConfig ModelConfig::make(int p, double Q, int quad_points) {
    if (p < 1) throw std::invalid_argument("ModelConfig: p must be >= 1");
    if (Q <= 0.0) throw std::invalid_argument("ModelConfig: Q must be > 0");
    if (quad_points < 256 || !is_power_of_two(quad_points))
        throw std::invalid_argument("ModelConfig: quad_points must be a power of two >= 256");
    ModelConfig cfg;
    cfg.p = p;
    cfg.Q = Q;
    cfg.quad_points = quad_points;
    cfg.tail = basis::tail_constants(p, Q);
    return cfg;
}

double GridDensity::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double log_normalizer(const CoefficientVector& theta, int quad_points) {
    const std::vector<double> s = basis::theta_dot_phi(theta.coeffs, quad_points);
    const double m = *std::max_element(s.begin(), s.end());
    double acc = 0.0;
    for (double v : s) acc += std::exp(v - m);
    return m + std::log(acc / quad_points);
}

double log_normalizer(const CoefficientVector& theta, const ModelConfig& cfg) {
    return log_normalizer(theta, cfg.quad_points);
}

GridDensity density_from_log_values(std::vector<double> log_values) {
    const int m = static_cast<int>(log_values.size());
    const double mx = *std::max_element(log_values.begin(), log_values.end());
    double acc = 0.0;
    for (double v : log_values) acc += std::exp(v - mx);
    const double log_norm = mx + std::log(acc / m);
    GridDensity f;
    f.values.resize(m);
    for (int i = 0; i < m; ++i) f.values[i] = std::exp(log_values[i] - log_norm);
    return f;
}

GridDensity density_eval(const CoefficientVector& theta, int quad_points) {
    return density_from_log_values(basis::theta_dot_phi(theta.coeffs, quad_points));
}

GridDensity density_eval(const CoefficientVector& theta, const ModelConfig& cfg) {
    return density_eval(theta, cfg.quad_points);
}

double sobolev_norm_sq(const CoefficientVector& theta, int p) {
    double s = 0.0;
    for (int j = 1; j <= theta.support_dim(); ++j) {
        const double t = theta.coeffs[j];
        if (t != 0.0) s += std::pow(basis::sobolev_weight(j), 2.0 * p) * t * t;
    }
    return s;
}

bool in_ellipsoid(const CoefficientVector& theta, const ModelConfig& cfg) {
    return sobolev_norm_sq(theta, cfg.p) < cfg.Q;
}

Dataset sample_from_density(const GridDensity& f, long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_from_density: n must be >= 1");
    const int m = f.grid_size();
    // CDF at the cell edges i/m; cdf[m] is forced to 1 so the inversion is
    // exact even with quadrature rounding.
    std::vector<double> cdf(m + 1, 0.0);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        acc += f.values[i];
        cdf[i + 1] = acc / m;
    }
    const double total = cdf[m];
    for (int i = 1; i <= m; ++i) cdf[i] /= total;

    Dataset out;
    out.seed = seed;
    out.samples.resize(n);
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (long i = 0; i < n; ++i) {
        const double u = unif(rng);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        int cell = static_cast<int>(it - cdf.begin()) - 1;
        cell = std::clamp(cell, 0, m - 1);
        const double lo = cdf[cell], hi = cdf[cell + 1];
        const double frac = (hi > lo) ? (u - lo) / (hi - lo) : 0.5;
        out.samples[i] = (cell + frac) / m;
    }
    return out;
}

Dataset sample(const CoefficientVector& theta, long n, const ModelConfig& cfg, std::uint64_t seed) {
    return sample_from_density(density_eval(theta, cfg), n, seed);
}

std::vector<double> empirical_coeffs(const Dataset& data, int J) {
    if (data.samples.empty()) throw std::invalid_argument("empirical_coeffs: empty dataset");
    if (J < 1) throw std::invalid_argument("empirical_coeffs: J must be >= 1");
    // Accumulation order is canonicalized by sorting so that permutations of
    // the dataset produce bit-identical coefficients.
    std::vector<double> ordered = data.samples;
    std::sort(ordered.begin(), ordered.end());
    const int kmax = (J + 1) / 2;
    std::vector<double> sums(J, 0.0);
    for (double x : ordered) {
        const double c1 = std::cos(kTwoPi * x), s1 = std::sin(kTwoPi * x);
        double ck = c1, sk = s1;
        for (int k = 1; k <= kmax; ++k) {
            const int js = 2 * k - 1, jc = 2 * k;
            if (js <= J) sums[js - 1] += sk;
            if (jc <= J) sums[jc - 1] += ck;
            const double cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
        }
    }
    const double scale = kSqrt2 / static_cast<double>(data.samples.size());
    for (double& v : sums) v *= scale;
    return sums;
}

}  // namespace trigdens
