#include "trigdens/harness.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "trigdens/io.hpp"
#include "trigdens/metrics.hpp"
#include "trigdens/parallel.hpp"

namespace trigdens {

TargetDensity TargetDensity::logsine() {
    TargetDensity t;
    t.kind = Kind::LogSine;
    return t;
}

TargetDensity TargetDensity::finite(CoefficientVector theta) {
    TargetDensity t;
    t.kind = Kind::FiniteTheta;
    t.theta = std::move(theta);
    return t;
}

GridDensity TargetDensity::density(int quad_points) const {
    if (kind == Kind::FiniteTheta) return density_eval(theta, quad_points);
    std::vector<double> log_vals(quad_points);
    for (int i = 0; i < quad_points; ++i)
        log_vals[i] = std::sin(std::numbers::pi * (i + 0.5) / quad_points);
    return density_from_log_values(std::move(log_vals));
}

Dataset TargetDensity::draw(long n, std::uint64_t seed, int quad_points) const {
    return sample_from_density(density(quad_points), n, seed);
}

std::string TargetDensity::name() const {
    if (kind == Kind::LogSine) return "logsine";
    std::string s = "theta(";
    for (std::size_t i = 0; i < theta.coeffs.size(); ++i) {
        if (i) s += ",";
        s += io::format_double(theta.coeffs[i]);
    }
    return s + ")";
}

ConditionDiagnostics condition_diagnostics(const TargetDensity& target, int p0,
                                           const ModelConfig& cfg) {
    if (p0 < 1) throw std::invalid_argument("condition_diagnostics: p0 must be >= 1");
    const int m = cfg.quad_points;
    const GridDensity f = target.density(m);
    // phi_j on an m-point grid is quadrature-exact only while frequencies stay
    // below the grid Nyquist; phi_j^2 doubles the frequency, so stop at m/4.
    const int j_cap = m / 4;

    ConditionDiagnostics out;
    double s11_prev = 0.0, s12_prev = 0.0;
    int checkpoint = 16;
    bool s11_flag = false, s12_flag = false;
    double S11 = 0.0, S12 = 0.0;
    for (int j = 1; j <= j_cap; ++j) {
        double e0 = 0.0, e0_sq = 0.0;
        for (int i = 0; i < m; ++i) {
            const double ph = basis::eval(j, (i + 0.5) / m);
            e0 += ph * f.values[i];
            e0_sq += ph * ph * f.values[i];
        }
        e0 /= m;
        e0_sq /= m;
        const double var = e0_sq - e0 * e0;
        S11 += std::pow(basis::sobolev_weight(j), 2.0 * p0) * e0 * e0;
        S12 += var;
        out.max_abs_mean = std::max(out.max_abs_mean, std::abs(e0));
        out.max_variance = std::max(out.max_variance, var);
        if (j == checkpoint) {
            if (j > 16) {
                const double d11 = S11 - s11_prev;
                const double d12 = S12 - s12_prev;
                s11_flag = d11 <= 1e-8 * std::max(S11, 1e-300);
                s12_flag = d12 <= 1e-8 * std::max(S12, 1e-300);
                if (s11_flag && s12_flag) {
                    out.terms_used = j;
                    out.S11 = S11;
                    out.S12 = S12;
                    out.s11_converged = true;
                    out.s12_converged = true;
                    return out;
                }
            }
            s11_prev = S11;
            s12_prev = S12;
            checkpoint *= 2;
        }
    }
    out.S11 = S11;
    out.S12 = S12;
    out.s11_converged = s11_flag;
    out.s12_converged = s12_flag;
    out.terms_used = j_cap;
    return out;
}

Figure1Result figure1_replication(std::uint64_t seed, const ModelConfig& cfg, double gamma,
                                  long n, const std::string& csv_out) {
    const TargetDensity target = TargetDensity::logsine();
    Figure1Result out;
    out.truth = target.density(cfg.quad_points);
    out.data = target.draw(n, seed, cfg.quad_points);
    out.est9 = estimate_fixed(out.data, 2, 1.0, cfg);
    out.est10 = estimate_sieve(out.data, 2, 1.0, gamma, cfg);
    out.dh9 = metrics::hellinger(out.est9.density, out.truth);
    out.dh10 = metrics::hellinger(out.est10.density, out.truth);
    out.dh_est9_est10 = metrics::hellinger(out.est9.density, out.est10.density);
    out.kl9 = metrics::kl(out.truth, out.est9.density);
    out.kl10 = metrics::kl(out.truth, out.est10.density);
    out.l2_9 = metrics::l2(out.truth, out.est9.density);
    out.l2_10 = metrics::l2(out.truth, out.est10.density);
    if (!csv_out.empty())
        io::write_comparison_csv(csv_out, out.truth, out.est9.density, out.est10.density);
    return out;
}

namespace {

void validate_grid(const std::vector<long>& n_grid, int replications) {
    if (n_grid.size() < 3) throw std::invalid_argument("n_grid needs >= 3 points");
    for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
        if (n_grid[i] >= n_grid[i + 1])
            throw std::invalid_argument("n_grid must be strictly increasing");
    if (n_grid.front() < 1) throw std::invalid_argument("n_grid entries must be >= 1");
    if (std::log10(static_cast<double>(n_grid.back()) / n_grid.front()) < 1.5)
        throw std::invalid_argument("n_grid must span >= 1.5 decades");
    if (replications < 50) throw std::invalid_argument("need >= 50 replications");
}

struct Ols {
    double slope, intercept, slope_se;
    std::vector<double> residuals;
};

Ols fit_loglog(const std::vector<long>& n_grid, const std::vector<double>& risks) {
    const std::size_t k = n_grid.size();
    std::vector<double> lx(k), ly(k);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        lx[i] = std::log(static_cast<double>(n_grid[i]));
        ly[i] = std::log(risks[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    Ols out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.residuals.resize(k);
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        out.residuals[i] = ly[i] - (out.intercept + out.slope * lx[i]);
        rss += out.residuals[i] * out.residuals[i];
    }
    out.slope_se = (k > 2) ? std::sqrt(rss / (k - 2) / sxx) : 0.0;
    return out;
}

void mean_se(const std::vector<double>& xs, double& mean, double& se) {
    const std::size_t r = xs.size();
    mean = 0.0;
    for (double x : xs) mean += x;
    mean /= r;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (r > 1 ? r - 1 : 1);
    se = std::sqrt(var / r);
}

}  // namespace

RateStudyReport rate_study(const RateStudyConfig& config, const ModelConfig& cfg) {
    validate_grid(config.n_grid, config.replications);
    if (config.estimator != EstimatorKind::Fixed && config.estimator != EstimatorKind::Sieve)
        throw std::invalid_argument("rate_study: estimator must be fixed or sieve");

    const GridDensity truth = config.target.density(cfg.quad_points);
    const std::size_t levels = config.n_grid.size();
    const long reps = config.replications;
    std::vector<double> h2(levels * reps), klv(levels * reps), l2sq(levels * reps);

    parallel_for(static_cast<long>(levels) * reps, config.threads, [&](long idx) {
        const std::size_t level = idx / reps;
        const long n = config.n_grid[level];
        const Dataset data = config.target.draw(n, mix_seed(config.seed, idx), cfg.quad_points);
        const EstimateResult est =
            config.estimator == EstimatorKind::Fixed
                ? estimate_fixed(data, config.p, config.Q, cfg)
                : estimate_sieve(data, config.p, config.Q, config.gamma, cfg);
        const double dh = metrics::hellinger(truth, est.density);
        h2[idx] = dh * dh;
        klv[idx] = metrics::kl(truth, est.density);
        const double dl2 = metrics::l2(truth, est.density);
        l2sq[idx] = dl2 * dl2;
    });

    RateStudyReport report;
    report.n_grid = config.n_grid;
    report.replications = config.replications;
    report.seed = config.seed;
    report.reference_slope = -2.0 * config.p / (2.0 * config.p + 1.0);
    for (std::size_t level = 0; level < levels; ++level) {
        std::vector<double> slice_h2(h2.begin() + level * reps, h2.begin() + (level + 1) * reps);
        std::vector<double> slice_kl(klv.begin() + level * reps, klv.begin() + (level + 1) * reps);
        std::vector<double> slice_l2(l2sq.begin() + level * reps, l2sq.begin() + (level + 1) * reps);
        double mean, se;
        mean_se(slice_h2, mean, se);
        report.mean_h2.push_back(mean);
        report.se_h2.push_back(se);
        mean_se(slice_kl, mean, se);
        report.mean_kl.push_back(mean);
        mean_se(slice_l2, mean, se);
        report.mean_l2_sq.push_back(mean);
    }
    const Ols ols = fit_loglog(report.n_grid, report.mean_h2);
    report.slope = ols.slope;
    report.slope_se = ols.slope_se;
    report.intercept = ols.intercept;
    report.residuals = ols.residuals;
    return report;
}

AdaptiveStudyReport adaptive_study(const AdaptiveStudyConfig& config, const ModelConfig& cfg) {
    if (config.smoothness_grid.empty())
        throw std::invalid_argument("adaptive_study: empty smoothness grid");
    if (config.smoothness_grid.size() != config.weights.size())
        throw std::invalid_argument("adaptive_study: weights/grid size mismatch");
    if (config.n_grid.empty()) throw std::invalid_argument("adaptive_study: empty n_grid");
    if (config.replications < 1) throw std::invalid_argument("adaptive_study: replications >= 1");

    const GridDensity truth = config.target.density(cfg.quad_points);
    const std::size_t levels = config.n_grid.size();
    const long reps = config.replications;
    std::vector<double> coarse(levels * reps), ah2(levels * reps), oh2(levels * reps);

    parallel_for(static_cast<long>(levels) * reps, config.threads, [&](long idx) {
        const std::size_t level = idx / reps;
        const long n = config.n_grid[level];
        const Dataset data = config.target.draw(n, mix_seed(config.seed, idx), cfg.quad_points);
        const EstimateResult adaptive =
            estimate_adaptive(data, config.smoothness_grid, config.weights, config.Q, cfg);
        double below = 0.0;
        for (std::size_t i = 0; i < config.smoothness_grid.size(); ++i)
            if (config.smoothness_grid[i] < config.p0) below += adaptive.model_weights[i];
        coarse[idx] = below;
        const double dha = metrics::hellinger(truth, adaptive.density);
        ah2[idx] = dha * dha;
        const int N0 = dimension_N(PriorVariant::AdaptiveMixture, config.p0, config.Q, n, 0.0);
        const EstimateResult oracle = estimate_fixed_dim(data, config.p0, N0, cfg);
        const double dho = metrics::hellinger(truth, oracle.density);
        oh2[idx] = dho * dho;
    });

    AdaptiveStudyReport report;
    report.n_grid = config.n_grid;
    report.replications = config.replications;
    report.seed = config.seed;
    for (std::size_t level = 0; level < levels; ++level) {
        auto slice = [&](const std::vector<double>& src) {
            return std::vector<double>(src.begin() + level * reps, src.begin() + (level + 1) * reps);
        };
        double mean, se;
        mean_se(slice(coarse), mean, se);
        report.mean_coarse_weight.push_back(mean);
        report.se_coarse_weight.push_back(se);
        mean_se(slice(ah2), mean, se);
        report.mean_adaptive_h2.push_back(mean);
        report.se_adaptive_h2.push_back(se);
        mean_se(slice(oh2), mean, se);
        report.mean_oracle_h2.push_back(mean);
        report.se_oracle_h2.push_back(se);
    }
    return report;
}

}  // namespace trigdens
