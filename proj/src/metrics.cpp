#include "trigdens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trigdens::metrics {

namespace {
void check_grids(const GridDensity& f, const GridDensity& g) {
    if (f.grid_size() != g.grid_size() || f.grid_size() == 0)
        throw std::invalid_argument("metrics: grid mismatch");
}
}  // namespace

double hellinger(const GridDensity& f, const GridDensity& g) {
    check_grids(f, g);
    double s = 0.0;
    for (int i = 0; i < f.grid_size(); ++i) {
        const double d = std::sqrt(f.values[i]) - std::sqrt(g.values[i]);
        s += d * d;
    }
    return std::sqrt(s / f.grid_size());
}

double kl(const GridDensity& f, const GridDensity& g) {
    check_grids(f, g);
    double s = 0.0;
    for (int i = 0; i < f.grid_size(); ++i)
        s += f.values[i] * std::log(f.values[i] / g.values[i]);
    return s / f.grid_size();
}

double l2(const GridDensity& f, const GridDensity& g) {
    check_grids(f, g);
    double s = 0.0;
    for (int i = 0; i < f.grid_size(); ++i) {
        const double d = f.values[i] - g.values[i];
        s += d * d;
    }
    return std::sqrt(s / f.grid_size());
}

double sup_ratio(const GridDensity& f, const GridDensity& g) {
    check_grids(f, g);
    double r = 0.0;
    for (int i = 0; i < f.grid_size(); ++i)
        r = std::max(r, f.values[i] / g.values[i]);
    return r;
}

double kl_coefficient_bound(const CoefficientVector& theta_prime,
                            const CoefficientVector& theta,
                            const ModelConfig& cfg) {
    if (!in_ellipsoid(theta_prime, cfg) || !in_ellipsoid(theta, cfg))
        throw std::invalid_argument("kl_coefficient_bound: point outside E_p(Q)");
    const int J = std::max(theta_prime.support_dim(), theta.support_dim());
    double s = 0.0;
    for (int j = 1; j <= J; ++j) {
        const double d = theta_prime.at(j) - theta.at(j);
        s += d * d;
    }
    return 0.5 * std::exp(4.0 * cfg.tail.B) * s;
}

}  // namespace trigdens::metrics
