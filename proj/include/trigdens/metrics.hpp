#pragma once

#include "trigdens/expfam.hpp"

namespace trigdens::metrics {

// All metrics are computed on the shared quadrature grid of the two inputs;
// a grid-size mismatch throws std::invalid_argument.

// d_H(f,g) = { int (sqrt f - sqrt g)^2 }^{1/2}, in [0, sqrt 2].
double hellinger(const GridDensity& f, const GridDensity& g);

// K(f||g) = int f log(f/g); relies on GridDensity positivity, no clamping.
double kl(const GridDensity& f, const GridDensity& g);

// ||f - g||_2
double l2(const GridDensity& f, const GridDensity& g);

// sup_x f(x)/g(x) over the grid.
double sup_ratio(const GridDensity& f, const GridDensity& g);

// Coefficient-space bound (1/2) e^{4B} sum_{j>=1} (theta'_j - theta_j)^2,
// which dominates K(f_theta' || f_theta) for any pair in E_p(Q). Throws
// std::invalid_argument if either point is outside the ellipsoid.
double kl_coefficient_bound(const CoefficientVector& theta_prime,
                            const CoefficientVector& theta,
                            const ModelConfig& cfg);

}  // namespace trigdens::metrics
