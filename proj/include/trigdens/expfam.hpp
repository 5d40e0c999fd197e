#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trigdens/basis.hpp"
#include "trigdens/rng.hpp"

namespace trigdens {

inline constexpr int kDefaultQuadPoints = 4096;

// Finite-support coefficient sequence theta = (theta_0, ..., theta_J, 0, ...).
// coeffs[0] is theta_0, which never affects the density.
struct CoefficientVector {
    std::vector<double> coeffs;

    CoefficientVector() = default;
    explicit CoefficientVector(std::vector<double> c) : coeffs(std::move(c)) {}

    int support_dim() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }
    double at(int j) const {
        return (j >= 0 && j < static_cast<int>(coeffs.size())) ? coeffs[j] : 0.0;
    }
};

struct ModelConfig {
    int p = 2;
    double Q = 1.0;
    int quad_points = kDefaultQuadPoints;
    basis::TailConstants tail{};

    // Validates p >= 1, Q > 0, quad_points a power of two >= 256, and fills
    // in the derived tail constants.
    static ModelConfig make(int p, double Q, int quad_points = kDefaultQuadPoints);
};

// Density values at the midpoints x_i = (i + 1/2)/m; strictly positive and
// integrating to 1 under the midpoint rule.
struct GridDensity {
    std::vector<double> values;

    int grid_size() const { return static_cast<int>(values.size()); }
    double integral() const;
};

struct Dataset {
    std::vector<double> samples;
    std::uint64_t seed = 0;

    long n() const { return static_cast<long>(samples.size()); }
};

// psi(theta) = log int_0^1 exp{theta . phi(t)} dt, midpoint quadrature with
// max-subtraction.
double log_normalizer(const CoefficientVector& theta, int quad_points);
double log_normalizer(const CoefficientVector& theta, const ModelConfig& cfg);

// f_theta = exp{theta . phi - psi(theta)} on the quadrature grid.
GridDensity density_eval(const CoefficientVector& theta, int quad_points);
GridDensity density_eval(const CoefficientVector& theta, const ModelConfig& cfg);

// Builds a normalized grid density from log-density values at the midpoints.
GridDensity density_from_log_values(std::vector<double> log_values);

// sum_{j>=1} v_j^{2p} theta_j^2
double sobolev_norm_sq(const CoefficientVector& theta, int p);

// Strict membership test sum v_j^{2p} theta_j^2 < Q.
bool in_ellipsoid(const CoefficientVector& theta, const ModelConfig& cfg);

// Inverse-CDF sampling from the grid density: piecewise-constant density per
// cell, linear interpolation of the CDF within a cell. Deterministic given
// the seed.
Dataset sample_from_density(const GridDensity& f, long n, std::uint64_t seed);
Dataset sample(const CoefficientVector& theta, long n, const ModelConfig& cfg, std::uint64_t seed);

// Empirical Fourier coefficients phibar_j = n^{-1} sum_i phi_j(X_i) for
// j = 1..J (returned 0-based, so result[0] is phibar_1). Rejects empty data.
std::vector<double> empirical_coeffs(const Dataset& data, int J);

}  // namespace trigdens
