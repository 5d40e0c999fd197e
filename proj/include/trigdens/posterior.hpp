#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trigdens/expfam.hpp"

namespace trigdens {

struct McmcParams {
    long burn_in = 10'000;
    int thinning = 10;
    long n_draws = 1'000;
    // Proposal sd per coordinate is step_scale * prior sd; unset means the
    // random-walk default 2.4/sqrt(N).
    std::optional<double> step_scale;
    bool adapt_during_burn_in = true;  // tunes toward ~30% acceptance, frozen after burn-in
    int psi_quad_points = 1024;
};

struct Chain {
    std::vector<CoefficientVector> draws;  // post burn-in, thinned
    double acceptance_rate = 0.0;          // post burn-in
    McmcParams params;
    int N = 0;
    int p = 0;
    double Q = 0.0;
    std::uint64_t seed = 0;
};

// Random-walk Metropolis targeting the posterior of the truncated
// fixed-dimension prior restricted to E_{p,N}(Q): Gaussian proposals scaled
// per coordinate by the prior sd, out-of-ellipsoid proposals rejected via the
// prior indicator, psi recomputed by quadrature for every proposal. An empty
// dataset targets the restricted prior itself.
Chain rw_metropolis(const Dataset& data, int p, double Q, int N, const ModelConfig& cfg,
                    const McmcParams& params, std::uint64_t seed);

// Pointwise average of f_theta over the chain draws, renormalized.
GridDensity posterior_mean_density(const Chain& chain, const ModelConfig& cfg);

// Fraction of chain draws with d_H(truth, f_theta) > radius.
double contraction_diagnostic(const Chain& chain, const GridDensity& truth, double radius,
                              const ModelConfig& cfg);
double contraction_diagnostic(const Chain& chain, const CoefficientVector& theta0, double radius,
                              const ModelConfig& cfg);

}  // namespace trigdens
