#pragma once

#include <span>
#include <vector>

namespace trigdens::basis {

// Orthonormal trigonometric system on [0,1]:
//   phi_0 = 1, phi_{2k-1}(x) = sqrt(2) sin(2 pi k x), phi_{2k}(x) = sqrt(2) cos(2 pi k x).
// Throws std::domain_error if x is outside [0,1].
double eval(int j, double x);

// Frequency weights v_0 = 0, v_j = j+1 for odd j, v_j = j for even j,
// so that v_{2k-1} = v_{2k} = 2k.
double sobolev_weight(int j);

struct TailConstants {
    double A;      // sum_{j>=1} v_j^{-2p}
    double B;      // sqrt(2 Q A)
    double B1_sq;  // e^{-8B}
};

// A is summed term by term with an integral tail correction; the stopping
// rule bounds the correction error below 1e-12 so the result is stable at
// double precision. Throws std::invalid_argument for p < 1 or Q <= 0.
TailConstants tail_constants(int p, double Q);

// Midpoints x_i = (i + 1/2)/m of the uniform quadrature grid.
std::vector<double> grid_midpoints(int m);

// Evaluates sum_{j=0..J} theta[j] * phi_j(x_i) on the m-point midpoint grid.
// Uses the complex rotation e^{i 2 pi k x} = (e^{i 2 pi x})^k so the inner
// loop is trig-free.
std::vector<double> theta_dot_phi(std::span<const double> theta, int m);

}  // namespace trigdens::basis
