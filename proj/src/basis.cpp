#include "trigdens/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace trigdens::basis {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double eval(int j, double x) {
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("basis::eval: x must lie in [0,1]");
    if (j == 0) return 1.0;
    const int k = (j + 1) / 2;
    const double a = kTwoPi * k * x;
    return (j % 2 == 1) ? kSqrt2 * std::sin(a) : kSqrt2 * std::cos(a);
}

double sobolev_weight(int j) {
    if (j == 0) return 0.0;
    return (j % 2 == 1) ? static_cast<double>(j + 1) : static_cast<double>(j);
}

TailConstants tail_constants(int p, double Q) {
    if (p < 1) throw std::invalid_argument("tail_constants: p must be >= 1");
    if (Q <= 0.0) throw std::invalid_argument("tail_constants: Q must be > 0");

    // A = 2 sum_{k>=1} (2k)^{-2p}.  Partial sum plus the midpoint-rule tail
    // integral int_{K+1/2}^inf (2t)^{-2p} dt = (2K+1)^{1-2p} / (2(2p-1));
    // the correction error is below (p/6)(2K+1)^{-2p-1}.  A literal
    // bound-only stop would need ~5e11 terms at p = 1.
    const double expo = 2.0 * p;
    double partial = 0.0;
    double tail = 0.0;
    for (long k = 1;; ++k) {
        partial += std::pow(2.0 * static_cast<double>(k), -expo);
        const double edge = 2.0 * static_cast<double>(k) + 1.0;
        const double err_bound = (p / 6.0) * std::pow(edge, -expo - 1.0);
        if (err_bound < 1e-12) {
            tail = std::pow(edge, 1.0 - expo) / (2.0 * (expo - 1.0));
            break;
        }
    }
    TailConstants tc;
    tc.A = 2.0 * (partial + tail);
    tc.B = std::sqrt(2.0 * Q * tc.A);
    tc.B1_sq = std::exp(-8.0 * tc.B);
    return tc;
}

std::vector<double> grid_midpoints(int m) {
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = (i + 0.5) / m;
    return x;
}

std::vector<double> theta_dot_phi(std::span<const double> theta, int m) {
    std::vector<double> out(m, theta.empty() ? 0.0 : theta[0]);
    const int J = static_cast<int>(theta.size()) - 1;
    if (J < 1) return out;
    const int kmax = (J + 1) / 2;
    for (int i = 0; i < m; ++i) {
        const double x = (i + 0.5) / m;
        const double c1 = std::cos(kTwoPi * x), s1 = std::sin(kTwoPi * x);
        double ck = c1, sk = s1;
        double acc = 0.0;
        for (int k = 1; k <= kmax; ++k) {
            const int js = 2 * k - 1, jc = 2 * k;
            if (js <= J) acc += theta[js] * sk;
            if (jc <= J) acc += theta[jc] * ck;
            const double cn = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = cn;
        }
        out[i] += kSqrt2 * acc;
    }
    return out;
}

}  // namespace trigdens::basis
