#pragma once

// Test-only oracles, independent of the library's quadrature and solver paths.

#include <cmath>
#include <functional>

namespace oracles {

/// Composite Simpson quadrature; independent route for the trapezoid-based
/// norms in the library.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4096) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double pi() { return std::acos(-1.0); }

// Frozen expected values, computed from closed forms before the build:
//   integral of x^2 over (0,1) = 1/3
constexpr double kL2NormOfX = 0.57735026918962576;  // sqrt(1/3)
//   v = 1: Y(x) = x - 1/2, ||Y||^2 = 1/12
constexpr double kYNormSqConst = 1.0 / 12.0;
//   v = sin(pi x): Y(x) = -cos(pi x)/pi, ||Y||^2 = 1/(2 pi^2)
inline double y_norm_sq_sine() { return 1.0 / (2.0 * pi() * pi()); }
//   y0 = 4 sin(pi x/2): E(0) = (1/2) int (2 pi cos(pi x/2))^2 = pi^2
inline double energy_of_slide_data() { return pi() * pi(); }
//   free evolution of y0 = x under zero Dirichlet control returns y(2,.) = x,
//   y_t(2,.) = 0, so the penalty term is ||x|| = 1/sqrt(3)
constexpr double kPenaltyZeroControl = kL2NormOfX;
//   ||u*||^2 for y0 = x, T = 2: int_0^2 ((1-t)/2)^2 dt = 1/6
constexpr double kUStarNormSq = 1.0 / 6.0;
//   best bang-bang terminal norm for y0 = sin(pi x):
//   min_{c in {0,.5,1}} ||sin(pi x) - c|| = sqrt(3/4 - 2/pi)
inline double best_bangbang_norm() { return std::sqrt(0.75 - 2.0 / pi()); }

}  // namespace oracles
