#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>

namespace wavectl {

using Eigen::ArrayXd;

/// Composite trapezoid rule on uniformly spaced samples.
template <typename Derived>
double trapezoid(const Eigen::ArrayBase<Derived>& v, double dx) {
    const Eigen::Index n = v.size();
    if (n < 2) return 0.0;
    double s = 0.5 * (v(0) + v(n - 1));
    for (Eigen::Index i = 1; i + 1 < n; ++i) s += v(i);
    return s * dx;
}

/// Cumulative trapezoid rule; result(i) = integral over [x_0, x_i], result(0) = 0.
template <typename Derived>
ArrayXd cumulative_trapezoid(const Eigen::ArrayBase<Derived>& v, double dx) {
    ArrayXd out(v.size());
    out(0) = 0.0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        out(i) = out(i - 1) + 0.5 * dx * (v(i - 1) + v(i));
    return out;
}

/// Uniformly sampled real function on [0,1] with piecewise-linear interpolation.
/// values holds the n_cells+1 samples at x_i = i/n_cells.
class GridFunction {
public:
    GridFunction(int n_cells, ArrayXd values);

    static GridFunction zero(int n_cells);
    static GridFunction constant(int n_cells, double c);
    static GridFunction from_function(int n_cells, const std::function<double(double)>& f);

    int n_cells() const { return n_cells_; }
    double dx() const { return 1.0 / n_cells_; }
    const ArrayXd& values() const { return values_; }
    double operator()(int i) const { return values_(i); }

    /// Piecewise-linear evaluation at x in [0,1].
    double value_at(double x) const;

    /// Per-cell constant slopes of the piecewise-linear interpolant (length n_cells).
    ArrayXd cell_slopes() const;

    /// Values at cell midpoints, equal to per-cell means of the interpolant (length n_cells).
    ArrayXd cell_midvalues() const;

private:
    int n_cells_;
    ArrayXd values_;
};

/// sqrt( integral over (0,1) of f^2 ) by the trapezoid rule.
double l2_norm(const GridFunction& f);

/// Antiderivative Y with Y'(x) = v(x) and the normalization
/// Y(0) = - integral over (0,1) of integral_0^x v(z) dz dx,
/// so that ||Y||_{L^2} represents the H^{-1} size of v.
GridFunction hminus1_antiderivative(const GridFunction& v);

/// (1/2) * integral of (y_x^2 + y_t^2) from node samples, trapezoid rule.
double energy(const GridFunction& y_x, const GridFunction& y_t);
double energy(const ArrayXd& y_x_nodes, const ArrayXd& y_t_nodes, double dx);

/// Same energy from per-cell constant samples (midpoint rule; exact for the
/// characteristic solver's piecewise-constant derivative fields).
double energy_cells(const ArrayXd& y_x_cells, const ArrayXd& y_t_cells, double dx);

}  // namespace wavectl
