#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace wavectl {

using Eigen::ArrayXd;

/// Interpolation rule a ControlSignal declares for its samples.
enum class Interp {
    PiecewiseConstant,  // n_steps cell values, constant on [t_j, t_{j+1})
    PiecewiseLinear,    // n_steps+1 node values, linear on each cell
};

/// Sampled boundary control on a uniform time grid over [0, horizon].
///
/// Piecewise-constant signals are the cell-average view of an L^2 control;
/// piecewise-linear signals carry exact node values, which the Dirichlet
/// closure of the characteristic solver needs for lattice-exact steering.
class ControlSignal {
public:
    ControlSignal(double horizon, int n_steps, Interp interp, ArrayXd values);

    static ControlSignal zero(double horizon, int n_steps,
                              Interp interp = Interp::PiecewiseConstant);
    static ControlSignal piecewise_constant(double horizon, ArrayXd cell_values);
    static ControlSignal piecewise_linear(double horizon, ArrayXd node_values);

    double horizon() const { return horizon_; }
    int n_steps() const { return n_steps_; }
    double dt() const { return horizon_ / n_steps_; }
    Interp interp() const { return interp_; }
    const ArrayXd& values() const { return values_; }

    /// Time of sample j: cell midpoints for piecewise-constant, nodes for piecewise-linear.
    double sample_time(int j) const;

    /// Pointwise value of the interpolant; at a jump of a piecewise-constant
    /// signal returns the right-continuous value.
    double value_at(double t) const;

    /// One-sided limits just inside (t0, t1); exact for any subinterval of a cell.
    double left_limit_in(double t0) const;   // value at t0+
    double right_limit_in(double t1) const;  // value at t1-

    /// Exact integral mean over [t0, t1].
    double mean_on(double t0, double t1) const;

    /// Exact squared L^2(0, horizon) norm of the interpolant.
    double l2_norm_sq() const;

    ControlSignal scaled(double a) const;
    ControlSignal plus(const ControlSignal& other) const;  // same grid and rule

private:
    double integral_to(double t) const;

    double horizon_;
    int n_steps_;
    Interp interp_;
    ArrayXd values_;
};

/// |mean over (t_star, t_star+window) - mean over (t_star-window, t_star)|,
/// an estimate of the jump of u at t_star.
double detect_jump(const ControlSignal& u, double t_star, double window);

}  // namespace wavectl
