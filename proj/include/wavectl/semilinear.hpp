#pragma once

#include "wavectl/trajectory.hpp"

#include <functional>

namespace wavectl {

/// Velocity coefficient of the telegraph-type equation
/// y_tt - 2 g_y(x, y) y_t = y_xx, with the declared bound |g_y| <= w_bound
/// enforced at every sampled point during a run.
struct Nonlinearity {
    std::function<double(double, double)> g_y;  // (x, y) -> coefficient
    double w_bound = 0.0;

    static Nonlinearity none() { return {}; }
    static Nonlinearity constant(double w) {
        return {[w](double, double) { return w; }, std::abs(w)};
    }
    bool empty() const { return !g_y; }
};

/// Interior source term D(t,x), uniformly bounded by sup_bound.
struct Disturbance {
    std::function<double(double, double)> value;  // (t, x) -> D
    double sup_bound = 0.0;

    static Disturbance none() { return {}; }
    bool empty() const { return !value; }
};

struct SemilinearOptions {
    double cfl = 0.5;        // dt = cfl * dx; cfl = 1 with nl = dist = 0 is lattice-exact
    int snapshot_stride = 1;
};

/// Explicit leapfrog scheme with centered damping term and one-sided
/// second-order absorbing closure y_x(t,1) = -y_t(t,1); y(t,0) = 0.
Trajectory simulate_semilinear(const Nonlinearity& nl, const Disturbance& dist,
                               const GridFunction& y0, const GridFunction& y1, double T,
                               const SemilinearOptions& opts = {});

/// Linear closed-loop response to D from rest: the delta system of the
/// robustness estimate.
Trajectory disturbance_response(const Disturbance& dist, double T, int n_cells,
                                const SemilinearOptions& opts = {});

/// max |y| over all lattice nodes and stored levels with t in [t_lo, t_hi].
double supnorm_window(const Trajectory& traj, double t_lo, double t_hi);

struct IssBound {
    int k = 0;
    double lhs = 0.0;     // sup of ||y(s,.)|| over [2k, 2k+2]
    double rhs = 0.0;     // (20w)^k * sup_[0,2] + geometric sum * sup ||delta||
    double margin = 0.0;  // rhs - lhs
};

struct IssReport {
    std::vector<IssBound> bounds;
    double w = 0.0;
    bool pass = false;
};

/// Windowed robustness estimate: for k = 1..k_max check
/// sup_[2k,2k+2] ||y|| <= (20w)^k sup_[0,2] ||y||
///                        + (1-(20w)^k)/(1-20w) sup_[0,2k+2] ||delta||.
IssReport iss_check(const Trajectory& y_traj, const Trajectory& delta_traj, double w,
                    int k_max, double tol = 1e-9);

struct SupDecayFit {
    double rate = 0.0;     // decay rate per unit time of windowed sup norms
    double scale = 0.0;    // exp(intercept)
    int windows_used = 0;  // windows above the resolvable floor
};

/// Least-squares exponential fit of sup-norm windows [2k, 2k+2] covering
/// [t_lo, t_hi]. Windows whose sup has fallen below floor_rel times the first
/// window are scheme residue (boundary reflection noise), not decay, and are
/// excluded from the fit.
SupDecayFit fit_supnorm_decay(const Trajectory& traj, double t_lo, double t_hi,
                              double floor_rel = 1e-6);

}  // namespace wavectl
