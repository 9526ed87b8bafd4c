#pragma once

#include "wavectl/trajectory.hpp"

#include <functional>
#include <optional>

namespace wavectl {

/// Quasilinear wave equation u_tt + 2u u_tx - (a^2 - u^2) u_xx = F(u,u_x,u_t)
/// on [0,L] around a stationary state ubar, with boundary feedback
///   x=0: u_x = ubar_x(0) + k u_t,      x=L: u = ubar(L).
struct QuasiConfig {
    double a = 1.0;        // sound-speed parameter; hyperbolicity needs a^2 > u^2
    double length = 1.0;   // domain length L
    double k_fb = 1.0;     // feedback gain, positive
    double ubar = 0.0;     // constant stationary state
    std::optional<ArrayXd> ubar_profile;  // sampled non-constant stationary state
    std::function<double(double, double, double)> source;  // F(u, u_x, u_t); default 0
    double smallness = -1.0;  // admissible initial perturbation size; <0 means 0.05*a
};

struct LyapunovWeights {
    double k = 1.0;
    double mu1 = 1.0;
    double mu2 = 1.0;

    /// h1 dominates the cross terms on the smallness battery: mu1 = mu2 = 1/L,
    /// k = 2 max(1,a) e.
    static LyapunovWeights defaults(const QuasiConfig& cfg);
};

struct QuasiOptions {
    double cfl = 0.25;  // must be <= 0.5
    int snapshot_stride = 1;
};

/// Explicit two-step scheme (frozen coefficients per stage) with
/// characteristic boundary closures. u0/u1 sample the initial perturbation
/// and its velocity on the [0,L] lattice; the trajectory stores the
/// perturbation u = utilde - ubar.
Trajectory simulate_quasilinear(const QuasiConfig& cfg, const ArrayXd& u0, const ArrayXd& u1,
                                double T, const QuasiOptions& opts = {});

/// Perturbation snapshot with the second derivatives the weighted functional
/// needs (centered differences of the stored first-derivative arrays).
struct QuasiSnapshot {
    double dx = 0.0;
    ArrayXd u, u_t, u_x, u_xx, u_tx, utilde;
};

QuasiSnapshot quasi_snapshot(const Trajectory& traj, int row, const QuasiConfig& cfg);

/// Weighted functional
/// E = int h1 [ (a^2-u~^2)(u_x^2+u_xx^2) + u_t^2 + u_tx^2 ]
///       - 2 h2 [ u~ u_x^2 + u_t u_x + u~ u_xx^2 + u_tx u_xx ] dx,
/// h1 = k exp(-mu1 x), h2 = exp(-mu2 x).
double lyapunov_functional(const QuasiSnapshot& s, const QuasiConfig& cfg,
                           const LyapunovWeights& w);

/// (||u_x||_{H1}^2 + ||u_t||_{H1}^2) / E; the running max along a trajectory
/// is the empirical equivalence constant.
double lyapunov_equivalence_ratio(const QuasiSnapshot& s, const QuasiConfig& cfg,
                                  const LyapunovWeights& w);

struct LyapunovReport {
    ArrayXd times;
    ArrayXd values;
    double fitted_rate = 0.0;
    double worst_step_increase = 0.0;  // max of E(t_{k+1}) - E(t_k)
    double max_equivalence_ratio = 0.0;
    bool pass = false;
};

/// E(t_k) along the run; pass iff E never increases by more than
/// osc_tol * E(0) in one step.
LyapunovReport lyapunov_decay_check(const Trajectory& traj, const QuasiConfig& cfg,
                                    const LyapunovWeights& w, double osc_tol = 1e-3);

}  // namespace wavectl
