#pragma once

#include "wavectl/control_design.hpp"

#include <optional>

namespace wavectl {

/// E at every stored level of a trajectory, from the per-cell derivative
/// arrays (the quadrature under which the characteristic scheme conserves
/// and contracts energy exactly).
EnergyTrace energy_trace(const Trajectory& traj);

struct DecayFit {
    std::optional<double> extinction_time;  // set when a sampled energy hit zero
    double c1 = 0.0;                        // exp(intercept)/E(0)
    double mu = 0.0;                        // -slope of ln E against t
};

/// Least-squares exponential fit of E at t = 0, period, 2*period, ...
/// Period-2 sampling removes the intra-period oscillation of E(t).
DecayFit fit_decay_rate(const EnergyTrace& trace, double sample_period = 2.0);

/// First lattice time with E(t) <= tol * E(0); absent if never reached.
std::optional<double> extinction_time(const EnergyTrace& trace, double tol = 1e-10);
std::optional<double> extinction_time(const Trajectory& traj, double tol = 1e-10);

enum class MismatchControl { ExactControl, OptimizedFeedback };

struct MismatchResult {
    ControlSignal u;
    Trajectory trajectory;
    EnergyTrace energy;
};

/// Build the open-loop (EC) or optimized-feedback control from the design
/// data, then run it on the true data under y_x(t,1) = -f y_t(t,1) + u(t).
MismatchResult mismatch_experiment(const GridFunction& design_y0, const GridFunction& design_y1,
                                   const GridFunction& true_y0, const GridFunction& true_y1,
                                   MismatchControl kind, double f, double T);

}  // namespace wavectl
