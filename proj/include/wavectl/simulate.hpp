#pragma once

#include "wavectl/boundary.hpp"
#include "wavectl/field.hpp"
#include "wavectl/trajectory.hpp"

namespace wavectl {

struct SimOptions {
    int snapshot_stride = 1;   // keep every stride-th level; level 0 and T always kept
    double decompose_c = 0.0;  // undetermined constant of the decomposition
};

/// Exact characteristic-lattice solution of y_tt = y_xx on [0,1] with
/// y(t,0) = 0 and the given right-end law. T must be a lattice multiple of
/// dt = 1/n_cells; the scheme shifts profile cells by one per step, so for
/// lattice-representable data it is exact, not merely convergent.
Trajectory simulate_linear(const GridFunction& y0, const GridFunction& y1,
                           const BoundaryLaw& law, double T, const SimOptions& opts = {});

/// Variant taking the initial velocity as per-cell means (exact state
/// round-trips; the node-sampled overload averages adjacent cells).
Trajectory simulate_linear_cellwise(const GridFunction& y0, const ArrayXd& y1_cell_means,
                                    const BoundaryLaw& law, double T,
                                    const SimOptions& opts = {});

/// Dirichlet control on both ends: y(t,0) = u0(t), y(t,1) = u1(t).
/// Incompatible endpoint data is recorded as a warning, not a failure.
Trajectory simulate_two_sided(const ControlSignal& u0, const ControlSignal& u1,
                              const GridFunction& y0, const GridFunction& y1, double T,
                              const SimOptions& opts = {});

/// E(t) at every lattice level without storing snapshots (long horizons).
EnergyTrace simulate_energy_trace(const GridFunction& y0, const GridFunction& y1,
                                  const BoundaryLaw& law, double T);

}  // namespace wavectl
