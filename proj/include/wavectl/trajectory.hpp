#pragma once

#include "wavectl/grid.hpp"

#include <string>
#include <vector>

namespace wavectl {

using Eigen::MatrixXd;

/// State snapshots (y, y_t, y_x) on the space grid at stored time levels plus
/// full-resolution boundary traces at x=1. Node values of y_t and y_x average
/// the two adjacent per-cell values; the per-cell arrays themselves are kept
/// because they are what the characteristic scheme propagates exactly.
struct Trajectory {
    int n_cells = 0;
    double dt = 0.0;
    double dx = 0.0;  // 1/n_cells except on rescaled domains

    ArrayXd times;          // stored snapshot times, one per matrix row
    MatrixXd y;             // rows x (n_cells+1)
    MatrixXd y_t;           // rows x (n_cells+1)
    MatrixXd y_x;           // rows x (n_cells+1)
    MatrixXd y_t_cells;     // rows x n_cells
    MatrixXd y_x_cells;     // rows x n_cells

    ArrayXd trace_times;    // all lattice node times
    ArrayXd trace_y;        // y(t,1) at node times
    ArrayXd trace_y_t;      // y_t(t,1) per time cell
    ArrayXd trace_y_x;      // y_x(t,1) per time cell

    /// Largest one-sided mismatch of y across interior nodes per stored level;
    /// zero when the state is continuous. Finite-difference runs leave zeros.
    ArrayXd discontinuity;

    std::vector<std::string> warnings;

    int levels() const { return static_cast<int>(times.size()); }
    double horizon() const { return times(times.size() - 1); }

    GridFunction snapshot_y(int row) const { return {n_cells, y.row(row).transpose()}; }
    GridFunction snapshot_y_t(int row) const { return {n_cells, y_t.row(row).transpose()}; }
    GridFunction snapshot_y_x(int row) const { return {n_cells, y_x.row(row).transpose()}; }
    GridFunction terminal_y() const { return snapshot_y(levels() - 1); }
    GridFunction terminal_y_t() const { return snapshot_y_t(levels() - 1); }

    /// Energy at a stored level from the per-cell arrays (midpoint quadrature).
    double energy_at(int row) const {
        return energy_cells(y_x_cells.row(row).transpose().array(),
                            y_t_cells.row(row).transpose().array(), dx);
    }
};

/// E(t) along a run; energies are non-negative, times strictly increasing.
struct EnergyTrace {
    ArrayXd times;
    ArrayXd energies;

    int size() const { return static_cast<int>(times.size()); }
};

}  // namespace wavectl
