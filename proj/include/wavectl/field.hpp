#pragma once

#include "wavectl/grid.hpp"

namespace wavectl {

/// Traveling-wave profiles of the d'Alembert representation
/// y(t,x) = alpha(x+t) + beta(x-t) on the initial domain [0,1]:
///   alpha(s) = (y0(s) + int_0^s y1)/2 + C,
///   beta(s)  = (y0(s) - int_0^s y1)/2 - C.
/// Values live at lattice nodes, slopes are per-cell constants.
struct CharacteristicField {
    int n_cells = 0;
    double constant_c = 0.0;
    ArrayXd alpha_values;  // n_cells+1
    ArrayXd beta_values;   // n_cells+1
    ArrayXd alpha_slopes;  // n_cells
    ArrayXd beta_slopes;   // n_cells

    double dx() const { return 1.0 / n_cells; }
};

/// Split initial data into traveling profiles. The velocity enters through its
/// per-cell means, which is what the characteristic lattice propagates exactly.
/// The decomposition constant C never influences observables; it is exposed
/// so tests can assert that.
CharacteristicField decompose(const GridFunction& y0, const GridFunction& y1, double c = 0.0);

/// Velocity supplied directly as per-cell means (length n_cells); used by
/// exact state round-trips where node averaging would lose cell information.
CharacteristicField decompose_cellwise(const GridFunction& y0, const ArrayXd& y1_cell_means,
                                       double c = 0.0);

/// Free-space evaluation y(t,x) = alpha(x+t) + beta(x-t); both arguments must
/// stay inside the decomposed domain [0,1] (no boundary interaction).
double eval_free(const CharacteristicField& field, double t, double x);

}  // namespace wavectl
