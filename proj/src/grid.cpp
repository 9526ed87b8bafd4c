#include "wavectl/grid.hpp"

#include <cmath>

namespace wavectl {

GridFunction::GridFunction(int n_cells, ArrayXd values)
    : n_cells_(n_cells), values_(std::move(values)) {
    if (n_cells_ <= 0) throw std::invalid_argument("GridFunction: n_cells must be positive");
    if (values_.size() != n_cells_ + 1)
        throw std::invalid_argument("GridFunction: values must have length n_cells+1");
    if (!values_.isFinite().all())
        throw std::invalid_argument("GridFunction: values must be finite");
}

GridFunction GridFunction::zero(int n_cells) {
    return GridFunction(n_cells, ArrayXd::Zero(n_cells + 1));
}

GridFunction GridFunction::constant(int n_cells, double c) {
    return GridFunction(n_cells, ArrayXd::Constant(n_cells + 1, c));
}

GridFunction GridFunction::from_function(int n_cells, const std::function<double(double)>& f) {
    ArrayXd v(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i) v(i) = f(static_cast<double>(i) / n_cells);
    return GridFunction(n_cells, std::move(v));
}

double GridFunction::value_at(double x) const {
    if (x < -1e-12 || x > 1.0 + 1e-12)
        throw std::out_of_range("GridFunction::value_at: x outside [0,1]");
    const double s = std::min(std::max(x, 0.0), 1.0) * n_cells_;
    int c = std::min(static_cast<int>(s), n_cells_ - 1);
    const double w = s - c;
    return (1.0 - w) * values_(c) + w * values_(c + 1);
}

ArrayXd GridFunction::cell_slopes() const {
    return (values_.tail(n_cells_) - values_.head(n_cells_)) * static_cast<double>(n_cells_);
}

ArrayXd GridFunction::cell_midvalues() const {
    return 0.5 * (values_.tail(n_cells_) + values_.head(n_cells_));
}

double l2_norm(const GridFunction& f) {
    return std::sqrt(trapezoid(f.values().square(), f.dx()));
}

GridFunction hminus1_antiderivative(const GridFunction& v) {
    const ArrayXd inner = cumulative_trapezoid(v.values(), v.dx());
    const double y0 = -trapezoid(inner, v.dx());
    return GridFunction(v.n_cells(), inner + y0);
}

double energy(const GridFunction& y_x, const GridFunction& y_t) {
    if (y_x.n_cells() != y_t.n_cells())
        throw std::invalid_argument("energy: snapshot arrays must share the grid");
    return energy(y_x.values(), y_t.values(), y_x.dx());
}

double energy(const ArrayXd& y_x_nodes, const ArrayXd& y_t_nodes, double dx) {
    if (y_x_nodes.size() != y_t_nodes.size())
        throw std::invalid_argument("energy: snapshot arrays must share the grid");
    return 0.5 * trapezoid((y_x_nodes.square() + y_t_nodes.square()).eval(), dx);
}

double energy_cells(const ArrayXd& y_x_cells, const ArrayXd& y_t_cells, double dx) {
    if (y_x_cells.size() != y_t_cells.size())
        throw std::invalid_argument("energy_cells: arrays must share the grid");
    return 0.5 * dx * (y_x_cells.square() + y_t_cells.square()).sum();
}

}  // namespace wavectl
