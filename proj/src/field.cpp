#include "wavectl/field.hpp"

#include <cmath>

namespace wavectl {

CharacteristicField decompose_cellwise(const GridFunction& y0, const ArrayXd& y1_cell_means,
                                       double c) {
    const int n = y0.n_cells();
    if (y1_cell_means.size() != n)
        throw std::invalid_argument("decompose: y1 cell array must have length n_cells");

    CharacteristicField f;
    f.n_cells = n;
    f.constant_c = c;

    // integral of the (piecewise-constant-in-cells) velocity up to each node
    ArrayXd iv(n + 1);
    iv(0) = 0.0;
    for (int i = 0; i < n; ++i) iv(i + 1) = iv(i) + y1_cell_means(i) * y0.dx();

    f.alpha_values = 0.5 * (y0.values() + iv) + c;
    f.beta_values = 0.5 * (y0.values() - iv) - c;
    const ArrayXd s0 = y0.cell_slopes();
    f.alpha_slopes = 0.5 * (s0 + y1_cell_means);
    f.beta_slopes = 0.5 * (s0 - y1_cell_means);
    return f;
}

CharacteristicField decompose(const GridFunction& y0, const GridFunction& y1, double c) {
    if (y0.n_cells() != y1.n_cells())
        throw std::invalid_argument("decompose: y0 and y1 must share the grid");
    return decompose_cellwise(y0, y1.cell_midvalues(), c);
}

namespace {
double eval_profile(const ArrayXd& values, int n, double s) {
    const double p = s * n;
    int cell = std::min(static_cast<int>(p), n - 1);
    if (cell < 0) cell = 0;
    const double w = p - cell;
    return (1.0 - w) * values(cell) + w * values(cell + 1);
}
}  // namespace

double eval_free(const CharacteristicField& field, double t, double x) {
    const double sp = x + t;
    const double sm = x - t;
    if (sp < -1e-12 || sp > 1.0 + 1e-12 || sm < -1e-12 || sm > 1.0 + 1e-12)
        throw std::out_of_range("eval_free: characteristic leaves the decomposed domain");
    return eval_profile(field.alpha_values, field.n_cells, std::clamp(sp, 0.0, 1.0)) +
           eval_profile(field.beta_values, field.n_cells, std::clamp(sm, 0.0, 1.0));
}

}  // namespace wavectl
