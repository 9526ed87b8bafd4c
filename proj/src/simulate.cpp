#include "wavectl/simulate.hpp"

#include <cmath>

namespace wavectl {

namespace {

// Exact control queries on the solver lattice. Prefix integrals over the
// signal's own cells make per-lattice-cell means O(1).
class SignalSampler {
public:
    SignalSampler(const ControlSignal& u, double T) : u_(u) {
        if (u.horizon() < T - 1e-9)
            throw std::invalid_argument("simulate: control horizon shorter than T");
        prefix_.resize(u.n_steps() + 1);
        prefix_(0) = 0.0;
        const double dt = u.dt();
        for (int j = 0; j < u.n_steps(); ++j) {
            const double cell =
                u.interp() == Interp::PiecewiseConstant
                    ? u.values()(j)
                    : 0.5 * (u.values()(j) + u.values()(j + 1));
            prefix_(j + 1) = prefix_(j) + cell * dt;
        }
    }

    double integral_to(double t) const {
        const double s = std::clamp(t / u_.dt(), 0.0, static_cast<double>(u_.n_steps()));
        const int c = std::min(static_cast<int>(s), u_.n_steps() - 1);
        const double w = s - c;
        double part;
        if (u_.interp() == Interp::PiecewiseConstant) {
            part = w * u_.values()(c);
        } else {
            const double a = u_.values()(c), b = u_.values()(c + 1);
            part = w * (a + 0.5 * w * (b - a));
        }
        return prefix_(c) + part * u_.dt();
    }

    double mean_on(double t0, double t1) const {
        return (integral_to(t1) - integral_to(t0)) / (t1 - t0);
    }

    double left_limit_in(double t) const { return u_.left_limit_in(t); }
    double right_limit_in(double t) const { return u_.right_limit_in(t); }

private:
    const ControlSignal& u_;
    ArrayXd prefix_;
};

struct LeftZero {};
struct LeftControl {
    const ControlSignal* u;
};
using LeftLaw = std::variant<LeftZero, LeftControl>;

// Traveling profiles as per-cell linear pieces (left value + slope); jumps at
// lattice nodes are representable, which is what keeps incompatible Dirichlet
// data exact instead of smeared.
struct Engine {
    int N = 0, M = 0;
    double dx = 0.0;
    ArrayXd aL, aS;  // alpha cells c = 0..N+M-1, argument (c*dx, (c+1)*dx)
    ArrayXd bL, bS;  // beta cells m = -M..N-1 stored at index m+M

    double aR(int c) const { return aL(c) + dx * aS(c); }
    double bR(int m) const { return bL(m + M) + dx * bS(m + M); }
    double bLv(int m) const { return bL(m + M); }
    double bSv(int m) const { return bS(m + M); }

    // one-sided averages at profile nodes (single-sided at domain ends)
    double alpha_node(int n) const {
        if (n <= 0) return aL(0);
        if (n >= N + M) return aR(N + M - 1);
        return 0.5 * (aR(n - 1) + aL(n));
    }
    double beta_node(int n) const {
        if (n <= -M) return bLv(-M);
        if (n >= N) return bR(N - 1);
        return 0.5 * (bR(n - 1) + bLv(n));
    }
};

int lattice_steps(double T, int N) {
    if (!(T > 0.0)) throw std::invalid_argument("simulate: horizon must be positive");
    const double steps = T * N;
    const long M = std::lround(steps);
    if (M < 1 || std::abs(steps - static_cast<double>(M)) > 1e-9 * std::max(1.0, steps))
        throw std::invalid_argument("simulate: T must be a multiple of dt = 1/n_cells");
    return static_cast<int>(M);
}

Engine build_profiles(const CharacteristicField& f, int M, const LeftLaw& left,
                      const BoundaryLaw& right) {
    Engine e;
    e.N = f.n_cells;
    e.M = M;
    e.dx = f.dx();
    const int total = e.N + M;
    e.aL.resize(total);
    e.aS.resize(total);
    e.bL.resize(total);
    e.bS.resize(total);

    for (int i = 0; i < e.N; ++i) {
        e.aL(i) = f.alpha_values(i);
        e.aS(i) = f.alpha_slopes(i);
        e.bL(i + M) = f.beta_values(i);
        e.bS(i + M) = f.beta_slopes(i);
    }

    std::optional<SignalSampler> left_u;
    if (const auto* lc = std::get_if<LeftControl>(&left))
        left_u.emplace(*lc->u, M * e.dx);

    std::optional<SignalSampler> right_u;
    double fb = 0.0;
    bool dirichlet_right = false;
    if (const auto* dc = std::get_if<DirichletControl>(&right)) {
        dirichlet_right = true;
        right_u.emplace(dc->u, M * e.dx);
    } else if (const auto* nc = std::get_if<NeumannControl>(&right)) {
        right_u.emplace(nc->u, M * e.dx);
    } else {
        const auto& nf = std::get<NeumannFeedback>(right);
        fb = nf.f;
        if (std::abs(1.0 + fb) < 1e-12)
            throw std::invalid_argument("simulate: singular feedback closure (f = -1)");
        if (nf.u) right_u.emplace(*nf.u, M * e.dx);
    }

    const double dx = e.dx;
    for (int j = 1; j <= M; ++j) {
        const double t0 = (j - 1) * dx, t1 = j * dx;

        // beta cell -j from the left closure, reflecting alpha cell j-1
        {
            const int src = j - 1;
            if (std::holds_alternative<LeftZero>(left)) {
                e.bL(-j + M) = -e.aR(src);
                e.bS(-j + M) = e.aS(src);
            } else {
                const double uR = left_u->right_limit_in(t1);
                const double uL = left_u->left_limit_in(t0);
                e.bL(-j + M) = uR - e.aR(src);
                e.bS(-j + M) = e.aS(src) - (uR - uL) / dx;
            }
        }

        // alpha cell N+j-1 from the right closure, using beta cell N-j
        {
            const int c = e.N + j - 1;
            const int m = e.N - j;
            if (dirichlet_right) {
                const double uL = right_u->left_limit_in(t0);
                const double uR = right_u->right_limit_in(t1);
                e.aL(c) = uL - e.bR(m);
                e.aS(c) = (uR - uL) / dx + e.bSv(m);
            } else {
                const double ubar = right_u ? right_u->mean_on(t0, t1) : 0.0;
                e.aS(c) = ((fb - 1.0) * e.bSv(m) + ubar) / (1.0 + fb);
                e.aL(c) = e.aR(c - 1);
            }
        }
    }
    return e;
}

Trajectory assemble(const Engine& e, const SimOptions& opts) {
    const int N = e.N, M = e.M;
    const double dx = e.dx;
    const int stride = std::max(1, opts.snapshot_stride);

    std::vector<int> rows;
    for (int k = 0; k <= M; k += stride) rows.push_back(k);
    if (rows.back() != M) rows.push_back(M);

    Trajectory tr;
    tr.n_cells = N;
    tr.dt = dx;
    tr.dx = dx;
    const int R = static_cast<int>(rows.size());
    tr.times.resize(R);
    tr.y.resize(R, N + 1);
    tr.y_t.resize(R, N + 1);
    tr.y_x.resize(R, N + 1);
    tr.y_t_cells.resize(R, N);
    tr.y_x_cells.resize(R, N);

    tr.discontinuity.setZero(R);

    for (int r = 0; r < R; ++r) {
        const int k = rows[r];
        tr.times(r) = k * dx;
        for (int i = 0; i < N; ++i) {
            const double sa = e.aS(i + k);
            const double sb = e.bSv(i - k);
            tr.y_x_cells(r, i) = sa + sb;
            tr.y_t_cells(r, i) = sa - sb;
        }
        // interior y by one-sided averages; boundary nodes take the interior limit
        tr.y(r, 0) = e.aL(k) + e.bLv(-k);
        for (int i = 1; i < N; ++i) tr.y(r, i) = e.alpha_node(i + k) + e.beta_node(i - k);
        tr.y(r, N) = e.aR(N + k - 1) + e.bR(N - k - 1);
        for (int i = 1; i < N; ++i) {
            const double from_left = e.aR(i + k - 1) + e.bR(i - k - 1);
            const double from_right = e.aL(i + k) + e.bLv(i - k);
            tr.discontinuity(r) =
                std::max(tr.discontinuity(r), std::abs(from_left - from_right));
        }
        // y_t, y_x at nodes average the adjacent cells, one-sided at the ends
        tr.y_x(r, 0) = tr.y_x_cells(r, 0);
        tr.y_t(r, 0) = tr.y_t_cells(r, 0);
        tr.y_x(r, N) = tr.y_x_cells(r, N - 1);
        tr.y_t(r, N) = tr.y_t_cells(r, N - 1);
        for (int i = 1; i < N; ++i) {
            tr.y_x(r, i) = 0.5 * (tr.y_x_cells(r, i - 1) + tr.y_x_cells(r, i));
            tr.y_t(r, i) = 0.5 * (tr.y_t_cells(r, i - 1) + tr.y_t_cells(r, i));
        }
    }

    tr.trace_times.resize(M + 1);
    tr.trace_y.resize(M + 1);
    tr.trace_y_t.resize(M);
    tr.trace_y_x.resize(M);
    for (int k = 0; k <= M; ++k) {
        tr.trace_times(k) = k * dx;
        tr.trace_y(k) = e.alpha_node(N + k) + e.beta_node(N - k);
    }
    for (int j = 1; j <= M; ++j) {
        const double sa = e.aS(N + j - 1);
        const double sb = e.bSv(N - j);
        tr.trace_y_x(j - 1) = sa + sb;
        tr.trace_y_t(j - 1) = sa - sb;
    }
    return tr;
}

}  // namespace

Trajectory simulate_linear_cellwise(const GridFunction& y0, const ArrayXd& y1_cell_means,
                                    const BoundaryLaw& law, double T, const SimOptions& opts) {
    const int M = lattice_steps(T, y0.n_cells());
    const CharacteristicField f = decompose_cellwise(y0, y1_cell_means, opts.decompose_c);
    const Engine e = build_profiles(f, M, LeftZero{}, law);
    return assemble(e, opts);
}

Trajectory simulate_linear(const GridFunction& y0, const GridFunction& y1,
                           const BoundaryLaw& law, double T, const SimOptions& opts) {
    if (y0.n_cells() != y1.n_cells())
        throw std::invalid_argument("simulate: y0 and y1 must share the grid");
    return simulate_linear_cellwise(y0, y1.cell_midvalues(), law, T, opts);
}

Trajectory simulate_two_sided(const ControlSignal& u0, const ControlSignal& u1,
                              const GridFunction& y0, const GridFunction& y1, double T,
                              const SimOptions& opts) {
    if (y0.n_cells() != y1.n_cells())
        throw std::invalid_argument("simulate: y0 and y1 must share the grid");
    const int M = lattice_steps(T, y0.n_cells());
    const CharacteristicField f = decompose(y0, y1, opts.decompose_c);
    std::vector<std::string> warnings;
    if (std::abs(y0.values()(0) - u0.left_limit_in(0.0)) > 1e-9)
        warnings.push_back("two-sided: y0(0) != u0(0), state is discontinuous");
    if (std::abs(y0.values()(y0.n_cells()) - u1.left_limit_in(0.0)) > 1e-9)
        warnings.push_back("two-sided: y0(1) != u1(0), state is discontinuous");
    const Engine e =
        build_profiles(f, M, LeftControl{&u0}, BoundaryLaw(DirichletControl{u1}));
    Trajectory tr = assemble(e, opts);
    tr.warnings = std::move(warnings);
    return tr;
}

EnergyTrace simulate_energy_trace(const GridFunction& y0, const GridFunction& y1,
                                  const BoundaryLaw& law, double T) {
    if (y0.n_cells() != y1.n_cells())
        throw std::invalid_argument("simulate: y0 and y1 must share the grid");
    const int N = y0.n_cells();
    const int M = lattice_steps(T, N);
    const CharacteristicField f = decompose(y0, y1);
    const Engine e = build_profiles(f, M, LeftZero{}, law);

    EnergyTrace trace;
    trace.times.resize(M + 1);
    trace.energies.resize(M + 1);
    for (int k = 0; k <= M; ++k) {
        double s = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sa = e.aS(i + k);
            const double sb = e.bSv(i - k);
            s += sa * sa + sb * sb;
        }
        trace.times(k) = k * e.dx;
        trace.energies(k) = s * e.dx;
    }
    return trace;
}

}  // namespace wavectl
