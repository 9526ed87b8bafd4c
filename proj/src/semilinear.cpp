#include "wavectl/semilinear.hpp"

#include <cmath>

namespace wavectl {

namespace {

constexpr double kBlowUp = 1e6;

double checked_g(const Nonlinearity& nl, double x, double y) {
    if (nl.empty()) return 0.0;
    const double g = nl.g_y(x, y);
    if (std::abs(g) > nl.w_bound + 1e-12)
        throw std::runtime_error("semilinear: nonlinearity exceeds its declared bound");
    return g;
}

double checked_d(const Disturbance& dist, double t, double x) {
    if (dist.empty()) return 0.0;
    const double d = dist.value(t, x);
    if (std::abs(d) > dist.sup_bound + 1e-12)
        throw std::runtime_error("semilinear: disturbance exceeds its declared bound");
    return d;
}

}  // namespace

Trajectory simulate_semilinear(const Nonlinearity& nl, const Disturbance& dist,
                               const GridFunction& y0, const GridFunction& y1, double T,
                               const SemilinearOptions& opts) {
    if (y0.n_cells() != y1.n_cells())
        throw std::invalid_argument("semilinear: y0 and y1 must share the grid");
    if (!(opts.cfl > 0.0) || opts.cfl > 1.0 + 1e-12)
        throw std::invalid_argument("semilinear: cfl must lie in (0,1]");
    const int n = y0.n_cells();
    const double dx = y0.dx();
    const double dt = opts.cfl * dx;
    const long steps = std::lround(T / dt);
    if (steps < 2 || std::abs(steps * dt - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("semilinear: T must be a multiple of cfl*dx");
    const int m = static_cast<int>(steps);
    const bool exact_path = nl.empty() && dist.empty() && std::abs(opts.cfl - 1.0) < 1e-12;
    const double lam2 = (dt * dt) / (dx * dx);

    Eigen::MatrixXd y(m + 1, n + 1);
    y.row(0) = y0.values().transpose();
    y(0, 0) = 0.0;

    const auto xof = [&](int i) { return i * dx; };

    // first level by a second-order Taylor step (exact for lattice data at cfl = 1)
    {
        const ArrayXd& v0 = y0.values();
        const ArrayXd& v1 = y1.values();
        if (exact_path) {
            for (int i = 1; i < n; ++i)
                y(1, i) = 0.5 * (v0(i + 1) + v0(i - 1)) +
                          0.25 * dt * (v1(i - 1) + 2.0 * v1(i) + v1(i + 1));
            y(1, n) = 0.5 * (v0(n) + v0(n - 1)) + 0.25 * dt * (v1(n - 1) + v1(n));
        } else {
            for (int i = 1; i < n; ++i) {
                const double lap = (v0(i + 1) - 2.0 * v0(i) + v0(i - 1)) / (dx * dx);
                const double g = checked_g(nl, xof(i), v0(i));
                const double d = checked_d(dist, 0.0, xof(i));
                y(1, i) = v0(i) + dt * v1(i) + 0.5 * dt * dt * (lap + 2.0 * g * v1(i) + d);
            }
            // boundary closure at the first level with a backward Taylor ghost
            const double lam = dt / dx;
            const double lap_n =
                (2.0 * v0(n) - 5.0 * v0(n - 1) + 4.0 * v0(n - 2) - v0(n - 3)) / (dx * dx);
            const double gn = checked_g(nl, xof(n), v0(n));
            const double dn = checked_d(dist, 0.0, xof(n));
            const double gd = gn * dt;
            const double ghost =
                v0(n) - dt * v1(n) + 0.5 * dt * dt * (lap_n + 2.0 * gn * v1(n) + dn);
            y(1, n) = (2.0 * lam2 * (v0(n - 1) - v0(n)) + dt * dt * dn + 2.0 * v0(n) -
                       (1.0 + gd - lam) * ghost) /
                      (1.0 - gd + lam);
        }
        y(1, 0) = 0.0;
    }

    for (int lev = 1; lev < m; ++lev) {
        const double t = lev * dt;
        if (exact_path) {
            for (int i = 1; i < n; ++i)
                y(lev + 1, i) = y(lev, i + 1) + y(lev, i - 1) - y(lev - 1, i);
            y(lev + 1, n) = y(lev, n - 1);
        } else {
            for (int i = 1; i < n; ++i) {
                const double lap = lam2 * (y(lev, i + 1) - 2.0 * y(lev, i) + y(lev, i - 1));
                const double g = checked_g(nl, xof(i), y(lev, i));
                const double d = checked_d(dist, t, xof(i));
                const double gd = g * dt;
                y(lev + 1, i) = (lap + dt * dt * d + 2.0 * y(lev, i) -
                                 (1.0 + gd) * y(lev - 1, i)) /
                                (1.0 - gd);
            }
            // ghost-node closure of y_x = -y_t: the ghost value from the
            // centered boundary condition substituted into the interior update
            const double lam = dt / dx;
            const double gn = checked_g(nl, xof(n), y(lev, n));
            const double dn = checked_d(dist, t, xof(n));
            const double gd = gn * dt;
            y(lev + 1, n) =
                (2.0 * lam2 * (y(lev, n - 1) - y(lev, n)) + dt * dt * dn +
                 2.0 * y(lev, n) - (1.0 + gd - lam) * y(lev - 1, n)) /
                (1.0 - gd + lam);
        }
        y(lev + 1, 0) = 0.0;
        if (!y.row(lev + 1).allFinite() || y.row(lev + 1).cwiseAbs().maxCoeff() > kBlowUp)
            throw std::runtime_error("semilinear: blow-up detected");
    }

    // assemble stored levels
    const int stride = std::max(1, opts.snapshot_stride);
    std::vector<int> rows;
    for (int k = 0; k <= m; k += stride) rows.push_back(k);
    if (rows.back() != m) rows.push_back(m);
    const int nr = static_cast<int>(rows.size());

    Trajectory tr;
    tr.n_cells = n;
    tr.dt = dt;
    tr.dx = dx;
    tr.times.resize(nr);
    tr.y.resize(nr, n + 1);
    tr.y_t.resize(nr, n + 1);
    tr.y_x.resize(nr, n + 1);
    tr.y_t_cells.resize(nr, n);
    tr.y_x_cells.resize(nr, n);

    const auto dt_node = [&](int lev, int i) {
        if (lev == 0) {
            if (i == 0) return 0.0;
            return y1.values()(i);
        }
        if (lev == m) return (3.0 * y(m, i) - 4.0 * y(m - 1, i) + y(m - 2, i)) / (2.0 * dt);
        return (y(lev + 1, i) - y(lev - 1, i)) / (2.0 * dt);
    };

    for (int r = 0; r < nr; ++r) {
        const int lev = rows[r];
        tr.times(r) = lev * dt;
        tr.y.row(r) = y.row(lev);
        for (int i = 0; i <= n; ++i) tr.y_t(r, i) = dt_node(lev, i);
        for (int i = 0; i < n; ++i)
            tr.y_x_cells(r, i) = (y(lev, i + 1) - y(lev, i)) / dx;
        tr.y_x(r, 0) = tr.y_x_cells(r, 0);
        tr.y_x(r, n) = tr.y_x_cells(r, n - 1);
        for (int i = 1; i < n; ++i)
            tr.y_x(r, i) = 0.5 * (tr.y_x_cells(r, i - 1) + tr.y_x_cells(r, i));
        for (int i = 0; i < n; ++i)
            tr.y_t_cells(r, i) = 0.5 * (tr.y_t(r, i) + tr.y_t(r, i + 1));
    }

    tr.trace_times.resize(m + 1);
    tr.trace_y.resize(m + 1);
    tr.trace_y_t.resize(m + 1);
    tr.trace_y_x.resize(m + 1);
    for (int lev = 0; lev <= m; ++lev) {
        tr.trace_times(lev) = lev * dt;
        tr.trace_y(lev) = y(lev, n);
        tr.trace_y_t(lev) = dt_node(lev, n);
        tr.trace_y_x(lev) = (y(lev, n) - y(lev, n - 1)) / dx;
    }
    return tr;
}

Trajectory disturbance_response(const Disturbance& dist, double T, int n_cells,
                                const SemilinearOptions& opts) {
    return simulate_semilinear(Nonlinearity::none(), dist, GridFunction::zero(n_cells),
                               GridFunction::zero(n_cells), T, opts);
}

double supnorm_window(const Trajectory& traj, double t_lo, double t_hi) {
    if (!(t_hi > t_lo))
        throw std::invalid_argument("supnorm_window: empty window");
    if (t_lo < traj.times(0) - 1e-9 || t_hi > traj.times(traj.levels() - 1) + 1e-9)
        throw std::invalid_argument("supnorm_window: window outside the trajectory");
    double s = -1.0;
    for (int r = 0; r < traj.levels(); ++r) {
        const double t = traj.times(r);
        if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
        s = std::max(s, traj.y.row(r).cwiseAbs().maxCoeff());
    }
    if (s < 0.0) throw std::invalid_argument("supnorm_window: no stored levels in window");
    return s;
}

IssReport iss_check(const Trajectory& y_traj, const Trajectory& delta_traj, double w,
                    int k_max, double tol) {
    if (!(w < 0.05))
        throw std::invalid_argument("iss_check: estimate hypothesis violated (w must be < 1/20)");
    if (k_max < 1) throw std::invalid_argument("iss_check: k_max must be >= 1");

    IssReport rep;
    rep.w = w;
    const double q = 20.0 * w;
    const double s0 = supnorm_window(y_traj, 0.0, 2.0);
    bool ok = true;
    for (int k = 1; k <= k_max; ++k) {
        IssBound b;
        b.k = k;
        b.lhs = supnorm_window(y_traj, 2.0 * k, 2.0 * k + 2.0);
        const double dsup = supnorm_window(delta_traj, 0.0, 2.0 * k + 2.0);
        const double qk = std::pow(q, k);
        b.rhs = qk * s0 + (1.0 - qk) / (1.0 - q) * dsup;
        b.margin = b.rhs - b.lhs;
        ok = ok && b.lhs <= b.rhs + tol;
        rep.bounds.push_back(b);
    }
    rep.pass = ok;
    return rep;
}

SupDecayFit fit_supnorm_decay(const Trajectory& traj, double t_lo, double t_hi,
                              double floor_rel) {
    // the resolvable floor references the run's overall amplitude
    const double global = traj.y.cwiseAbs().maxCoeff();
    std::vector<double> ts, ls;
    for (double t = t_lo; t + 2.0 <= t_hi + 1e-9; t += 2.0) {
        const double s = supnorm_window(traj, t, t + 2.0);
        if (s <= 0.0 || s < floor_rel * global) break;
        ts.push_back(t);
        ls.push_back(std::log(s));
    }
    if (ts.size() < 2) throw std::invalid_argument("fit_supnorm_decay: not enough windows");
    const double n = static_cast<double>(ts.size());
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += ls[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * ls[i];
    }
    const double slope = (n * stl - st * sl) / (n * stt - st * st);
    SupDecayFit fit;
    fit.rate = -slope;
    fit.scale = std::exp((sl - slope * st) / n);
    fit.windows_used = static_cast<int>(ts.size());
    return fit;
}

}  // namespace wavectl
