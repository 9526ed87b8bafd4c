#include "wavectl/quasilinear.hpp"

#include <cmath>

namespace wavectl {

namespace {

constexpr double kBlowUp = 1e6;

struct Background {
    ArrayXd ubar;    // n+1 samples
    ArrayXd ubar_x;  // n+1 node slopes (centered)
    double at_left_slope = 0.0;
};

Background make_background(const QuasiConfig& cfg, int n, double dx) {
    Background bg;
    if (cfg.ubar_profile) {
        if (cfg.ubar_profile->size() != n + 1)
            throw std::invalid_argument("quasilinear: ubar profile must have n_cells+1 samples");
        bg.ubar = *cfg.ubar_profile;
    } else {
        bg.ubar = ArrayXd::Constant(n + 1, cfg.ubar);
    }
    bg.ubar_x = ArrayXd::Zero(n + 1);
    for (int i = 1; i < n; ++i) bg.ubar_x(i) = (bg.ubar(i + 1) - bg.ubar(i - 1)) / (2.0 * dx);
    bg.ubar_x(0) = (bg.ubar(1) - bg.ubar(0)) / dx;
    bg.ubar_x(n) = (bg.ubar(n) - bg.ubar(n - 1)) / dx;
    bg.at_left_slope = bg.ubar_x(0);
    return bg;
}

double smallness_of(const QuasiConfig& cfg) {
    return cfg.smallness > 0.0 ? cfg.smallness : 0.05 * cfg.a;
}

}  // namespace

LyapunovWeights LyapunovWeights::defaults(const QuasiConfig& cfg) {
    LyapunovWeights w;
    w.mu1 = 1.0 / cfg.length;
    w.mu2 = 1.0 / cfg.length;
    w.k = 2.0 * std::max(1.0, cfg.a) * std::exp(1.0);
    return w;
}

Trajectory simulate_quasilinear(const QuasiConfig& cfg, const ArrayXd& u0, const ArrayXd& u1,
                                double T, const QuasiOptions& opts) {
    if (!(cfg.a > 0.0) || !(cfg.length > 0.0) || !(cfg.k_fb > 0.0))
        throw std::invalid_argument("quasilinear: a, L and k must be positive");
    if (!(opts.cfl > 0.0) || opts.cfl > 0.5 + 1e-12)
        throw std::invalid_argument("quasilinear: cfl must lie in (0, 0.5]");
    if (u0.size() != u1.size() || u0.size() < 4)
        throw std::invalid_argument("quasilinear: u0 and u1 must share a grid of >= 3 cells");

    const int n = static_cast<int>(u0.size()) - 1;
    const double dx = cfg.length / n;
    const double delta0 = smallness_of(cfg);
    if (std::max(u0.abs().maxCoeff(), u1.abs().maxCoeff()) > delta0)
        throw std::invalid_argument("quasilinear: initial perturbation exceeds the smallness bound");

    const Background bg = make_background(cfg, n, dx);
    const double ubar_max = bg.ubar.abs().maxCoeff();
    if (cfg.a * cfg.a <= (ubar_max + delta0) * (ubar_max + delta0))
        throw std::invalid_argument("quasilinear: data too large for hyperbolicity");

    // steady-state residual of a non-constant background is the caller's business
    std::vector<std::string> warnings;
    if (cfg.ubar_profile) {
        double res = 0.0;
        for (int i = 1; i < n; ++i) {
            const double uxx = (bg.ubar(i + 1) - 2.0 * bg.ubar(i) + bg.ubar(i - 1)) / (dx * dx);
            const double f =
                cfg.source ? cfg.source(bg.ubar(i), bg.ubar_x(i), 0.0) : 0.0;
            res = std::max(res,
                           std::abs(-(cfg.a * cfg.a - bg.ubar(i) * bg.ubar(i)) * uxx - f));
        }
        if (res > 1e-6)
            warnings.push_back("quasilinear: ubar is not a discrete steady state (residual " +
                               std::to_string(res) + ")");
    }

    const double speed = cfg.a + ubar_max + delta0;
    const double dt_raw = opts.cfl * dx / speed;
    const int m = std::max(2, static_cast<int>(std::ceil(T / dt_raw)));
    const double dt = T / m;

    ArrayXd ut = bg.ubar + u0;          // utilde
    ArrayXd v = u1;                     // utilde_t (= u_t; ubar is steady)
    ArrayXd w(n + 1);                   // utilde_x
    for (int i = 1; i < n; ++i) w(i) = (ut(i + 1) - ut(i - 1)) / (2.0 * dx);
    w(0) = bg.at_left_slope + cfg.k_fb * v(0);  // consistent with the closure
    w(n) = (ut(n) - ut(n - 1)) / dx;
    ut(n) = bg.ubar(n);  // pinned end
    v(n) = 0.0;

    const auto src = [&](double uu, double ux, double vt) {
        return cfg.source ? cfg.source(uu, ux, vt) : 0.0;
    };

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
    tr.trace_times.resize(m + 1);
    tr.trace_y.resize(m + 1);
    tr.trace_y_t.resize(m + 1);
    tr.trace_y_x.resize(m + 1);

    int next_row = 0;
    bool smallness_flagged = false;
    const auto store = [&](int lev) {
        tr.trace_times(lev) = lev * dt;
        tr.trace_y(lev) = ut(n) - bg.ubar(n);
        tr.trace_y_t(lev) = v(n);
        tr.trace_y_x(lev) = w(n) - bg.ubar_x(n);
        if (next_row < nr && rows[next_row] == lev) {
            tr.times(next_row) = lev * dt;
            tr.y.row(next_row) = (ut - bg.ubar).transpose();
            tr.y_t.row(next_row) = v.transpose();
            tr.y_x.row(next_row) = (w - bg.ubar_x).transpose();
            for (int i = 0; i < n; ++i) {
                tr.y_x_cells(next_row, i) = (tr.y(next_row, i + 1) - tr.y(next_row, i)) / dx;
                tr.y_t_cells(next_row, i) = 0.5 * (v(i) + v(i + 1));
            }
            ++next_row;
        }
    };
    store(0);

    ArrayXd vs(n + 1), ws(n + 1), us(n + 1), vn(n + 1), wn(n + 1), un(n + 1);
    for (int lev = 0; lev < m; ++lev) {
        // predictor, forward differences
        for (int i = 0; i < n; ++i) {
            const double c2 = cfg.a * cfg.a - ut(i) * ut(i);
            const double dv = (v(i + 1) - v(i)) / dx;
            const double dw = (w(i + 1) - w(i)) / dx;
            vs(i) = v(i) + dt * (-2.0 * ut(i) * dv + c2 * dw + src(ut(i), w(i), v(i)));
            ws(i) = w(i) + dt * dv;
            us(i) = ut(i) + dt * v(i);
        }
        vs(n) = 0.0;
        us(n) = bg.ubar(n);
        ws(n) = ws(n - 1);  // provisional; fixed by the characteristic closure below

        // corrector, backward differences on the predicted state
        for (int i = 1; i < n; ++i) {
            const double c2 = cfg.a * cfg.a - us(i) * us(i);
            const double dv = (vs(i) - vs(i - 1)) / dx;
            const double dw = (ws(i) - ws(i - 1)) / dx;
            vn(i) = 0.5 * (v(i) + vs(i) +
                           dt * (-2.0 * us(i) * dv + c2 * dw + src(us(i), ws(i), vs(i))));
            wn(i) = 0.5 * (w(i) + ws(i) + dt * dv);
            un(i) = 0.5 * (ut(i) + us(i) + dt * vs(i));
        }

        // quadratic interpolation at the foot of the outgoing characteristic
        const auto foot = [&](const ArrayXd& g, int i0, int i1, int i2, double s) {
            // s measured from node i0 toward i2 in units of dx
            const double g0 = g(i0), g1 = g(i1), g2 = g(i2);
            return g0 + s * (g1 - g0) + 0.5 * s * (s - 1.0) * (g2 - 2.0 * g1 + g0);
        };
        // x = L: utilde pinned, outgoing characteristic fixes the slope
        {
            const double s = std::clamp((ut(n) + cfg.a) * dt / dx, 0.0, 1.0);
            const double vi = foot(v, n, n - 1, n - 2, s);
            const double wi = foot(w, n, n - 1, n - 2, s);
            const double ui = foot(ut, n, n - 1, n - 2, s);
            const double r = vi + (ui - cfg.a) * wi + dt * src(ui, wi, vi);
            un(n) = bg.ubar(n);
            vn(n) = 0.0;
            wn(n) = r / (ut(n) - cfg.a);
        }
        // x = 0: feedback closure plus the leftgoing characteristic
        {
            const double s = std::clamp((cfg.a - ut(0)) * dt / dx, 0.0, 1.0);
            const double vi = foot(v, 0, 1, 2, s);
            const double wi = foot(w, 0, 1, 2, s);
            const double ui = foot(ut, 0, 1, 2, s);
            const double r = vi + (ui + cfg.a) * wi + dt * src(ui, wi, vi);
            const double denom = 1.0 + (ut(0) + cfg.a) * cfg.k_fb;
            vn(0) = (r - (ut(0) + cfg.a) * bg.at_left_slope) / denom;
            wn(0) = bg.at_left_slope + cfg.k_fb * vn(0);
            un(0) = ut(0) + 0.5 * dt * (v(0) + vn(0));
        }

        ut = un;
        v = vn;
        w = wn;

        if (!ut.isFinite().all() || ut.abs().maxCoeff() > kBlowUp)
            throw std::runtime_error("quasilinear: blow-up detected");
        const double amax = (cfg.a * cfg.a - ut.square().maxCoeff());
        if (amax <= 0.0) throw std::runtime_error("quasilinear: hyperbolicity lost");
        if (!smallness_flagged && (ut - bg.ubar).abs().maxCoeff() > delta0) {
            warnings.push_back("quasilinear: perturbation left the smallness regime");
            smallness_flagged = true;
        }
        store(lev + 1);
    }

    tr.warnings = std::move(warnings);
    return tr;
}

QuasiSnapshot quasi_snapshot(const Trajectory& traj, int row, const QuasiConfig& cfg) {
    QuasiSnapshot s;
    s.dx = traj.dx;
    const int n = traj.n_cells;
    s.u = traj.y.row(row).transpose();
    s.u_t = traj.y_t.row(row).transpose();
    s.u_x = traj.y_x.row(row).transpose();
    if (cfg.ubar_profile)
        s.utilde = s.u + *cfg.ubar_profile;
    else
        s.utilde = s.u + cfg.ubar;

    const auto second = [&](const ArrayXd& g) {
        ArrayXd out(n + 1);
        for (int i = 1; i < n; ++i) out(i) = (g(i + 1) - g(i - 1)) / (2.0 * s.dx);
        out(0) = (g(1) - g(0)) / s.dx;
        out(n) = (g(n) - g(n - 1)) / s.dx;
        return out;
    };
    s.u_xx = second(s.u_x);
    s.u_tx = second(s.u_t);
    return s;
}

double lyapunov_functional(const QuasiSnapshot& s, const QuasiConfig& cfg,
                           const LyapunovWeights& wts) {
    const int n = static_cast<int>(s.u.size()) - 1;
    ArrayXd integrand(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = i * s.dx;
        const double h1 = wts.k * std::exp(-wts.mu1 * x);
        const double h2 = std::exp(-wts.mu2 * x);
        const double c2 = cfg.a * cfg.a - s.utilde(i) * s.utilde(i);
        const double first = c2 * s.u_x(i) * s.u_x(i) + s.u_t(i) * s.u_t(i);
        const double secnd = c2 * s.u_xx(i) * s.u_xx(i) + s.u_tx(i) * s.u_tx(i);
        const double cross1 = s.utilde(i) * s.u_x(i) * s.u_x(i) + s.u_t(i) * s.u_x(i);
        const double cross2 = s.utilde(i) * s.u_xx(i) * s.u_xx(i) + s.u_tx(i) * s.u_xx(i);
        integrand(i) = h1 * (first + secnd) - 2.0 * h2 * (cross1 + cross2);
    }
    return trapezoid(integrand, s.dx);
}

double lyapunov_equivalence_ratio(const QuasiSnapshot& s, const QuasiConfig& cfg,
                                  const LyapunovWeights& wts) {
    const double e = lyapunov_functional(s, cfg, wts);
    if (!(e > 0.0))
        throw std::runtime_error("lyapunov_equivalence_ratio: weights fail positivity here");
    const double h1 =
        trapezoid((s.u_x.square() + s.u_xx.square()).eval(), s.dx) +
        trapezoid((s.u_t.square() + s.u_tx.square()).eval(), s.dx);
    return h1 / e;
}

LyapunovReport lyapunov_decay_check(const Trajectory& traj, const QuasiConfig& cfg,
                                    const LyapunovWeights& wts, double osc_tol) {
    LyapunovReport rep;
    const int r = traj.levels();
    rep.times = traj.times;
    rep.values.resize(r);
    double max_ratio = 0.0;
    for (int i = 0; i < r; ++i) {
        const QuasiSnapshot s = quasi_snapshot(traj, i, cfg);
        rep.values(i) = lyapunov_functional(s, cfg, wts);
        if (rep.values(i) > 0.0)
            max_ratio = std::max(max_ratio, lyapunov_equivalence_ratio(s, cfg, wts));
    }
    rep.max_equivalence_ratio = max_ratio;

    const double e0 = rep.values(0);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i + 1 < r; ++i) {
        worst = std::max(worst, rep.values(i + 1) - rep.values(i));
        ok = ok && rep.values(i + 1) <= rep.values(i) + osc_tol * std::max(e0, 1e-300);
    }
    rep.worst_step_increase = worst;

    // least-squares exponential rate over the positive part of the series
    std::vector<double> ts, ls;
    for (int i = 0; i < r; ++i) {
        if (rep.values(i) <= 0.0) break;
        ts.push_back(rep.times(i));
        ls.push_back(std::log(rep.values(i)));
    }
    if (ts.size() >= 2) {
        const double n = static_cast<double>(ts.size());
        double st = 0, sl = 0, stt = 0, stl = 0;
        for (size_t i = 0; i < ts.size(); ++i) {
            st += ts[i];
            sl += ls[i];
            stt += ts[i] * ts[i];
            stl += ts[i] * ls[i];
        }
        rep.fitted_rate = -(n * stl - st * sl) / (n * stt - st * st);
    }
    rep.pass = ok && e0 >= 0.0;
    return rep;
}

}  // namespace wavectl
