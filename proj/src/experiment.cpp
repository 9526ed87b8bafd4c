#include "wavectl/experiment.hpp"

#include "wavectl/quasilinear.hpp"
#include "wavectl/semilinear.hpp"
#include "wavectl/stabilize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wavectl {

namespace {

const double kPi = std::acos(-1.0);

// ---------------------------------------------------------------- presets

GridFunction grid_preset(const std::string& name, int n_cells) {
    if (name == "x") return GridFunction::from_function(n_cells, [](double x) { return x; });
    if (name == "2x")
        return GridFunction::from_function(n_cells, [](double x) { return 2.0 * x; });
    if (name == "-1") return GridFunction::constant(n_cells, -1.0);
    if (name == "4sin(pi x/2)")
        return GridFunction::from_function(
            n_cells, [](double x) { return 4.0 * std::sin(0.5 * kPi * x); });
    if (name == "sin(pi x)")
        return GridFunction::from_function(n_cells,
                                           [](double x) { return std::sin(kPi * x); });
    if (name == "zero") return GridFunction::zero(n_cells);
    throw std::invalid_argument("unknown initial-data preset '" + name + "'");
}

GridFunction grid_from_csv(const std::string& path, int n_cells) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open samples file '" + path + "'");
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        vals.push_back(std::stod(line));
    }
    if (static_cast<int>(vals.size()) != n_cells + 1)
        throw std::runtime_error("samples file must supply n_cells+1 values");
    ArrayXd v(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i) v(i) = vals[i];
    return GridFunction(n_cells, std::move(v));
}

GridFunction resolve_data(const ExperimentConfig& cfg, const std::string& key, int n_cells,
                          const std::string& fallback) {
    if (cfg.has_str(key + "_samples")) return grid_from_csv(cfg.str(key + "_samples"), n_cells);
    return grid_preset(cfg.has_str(key) ? cfg.str(key) : fallback, n_cells);
}

// ---------------------------------------------------------------- key tables

struct NumKey {
    const char* name;
    bool required;
    double def;
};
struct StrKey {
    const char* name;
    const char* def;  // nullptr: optional with no default
};

struct ScenarioSpec {
    Scenario scenario;
    const char* name;
    std::vector<NumKey> nums;
    std::vector<StrKey> strs;
};

const std::vector<ScenarioSpec>& scenario_table() {
    static const std::vector<ScenarioSpec> table = {
        {Scenario::DirichletEc,
         "dirichlet-ec",
         {{"T", true, 0}, {"n_cells", false, 200}, {"seed", false, 12345}, {"svg", false, 0},
          {"stride", false, 0}, {"jump_window", false, 0.05}},
         {{"y0", "x"}, {"y1", "zero"}, {"y0_samples", nullptr}, {"y1_samples", nullptr}}},
        {Scenario::NeumannEc,
         "neumann-ec",
         {{"T", true, 0}, {"n_cells", false, 200}, {"seed", false, 12345}, {"svg", false, 0},
          {"stride", false, 0}},
         {{"y0", "4sin(pi x/2)"}, {"y1", "zero"}, {"y0_samples", nullptr},
          {"y1_samples", nullptr}}},
        {Scenario::Penalty,
         "penalty",
         {{"T", true, 0}, {"n_cells", false, 200}, {"seed", false, 12345},
          {"gamma_factor", false, 1.0}, {"gamma", false, 0}, {"perturbations", false, 64}},
         {{"y0", "x"}, {"y1", "zero"}}},
        {Scenario::TwoSided,
         "two-sided",
         {{"T", false, 2}, {"n_cells", false, 200}, {"seed", false, 12345}, {"svg", false, 0},
          {"stride", false, 0}},
         {{"y0", "-1"}}},
        {Scenario::BangBang,
         "bangbang",
         {{"n_cells", false, 1000}, {"seed", false, 12345}},
         {}},
        {Scenario::Stab,
         "stab",
         {{"f", true, 0}, {"T", false, 4}, {"n_cells", false, 200}, {"seed", false, 12345},
          {"svg", false, 0}, {"stride", false, 0}},
         {{"y0", "4sin(pi x/2)"}, {"y1", "zero"}, {"y0_samples", nullptr},
          {"y1_samples", nullptr}}},
        {Scenario::Of,
         "of",
         {{"T", true, 0}, {"f", true, 0}, {"n_cells", false, 200}, {"seed", false, 12345},
          {"svg", false, 0}, {"stride", false, 0}},
         {{"y0", "4sin(pi x/2)"}, {"y1", "zero"}, {"true_y0", nullptr}, {"true_y1", nullptr}}},
        {Scenario::Mismatch,
         "mismatch",
         {{"T", true, 0}, {"f", true, 0}, {"n_cells", false, 200}, {"seed", false, 12345},
          {"svg", false, 0}, {"stride", false, 0}},
         {{"y0", "4sin(pi x/2)"}, {"y1", "zero"}, {"true_y0", "2x"}, {"true_y1", "zero"},
          {"control", "of"}}},
        {Scenario::Semilinear,
         "semilinear",
         {{"w", true, 0}, {"T", false, 20}, {"n_cells", false, 400}, {"cfl", false, 0.5},
          {"amplitude", false, 0.1}, {"seed", false, 12345}, {"svg", false, 0},
          {"stride", false, 0}},
         {}},
        {Scenario::Iss,
         "iss",
         {{"w", true, 0}, {"T", false, 12}, {"k_max", false, 5}, {"n_cells", false, 400},
          {"cfl", false, 0.5}, {"amplitude", false, 0.1}, {"d_amp", false, 0.01},
          {"seed", false, 12345}},
         {}},
        {Scenario::Quasilinear,
         "quasilinear",
         {{"a", false, 1.0}, {"L", false, 0.5}, {"k_fb", false, 1.0}, {"ubar", false, 0.1},
          {"amplitude", false, 0.01}, {"T", false, 10}, {"n_cells", false, 200},
          {"cfl", false, 0.25}, {"seed", false, 12345}},
         {}},
    };
    return table;
}

const ScenarioSpec* find_spec(const std::string& name) {
    for (const auto& s : scenario_table())
        if (name == s.name) return &s;
    return nullptr;
}

const ScenarioSpec& spec_of(Scenario s) {
    for (const auto& sp : scenario_table())
        if (sp.scenario == s) return sp;
    throw std::logic_error("scenario table incomplete");
}

bool is_even_integer(double t) {
    const long r = std::lround(t);
    return std::abs(t - static_cast<double>(r)) < 1e-9 && r >= 2 && r % 2 == 0;
}

// ---------------------------------------------------------------- csv / svg

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvFile {
public:
    CsvFile(const std::string& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write '" + path + "'");
        out_ << header << "\n";
    }
    void row(std::initializer_list<double> vals) {
        bool first = true;
        for (double v : vals) {
            if (!first) out_ << ",";
            out_ << fmt(v);
            first = false;
        }
        out_ << "\n";
    }
    void raw(const std::string& line) { out_ << line << "\n"; }

private:
    std::ofstream out_;
};

int auto_stride(int levels, int target) { return std::max(1, levels / target); }

std::string write_fields_csv(const std::string& path, const Trajectory& tr) {
    CsvFile csv(path, "t,x,y,y_t,y_x");
    for (int r = 0; r < tr.levels(); ++r)
        for (int i = 0; i <= tr.n_cells; ++i)
            csv.row({tr.times(r), i * tr.dx, tr.y(r, i), tr.y_t(r, i), tr.y_x(r, i)});
    return path;
}

std::string write_energy_csv(const std::string& path, const EnergyTrace& trace) {
    CsvFile csv(path, "t,E");
    for (int r = 0; r < trace.size(); ++r) csv.row({trace.times(r), trace.energies(r)});
    return path;
}

std::string write_control_csv(const std::string& path, const ControlSignal& u) {
    CsvFile csv(path, "t,u");
    const int count =
        u.interp() == Interp::PiecewiseConstant ? u.n_steps() : u.n_steps() + 1;
    for (int j = 0; j < count; ++j) csv.row({u.sample_time(j), u.values()(j)});
    return path;
}

std::string write_report_csv(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& rows) {
    CsvFile csv(path, "key,value");
    for (const auto& [k, v] : rows) csv.raw(k + "," + v);
    return path;
}

void heat_color(double v, double vmax, int& rr, int& gg, int& bb) {
    // diverging blue-white-red, clipped at |v| = vmax
    double s = vmax > 0 ? std::clamp(v / vmax, -1.0, 1.0) : 0.0;
    if (s >= 0) {
        rr = 255;
        gg = static_cast<int>(255 * (1.0 - s));
        bb = static_cast<int>(255 * (1.0 - s));
    } else {
        rr = static_cast<int>(255 * (1.0 + s));
        gg = static_cast<int>(255 * (1.0 + s));
        bb = 255;
    }
}

std::string write_heatmap_svg(const std::string& path, const Trajectory& tr) {
    const int max_cells = 200;
    const int rstride = auto_stride(tr.levels(), max_cells);
    const int cstride = auto_stride(tr.n_cells + 1, max_cells);
    const int nrow = (tr.levels() + rstride - 1) / rstride;
    const int ncol = (tr.n_cells + cstride) / cstride;
    const double w = 800.0, h = 400.0;
    const double cw = w / nrow, ch = h / ncol;
    const double vmax = tr.y.cwiseAbs().maxCoeff();

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    // time runs left to right, space bottom to top
    int col = 0;
    for (int r = 0; r < tr.levels(); r += rstride, ++col) {
        int rowi = 0;
        for (int i = 0; i <= tr.n_cells; i += cstride, ++rowi) {
            int rr, gg, bb;
            heat_color(tr.y(r, i), vmax, rr, gg, bb);
            out << "<rect x=\"" << col * cw << "\" y=\"" << h - (rowi + 1) * ch << "\" width=\""
                << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\"rgb(" << rr << "," << gg
                << "," << bb << ")\"/>\n";
        }
    }
    out << "</svg>\n";
    return path;
}

SimOptions sim_opts(const ExperimentConfig& cfg, double T) {
    SimOptions o;
    const int n = cfg.num_int("n_cells");
    const int levels = static_cast<int>(std::lround(T * n)) + 1;
    const int stride = cfg.num_int("stride");
    o.snapshot_stride = stride > 0 ? stride : auto_stride(levels, 200);
    return o;
}

std::string outfile(const std::string& dir, const std::string& scenario,
                    const std::string& suffix, const std::string& what, const char* ext) {
    return dir + "/" + scenario + suffix + "_" + what + ext;
}

// ---------------------------------------------------------------- runners

using Paths = std::vector<std::string>;

Paths run_dirichlet_ec(const ExperimentConfig& cfg, const std::string& dir,
                       const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    const double T = cfg.num("T");
    const GridFunction y0 = resolve_data(cfg, "y0", n, "x");
    const GridFunction y1 = resolve_data(cfg, "y1", n, "zero");
    const ControlSignal u = dirichlet_exact_control(y0, y1, T);
    const Trajectory tr = simulate_linear(y0, y1, BoundaryLaw(DirichletControl{u}), T, sim_opts(cfg, T));
    const GridFunction cap_y = hminus1_antiderivative(tr.terminal_y_t());

    Paths paths;
    paths.push_back(write_control_csv(outfile(dir, "dirichlet-ec", sfx, "control", ".csv"), u));
    paths.push_back(write_fields_csv(outfile(dir, "dirichlet-ec", sfx, "state", ".csv"), tr));
    std::vector<std::pair<std::string, std::string>> rep = {
        {"terminal_l2", fmt(l2_norm(tr.terminal_y()))},
        {"terminal_hminus1", fmt(l2_norm(cap_y))},
        {"control_l2_sq", fmt(u.l2_norm_sq())},
    };
    if (T >= 4.0)
        rep.emplace_back("jump_at_2", fmt(detect_jump(u, 2.0, cfg.num("jump_window"))));
    paths.push_back(write_report_csv(outfile(dir, "dirichlet-ec", sfx, "report", ".csv"), rep));
    if (cfg.num_int("svg"))
        paths.push_back(write_heatmap_svg(outfile(dir, "dirichlet-ec", sfx, "state", ".svg"), tr));
    return paths;
}

Paths run_neumann_ec(const ExperimentConfig& cfg, const std::string& dir,
                     const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    const double T = cfg.num("T");
    const GridFunction y0 = resolve_data(cfg, "y0", n, "4sin(pi x/2)");
    const GridFunction y1 = resolve_data(cfg, "y1", n, "zero");
    const ControlSignal u = neumann_exact_control(y0, y1, T);
    const Trajectory tr = simulate_linear(y0, y1, BoundaryLaw(NeumannControl{u}), T, sim_opts(cfg, T));
    const EnergyTrace energy = simulate_energy_trace(y0, y1, BoundaryLaw(NeumannControl{u}), T);

    Paths paths;
    paths.push_back(write_control_csv(outfile(dir, "neumann-ec", sfx, "control", ".csv"), u));
    paths.push_back(write_fields_csv(outfile(dir, "neumann-ec", sfx, "state", ".csv"), tr));
    paths.push_back(write_energy_csv(outfile(dir, "neumann-ec", sfx, "energy", ".csv"), energy));
    paths.push_back(write_report_csv(
        outfile(dir, "neumann-ec", sfx, "report", ".csv"),
        {{"terminal_energy_ratio",
          fmt(energy.energies(energy.size() - 1) / std::max(energy.energies(0), 1e-300))}}));
    if (cfg.num_int("svg"))
        paths.push_back(write_heatmap_svg(outfile(dir, "neumann-ec", sfx, "state", ".svg"), tr));
    return paths;
}

Paths run_penalty(const ExperimentConfig& cfg, const std::string& dir, const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    const double T = cfg.num("T");
    const GridFunction y0 = resolve_data(cfg, "y0", n, "x");
    const GridFunction y1 = resolve_data(cfg, "y1", n, "zero");
    const ControlSignal u_star = dirichlet_exact_control(y0, y1, T);
    const int k = static_cast<int>(std::lround(T)) / 2;
    const double threshold =
        2.0 / std::sqrt(static_cast<double>(k)) * std::sqrt(u_star.l2_norm_sq());
    const double gamma =
        cfg.num("gamma") > 0 ? cfg.num("gamma") : threshold * cfg.num("gamma_factor");
    const PenaltyThresholdReport rep = verify_penalty_threshold(
        y0, y1, T, gamma, cfg.num_int("perturbations"),
        static_cast<std::uint64_t>(cfg.num_int("seed")));

    Paths paths;
    paths.push_back(write_report_csv(outfile(dir, "penalty", sfx, "report", ".csv"),
                                     {{"threshold", fmt(rep.threshold)},
                                      {"gamma", fmt(rep.gamma)},
                                      {"base_objective", fmt(rep.base_objective)},
                                      {"worst_margin", fmt(rep.worst_margin)},
                                      {"perturbations", fmt(rep.n_perturbations)},
                                      {"pass", rep.pass ? "1" : "0"}}));
    return paths;
}

Paths run_two_sided(const ExperimentConfig& cfg, const std::string& dir,
                    const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    const double T = cfg.num("T");
    const GridFunction y0 = grid_preset(cfg.str("y0"), n);
    const GridFunction y1 = GridFunction::zero(n);
    // ramps from the endpoint values to zero steer constant data to rest at T=2
    const int m = static_cast<int>(std::lround(T * n));
    ArrayXd left(m + 1), right(m + 1);
    for (int j = 0; j <= m; ++j) {
        const double t = T * j / m;
        left(j) = y0.values()(0) * (1.0 - t / T);
        right(j) = y0.values()(n) * (1.0 - t / T);
    }
    const ControlSignal u0 = ControlSignal::piecewise_linear(T, std::move(left));
    const ControlSignal u1 = ControlSignal::piecewise_linear(T, std::move(right));
    const Trajectory tr = simulate_two_sided(u0, u1, y0, y1, T, sim_opts(cfg, T));

    Paths paths;
    paths.push_back(write_control_csv(outfile(dir, "two-sided", sfx, "control", ".csv"), u1));
    paths.push_back(write_fields_csv(outfile(dir, "two-sided", sfx, "state", ".csv"), tr));
    paths.push_back(write_report_csv(
        outfile(dir, "two-sided", sfx, "report", ".csv"),
        {{"terminal_l2", fmt(l2_norm(tr.terminal_y()))},
         {"max_discontinuity", fmt(tr.discontinuity.maxCoeff())},
         {"warnings", std::to_string(tr.warnings.size())}}));
    if (cfg.num_int("svg"))
        paths.push_back(write_heatmap_svg(outfile(dir, "two-sided", sfx, "state", ".svg"), tr));
    return paths;
}

Paths run_bangbang(const ExperimentConfig& cfg, const std::string& dir,
                   const std::string& sfx) {
    const NoBangBangReport rep = verify_no_bangbang(cfg.num_int("n_cells"));
    Paths paths;
    {
        CsvFile csv(outfile(dir, "bangbang", sfx, "patterns", ".csv"), "v1,v2,offset,terminal_l2");
        for (const auto& p : rep.patterns) csv.row({p.v1, p.v2, p.offset, p.terminal_norm});
        paths.push_back(outfile(dir, "bangbang", sfx, "patterns", ".csv"));
    }
    paths.push_back(write_report_csv(
        outfile(dir, "bangbang", sfx, "report", ".csv"),
        {{"sine_terminal_l2", fmt(rep.sine_terminal_norm)},
         {"min_bangbang_l2", fmt(rep.min_bangbang_norm)},
         {"max_offset_deviation", fmt(rep.max_offset_deviation)},
         {"pass", rep.pass ? "1" : "0"}}));
    return paths;
}

Paths run_stab(const ExperimentConfig& cfg, const std::string& dir, const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    const double T = cfg.num("T");
    const double f = cfg.num("f");
    const GridFunction y0 = resolve_data(cfg, "y0", n, "4sin(pi x/2)");
    const GridFunction y1 = resolve_data(cfg, "y1", n, "zero");
    const BoundaryLaw law{NeumannFeedback{f, std::nullopt}};
    const Trajectory tr = simulate_linear(y0, y1, law, T, sim_opts(cfg, T));
    const EnergyTrace energy = simulate_energy_trace(y0, y1, law, T);

    std::vector<std::pair<std::string, std::string>> rep;
    const DecayFit fit = fit_decay_rate(energy);
    if (fit.extinction_time) {
        rep.emplace_back("extinction_time", fmt(*fit.extinction_time));
    } else {
        rep.emplace_back("mu", fmt(fit.mu));
        rep.emplace_back("C1", fmt(fit.c1));
    }

    Paths paths;
    paths.push_back(write_energy_csv(outfile(dir, "stab", sfx, "energy", ".csv"), energy));
    paths.push_back(write_fields_csv(outfile(dir, "stab", sfx, "state", ".csv"), tr));
    paths.push_back(write_report_csv(outfile(dir, "stab", sfx, "report", ".csv"), rep));
    if (cfg.num_int("svg"))
        paths.push_back(write_heatmap_svg(outfile(dir, "stab", sfx, "state", ".svg"), tr));
    return paths;
}

Paths run_of(const ExperimentConfig& cfg, const std::string& dir, const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    const double T = cfg.num("T");
    const double f = cfg.num("f");
    const GridFunction y0 = grid_preset(cfg.has_str("y0") ? cfg.str("y0") : "4sin(pi x/2)", n);
    const GridFunction y1 = grid_preset(cfg.has_str("y1") ? cfg.str("y1") : "zero", n);
    const GridFunction ty0 = grid_preset(cfg.has_str("true_y0") ? cfg.str("true_y0")
                                                                : (cfg.has_str("y0") ? cfg.str("y0")
                                                                                     : "4sin(pi x/2)"),
                                         n);
    const GridFunction ty1 =
        grid_preset(cfg.has_str("true_y1") ? cfg.str("true_y1")
                                           : (cfg.has_str("y1") ? cfg.str("y1") : "zero"),
                    n);
    const ControlSignal u = optimized_feedback_control(y0, y1, T, f);
    const BoundaryLaw law{NeumannFeedback{f, u}};
    const Trajectory tr = simulate_linear(ty0, ty1, law, T, sim_opts(cfg, T));
    const EnergyTrace energy = simulate_energy_trace(ty0, ty1, law, T);

    // closed-loop objective: squared L2 norm of the boundary slope trace
    double objective = 0.0;
    for (int j = 0; j < tr.trace_y_x.size(); ++j)
        objective += tr.trace_y_x(j) * tr.trace_y_x(j);
    objective *= tr.dt;

    const auto ext = extinction_time(energy);

    Paths paths;
    paths.push_back(write_control_csv(outfile(dir, "of", sfx, "control", ".csv"), u));
    paths.push_back(write_energy_csv(outfile(dir, "of", sfx, "energy", ".csv"), energy));
    paths.push_back(write_fields_csv(outfile(dir, "of", sfx, "state", ".csv"), tr));
    paths.push_back(write_report_csv(
        outfile(dir, "of", sfx, "report", ".csv"),
        {{"objective", fmt(objective)},
         {"extinction_time", ext ? fmt(*ext) : "none"},
         {"terminal_energy_ratio",
          fmt(energy.energies(energy.size() - 1) / std::max(energy.energies(0), 1e-300))}}));
    if (cfg.num_int("svg"))
        paths.push_back(write_heatmap_svg(outfile(dir, "of", sfx, "state", ".svg"), tr));
    return paths;
}

Paths run_mismatch(const ExperimentConfig& cfg, const std::string& dir,
                   const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    const double T = cfg.num("T");
    const double f = cfg.num("f");
    const MismatchControl kind = cfg.str("control") == "ec" ? MismatchControl::ExactControl
                                                            : MismatchControl::OptimizedFeedback;
    const MismatchResult res = mismatch_experiment(
        grid_preset(cfg.str("y0"), n), grid_preset(cfg.str("y1"), n),
        grid_preset(cfg.str("true_y0"), n), grid_preset(cfg.str("true_y1"), n), kind, f, T);
    const auto ext = extinction_time(res.energy);

    Paths paths;
    paths.push_back(write_energy_csv(outfile(dir, "mismatch", sfx, "energy", ".csv"), res.energy));
    paths.push_back(write_report_csv(
        outfile(dir, "mismatch", sfx, "report", ".csv"),
        {{"extinction_time", ext ? fmt(*ext) : "none"},
         {"terminal_energy_ratio",
          fmt(res.energy.energies(res.energy.size() - 1) /
              std::max(res.energy.energies(0), 1e-300))}}));
    if (cfg.num_int("svg"))
        paths.push_back(
            write_heatmap_svg(outfile(dir, "mismatch", sfx, "state", ".svg"), res.trajectory));
    return paths;
}

GridFunction semilinear_profile(int n, double amplitude) {
    return GridFunction::from_function(
        n, [&](double x) { return amplitude * std::sin(0.5 * kPi * x); });
}

Paths run_semilinear(const ExperimentConfig& cfg, const std::string& dir,
                     const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    const double T = cfg.num("T");
    const double w = cfg.num("w");
    SemilinearOptions opts;
    opts.cfl = cfg.num("cfl");
    const GridFunction y0 = semilinear_profile(n, cfg.num("amplitude"));
    const GridFunction y1 = GridFunction::zero(n);
    const Trajectory tr = simulate_semilinear(w > 0 ? Nonlinearity::constant(w)
                                                    : Nonlinearity::none(),
                                              Disturbance::none(), y0, y1, T, opts);

    Paths paths;
    {
        CsvFile csv(outfile(dir, "semilinear", sfx, "sup", ".csv"), "t,window_sup");
        for (double t = 0.0; t + 2.0 <= T + 1e-9; t += 2.0)
            csv.row({t, supnorm_window(tr, t, t + 2.0)});
        paths.push_back(outfile(dir, "semilinear", sfx, "sup", ".csv"));
    }
    const SupDecayFit fit = fit_supnorm_decay(tr, 2.0, T);
    const double mu = std::abs(std::log(20.0 * w));
    paths.push_back(write_report_csv(outfile(dir, "semilinear", sfx, "report", ".csv"),
                                     {{"fitted_rate", fmt(fit.rate)},
                                      {"claimed_rate", fmt(mu)},
                                      {"pass", fit.rate >= 0.9 * mu ? "1" : "0"}}));
    if (cfg.num_int("svg"))
        paths.push_back(write_heatmap_svg(outfile(dir, "semilinear", sfx, "state", ".svg"), tr));
    return paths;
}

Paths run_iss(const ExperimentConfig& cfg, const std::string& dir, const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    const double T = cfg.num("T");
    const double w = cfg.num("w");
    const double damp = cfg.num("d_amp");
    SemilinearOptions opts;
    opts.cfl = cfg.num("cfl");
    Disturbance dist{[damp](double, double x) { return damp * std::sin(kPi * x); },
                     std::abs(damp)};
    const GridFunction y0 = semilinear_profile(n, cfg.num("amplitude"));
    const GridFunction y1 = GridFunction::zero(n);
    const Trajectory y_traj =
        simulate_semilinear(Nonlinearity::constant(w), dist, y0, y1, T, opts);
    const Trajectory d_traj = disturbance_response(dist, T, n, opts);
    const IssReport rep = iss_check(y_traj, d_traj, w, cfg.num_int("k_max"));

    Paths paths;
    {
        CsvFile csv(outfile(dir, "iss", sfx, "margins", ".csv"), "k,lhs,rhs,margin");
        for (const auto& b : rep.bounds)
            csv.row({static_cast<double>(b.k), b.lhs, b.rhs, b.margin});
        paths.push_back(outfile(dir, "iss", sfx, "margins", ".csv"));
    }
    paths.push_back(write_report_csv(outfile(dir, "iss", sfx, "report", ".csv"),
                                     {{"pass", rep.pass ? "1" : "0"}}));
    return paths;
}

Paths run_quasilinear(const ExperimentConfig& cfg, const std::string& dir,
                      const std::string& sfx) {
    const int n = cfg.num_int("n_cells");
    QuasiConfig qc;
    qc.a = cfg.num("a");
    qc.length = cfg.num("L");
    qc.k_fb = cfg.num("k_fb");
    qc.ubar = cfg.num("ubar");
    QuasiOptions opts;
    opts.cfl = cfg.num("cfl");
    const double amp = cfg.num("amplitude");
    ArrayXd u0(n + 1), u1 = ArrayXd::Zero(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = qc.length * i / n;
        u0(i) = amp * std::sin(2.0 * kPi * x / qc.length) * x * (qc.length - x);
    }
    const Trajectory tr = simulate_quasilinear(qc, u0, u1, cfg.num("T"), opts);
    const LyapunovWeights wts = LyapunovWeights::defaults(qc);
    const LyapunovReport rep = lyapunov_decay_check(tr, qc, wts);

    Paths paths;
    {
        CsvFile csv(outfile(dir, "quasilinear", sfx, "lyapunov", ".csv"), "t,E");
        for (int i = 0; i < rep.times.size(); ++i) csv.row({rep.times(i), rep.values(i)});
        paths.push_back(outfile(dir, "quasilinear", sfx, "lyapunov", ".csv"));
    }
    paths.push_back(write_report_csv(outfile(dir, "quasilinear", sfx, "report", ".csv"),
                                     {{"fitted_rate", fmt(rep.fitted_rate)},
                                      {"worst_step_increase", fmt(rep.worst_step_increase)},
                                      {"max_equivalence_ratio", fmt(rep.max_equivalence_ratio)},
                                      {"pass", rep.pass ? "1" : "0"}}));
    return paths;
}

}  // namespace

const char* scenario_name(Scenario s) { return spec_of(s).name; }

double ExperimentConfig::num(const std::string& key) const {
    const auto it = nums.find(key);
    if (it == nums.end()) throw std::logic_error("config key missing: " + key);
    return it->second;
}

int ExperimentConfig::num_int(const std::string& key) const {
    return static_cast<int>(std::lround(num(key)));
}

std::string ExperimentConfig::str(const std::string& key) const {
    const auto it = strs.find(key);
    if (it == strs.end()) throw std::logic_error("config key missing: " + key);
    return it->second;
}

ParseResult parse_config(const std::string& text) {
    ParseResult res;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    const ScenarioSpec* spec = nullptr;
    ExperimentConfig cfg;
    std::map<std::string, int> key_lines;

    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };

    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                res.errors.push_back({lineno, "malformed scenario header"});
                continue;
            }
            if (spec) {
                res.errors.push_back({lineno, "duplicate scenario header"});
                continue;
            }
            const std::string name = trim(t.substr(1, t.size() - 2));
            spec = find_spec(name);
            if (!spec) {
                res.errors.push_back({lineno, "unknown scenario '" + name + "'"});
                return res;
            }
            cfg.scenario = spec->scenario;
            continue;
        }
        if (!spec) {
            res.errors.push_back({lineno, "expected [scenario] header before keys"});
            return res;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            res.errors.push_back({lineno, "expected 'key = value'"});
            continue;
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        key_lines[key] = lineno;

        bool known = false;
        for (const auto& nk : spec->nums) {
            if (key == nk.name) {
                known = true;
                try {
                    std::size_t used = 0;
                    const double v = std::stod(value, &used);
                    if (used != value.size()) throw std::invalid_argument("trailing");
                    cfg.nums[key] = v;
                } catch (...) {
                    res.errors.push_back({lineno, "non-numeric value for '" + key + "'"});
                }
                break;
            }
        }
        if (!known) {
            for (const auto& sk : spec->strs) {
                if (key == sk.name) {
                    known = true;
                    cfg.strs[key] = value;
                    break;
                }
            }
        }
        if (!known)
            res.errors.push_back({lineno, "unknown key '" + key + "' for scenario '" +
                                              std::string(spec->name) + "'"});
    }

    if (!spec) {
        res.errors.push_back({lineno, "missing [scenario] header"});
        return res;
    }

    for (const auto& nk : spec->nums) {
        if (cfg.nums.count(nk.name)) continue;
        if (nk.required) {
            // a key that appeared but failed to parse was already reported
            if (!key_lines.count(nk.name))
                res.errors.push_back(
                    {0, std::string("missing required key '") + nk.name + "'"});
        } else {
            cfg.nums[nk.name] = nk.def;
        }
    }
    for (const auto& sk : spec->strs) {
        if (cfg.strs.count(sk.name) || sk.def == nullptr) continue;
        cfg.strs[sk.name] = sk.def;
    }

    const auto line_of = [&](const char* key) {
        const auto it = key_lines.find(key);
        return it == key_lines.end() ? 0 : it->second;
    };

    // scenario-level validation; runs on whatever parsed so all errors surface
    {
        const Scenario s = cfg.scenario;
        if (cfg.nums.count("n_cells") && cfg.num_int("n_cells") < 2)
            res.errors.push_back({line_of("n_cells"), "n_cells must be at least 2"});
        if ((s == Scenario::DirichletEc || s == Scenario::NeumannEc || s == Scenario::Penalty ||
             s == Scenario::Of || s == Scenario::Mismatch) &&
            cfg.nums.count("T") && !is_even_integer(cfg.num("T")))
            res.errors.push_back({line_of("T"), "T must be even"});
        if ((s == Scenario::Of || s == Scenario::Mismatch || s == Scenario::Stab) &&
            cfg.nums.count("f") && cfg.num("f") < 0.0)
            res.errors.push_back({line_of("f"), "f must be non-negative"});
        if ((s == Scenario::Semilinear || s == Scenario::Iss) && cfg.nums.count("w") &&
            !(cfg.num("w") < 0.05))
            res.errors.push_back({line_of("w"), "w must be < 1/20"});
        if (s == Scenario::TwoSided && cfg.nums.count("T") &&
            std::abs(cfg.num("T") - 2.0) > 1e-12)
            res.errors.push_back({line_of("T"), "two-sided scenario supports T = 2"});
        if (s == Scenario::Mismatch && cfg.strs.count("control") &&
            cfg.str("control") != "ec" && cfg.str("control") != "of")
            res.errors.push_back({line_of("control"), "control must be 'ec' or 'of'"});
        if ((s == Scenario::Semilinear || s == Scenario::Iss) && cfg.nums.count("cfl") &&
            (!(cfg.num("cfl") > 0.0) || cfg.num("cfl") > 1.0))
            res.errors.push_back({line_of("cfl"), "cfl must lie in (0,1]"});
        if (s == Scenario::Quasilinear && cfg.nums.count("cfl") &&
            (!(cfg.num("cfl") > 0.0) || cfg.num("cfl") > 0.5))
            res.errors.push_back({line_of("cfl"), "cfl must lie in (0,0.5]"});
    }

    if (res.errors.empty()) res.config = std::move(cfg);
    return res;
}

std::vector<std::string> run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                                        const std::string& file_suffix) {
    std::filesystem::create_directories(out_dir);
    switch (cfg.scenario) {
        case Scenario::DirichletEc: return run_dirichlet_ec(cfg, out_dir, file_suffix);
        case Scenario::NeumannEc: return run_neumann_ec(cfg, out_dir, file_suffix);
        case Scenario::Penalty: return run_penalty(cfg, out_dir, file_suffix);
        case Scenario::TwoSided: return run_two_sided(cfg, out_dir, file_suffix);
        case Scenario::BangBang: return run_bangbang(cfg, out_dir, file_suffix);
        case Scenario::Stab: return run_stab(cfg, out_dir, file_suffix);
        case Scenario::Of: return run_of(cfg, out_dir, file_suffix);
        case Scenario::Mismatch: return run_mismatch(cfg, out_dir, file_suffix);
        case Scenario::Semilinear: return run_semilinear(cfg, out_dir, file_suffix);
        case Scenario::Iss: return run_iss(cfg, out_dir, file_suffix);
        case Scenario::Quasilinear: return run_quasilinear(cfg, out_dir, file_suffix);
    }
    throw std::logic_error("unhandled scenario");
}

}  // namespace wavectl
