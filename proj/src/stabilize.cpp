#include "wavectl/stabilize.hpp"

#include <cmath>

namespace wavectl {

EnergyTrace energy_trace(const Trajectory& traj) {
    EnergyTrace trace;
    trace.times = traj.times;
    trace.energies.resize(traj.levels());
    for (int r = 0; r < traj.levels(); ++r) trace.energies(r) = traj.energy_at(r);
    return trace;
}

DecayFit fit_decay_rate(const EnergyTrace& trace, double sample_period) {
    if (trace.size() < 2) throw std::invalid_argument("fit_decay_rate: trace too short");
    if (!(sample_period > 0.0))
        throw std::invalid_argument("fit_decay_rate: sample period must be positive");
    const double e0 = trace.energies(0);

    std::vector<double> ts, ls;
    const double t_end = trace.times(trace.size() - 1);
    int idx = 0;
    for (int m = 0; m * sample_period <= t_end + 1e-9; ++m) {
        const double target = m * sample_period;
        while (idx + 1 < trace.size() &&
               std::abs(trace.times(idx + 1) - target) <= std::abs(trace.times(idx) - target))
            ++idx;
        const double e = trace.energies(idx);
        if (e <= 1e-14 * std::max(e0, 1e-300)) {
            DecayFit fit;
            for (int r = 0; r < trace.size(); ++r) {
                if (trace.energies(r) <= 1e-14 * std::max(e0, 1e-300)) {
                    fit.extinction_time = trace.times(r);
                    break;
                }
            }
            return fit;
        }
        ts.push_back(trace.times(idx));
        ls.push_back(std::log(e));
    }
    if (ts.size() < 2) throw std::invalid_argument("fit_decay_rate: not enough sample points");

    const double n = static_cast<double>(ts.size());
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += ls[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * ls[i];
    }
    const double slope = (n * stl - st * sl) / (n * stt - st * st);
    const double intercept = (sl - slope * st) / n;

    DecayFit fit;
    fit.mu = -slope;
    fit.c1 = std::exp(intercept) / e0;
    return fit;
}

std::optional<double> extinction_time(const EnergyTrace& trace, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("extinction_time: tol must be positive");
    const double e0 = trace.energies(0);
    for (int r = 0; r < trace.size(); ++r)
        if (trace.energies(r) <= tol * e0) return trace.times(r);
    return std::nullopt;
}

std::optional<double> extinction_time(const Trajectory& traj, double tol) {
    return extinction_time(energy_trace(traj), tol);
}

MismatchResult mismatch_experiment(const GridFunction& design_y0, const GridFunction& design_y1,
                                   const GridFunction& true_y0, const GridFunction& true_y1,
                                   MismatchControl kind, double f, double T) {
    const double f_design = kind == MismatchControl::OptimizedFeedback ? f : 0.0;
    ControlSignal u = optimized_feedback_control(design_y0, design_y1, T, f_design);
    Trajectory traj =
        simulate_linear(true_y0, true_y1, BoundaryLaw(NeumannFeedback{f, u}), T);
    EnergyTrace energy = energy_trace(traj);
    return MismatchResult{std::move(u), std::move(traj), std::move(energy)};
}

}  // namespace wavectl
