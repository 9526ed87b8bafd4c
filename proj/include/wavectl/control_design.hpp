#pragma once

#include "wavectl/simulate.hpp"

#include <cstdint>
#include <vector>

namespace wavectl {

/// L^2-minimal Dirichlet control steering (y0,y1) to rest at T = 2k.
/// The closed form is 2-periodic; samples are node values of the piecewise
/// linear control on the data's lattice, with one-sided averages at interior
/// period breaks (where the control jumps unless y0(1) = 0).
ControlSignal dirichlet_exact_control(const GridFunction& y0, const GridFunction& y1, double T);

/// L^2-minimal Neumann control for even T; equals the optimized feedback
/// control with f = 0. Piecewise constant: the data enters through per-cell
/// slopes of y0 and per-cell means of y1, which is exactly what the
/// characteristic lattice propagates.
ControlSignal neumann_exact_control(const GridFunction& y0, const GridFunction& y1, double T);

/// Open-loop part of the optimized feedback law y_x(t,1) = -f y_t(t,1) + u(t),
/// minimizing the L^2 norm of the full boundary slope trace. For f = 1 the
/// samples vanish on [T-2, T]; for T = 2 and f = 1 the control is identically
/// zero (the feedback alone is optimal).
ControlSignal optimized_feedback_control(const GridFunction& y0, const GridFunction& y1,
                                         double T, double f);

/// Gain 1/(T-1) of the moving-horizon feedback y_x(t,1) = -y_t(t,1)/(T-1).
double moving_horizon_gain(double T);

/// (1/gamma) ||u||^2_{L2(0,T)} + sqrt( ||y(T,.)||^2 + ||Y||^2 ) where Y is the
/// antiderivative representation of y_t(T,.).
double penalty_objective(const ControlSignal& u, double gamma, const GridFunction& y0,
                         const GridFunction& y1, double T);

struct PenaltyThresholdReport {
    double threshold = 0.0;       // (2/sqrt(k)) ||u*||
    double gamma = 0.0;
    double base_objective = 0.0;  // objective at u*
    double worst_margin = 0.0;    // min over perturbations of J(u*+eps d) - J(u*)
    int n_perturbations = 0;
    bool pass = false;
};

/// Sampled optimality check of the penalty formulation: for gamma at or above
/// the threshold no sampled perturbation may beat u*.
PenaltyThresholdReport verify_penalty_threshold(const GridFunction& y0, const GridFunction& y1,
                                                double T, double gamma,
                                                int n_perturbations = 64,
                                                std::uint64_t seed = 0x5eed5001ull);

/// Terminal offsets reachable from bang-bang-off controls with T = 2k:
/// { j*M : j = -2k..2k }.
std::vector<double> reachable_offsets(int k, double M);

struct BangBangPattern {
    double v1 = 0.0;             // control level on (0,1)
    double v2 = 0.0;             // control level on (1,2)
    double offset = 0.0;         // measured constant terminal-minus-initial shift
    double terminal_norm = 0.0;  // ||y(2,.)||
};

struct NoBangBangReport {
    double sine_terminal_norm = 0.0;     // ||y(2,.)|| under u(t) = sin(pi t)/2
    double min_bangbang_norm = 0.0;      // best terminal norm over bang-bang-off controls
    double max_offset_deviation = 0.0;   // how far terminal-minus-initial is from constant
    std::vector<BangBangPattern> patterns;
    bool pass = false;
};

/// The L^infinity slide's counterexample: u(t) = sin(pi t)/2 steers
/// y0 = sin(pi x) to rest at T = 2 while no bang-bang-off control does.
NoBangBangReport verify_no_bangbang(int n_cells);

}  // namespace wavectl
