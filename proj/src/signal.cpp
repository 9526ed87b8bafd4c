#include "wavectl/signal.hpp"

#include <algorithm>
#include <cmath>

namespace wavectl {

ControlSignal::ControlSignal(double horizon, int n_steps, Interp interp, ArrayXd values)
    : horizon_(horizon), n_steps_(n_steps), interp_(interp), values_(std::move(values)) {
    if (!(horizon_ > 0.0)) throw std::invalid_argument("ControlSignal: horizon must be positive");
    if (n_steps_ <= 0) throw std::invalid_argument("ControlSignal: n_steps must be positive");
    const Eigen::Index expect =
        interp_ == Interp::PiecewiseConstant ? n_steps_ : n_steps_ + 1;
    if (values_.size() != expect)
        throw std::invalid_argument("ControlSignal: sample count does not match n_steps");
    if (!values_.isFinite().all())
        throw std::invalid_argument("ControlSignal: values must be finite");
}

ControlSignal ControlSignal::zero(double horizon, int n_steps, Interp interp) {
    const int n = interp == Interp::PiecewiseConstant ? n_steps : n_steps + 1;
    return ControlSignal(horizon, n_steps, interp, ArrayXd::Zero(n));
}

ControlSignal ControlSignal::piecewise_constant(double horizon, ArrayXd cell_values) {
    const int n = static_cast<int>(cell_values.size());
    return ControlSignal(horizon, n, Interp::PiecewiseConstant, std::move(cell_values));
}

ControlSignal ControlSignal::piecewise_linear(double horizon, ArrayXd node_values) {
    const int n = static_cast<int>(node_values.size()) - 1;
    return ControlSignal(horizon, n, Interp::PiecewiseLinear, std::move(node_values));
}

double ControlSignal::sample_time(int j) const {
    if (interp_ == Interp::PiecewiseConstant) return (j + 0.5) * dt();
    return j * dt();
}

double ControlSignal::value_at(double t) const {
    if (t < -1e-12 || t > horizon_ + 1e-12)
        throw std::out_of_range("ControlSignal::value_at: t outside [0,horizon]");
    const double s = std::clamp(t, 0.0, horizon_) / dt();
    if (interp_ == Interp::PiecewiseConstant) {
        const int c = std::min(static_cast<int>(s), n_steps_ - 1);
        return values_(c);
    }
    const int c = std::min(static_cast<int>(s), n_steps_ - 1);
    const double w = s - c;
    return (1.0 - w) * values_(c) + w * values_(c + 1);
}

double ControlSignal::left_limit_in(double t0) const {
    if (interp_ == Interp::PiecewiseLinear) return value_at(t0);
    const double s = std::clamp(t0, 0.0, horizon_) / dt();
    // nudge into the cell to the right of t0
    const int c = std::min(static_cast<int>(std::floor(s + 1e-9)), n_steps_ - 1);
    return values_(c);
}

double ControlSignal::right_limit_in(double t1) const {
    if (interp_ == Interp::PiecewiseLinear) return value_at(t1);
    const double s = std::clamp(t1, 0.0, horizon_) / dt();
    // nudge into the cell to the left of t1
    const int c = std::max(0, std::min(static_cast<int>(std::ceil(s - 1e-9)) - 1, n_steps_ - 1));
    return values_(c);
}

double ControlSignal::integral_to(double t) const {
    // exact integral of the interpolant over [0, t]
    const double s = std::clamp(t, 0.0, horizon_) / dt();
    const int c = std::min(static_cast<int>(s), n_steps_ - 1);
    const double w = s - c;  // fraction inside cell c
    double acc = 0.0;
    if (interp_ == Interp::PiecewiseConstant) {
        for (int j = 0; j < c; ++j) acc += values_(j);
        acc += w * values_(c);
        return acc * dt();
    }
    for (int j = 0; j < c; ++j) acc += 0.5 * (values_(j) + values_(j + 1));
    const double vc = values_(c);
    const double vw = (1.0 - w) * vc + w * values_(c + 1);
    acc += 0.5 * w * (vc + vw);
    return acc * dt();
}

double ControlSignal::mean_on(double t0, double t1) const {
    if (t0 < -1e-12 || t1 > horizon_ + 1e-12 || !(t1 > t0))
        throw std::out_of_range("ControlSignal::mean_on: window out of range");
    return (integral_to(t1) - integral_to(t0)) / (t1 - t0);
}

double ControlSignal::l2_norm_sq() const {
    if (interp_ == Interp::PiecewiseConstant) return dt() * values_.square().sum();
    double acc = 0.0;
    for (int j = 0; j < n_steps_; ++j) {
        const double a = values_(j), b = values_(j + 1);
        acc += (a * a + a * b + b * b) / 3.0;
    }
    return acc * dt();
}

ControlSignal ControlSignal::scaled(double a) const {
    return ControlSignal(horizon_, n_steps_, interp_, values_ * a);
}

ControlSignal ControlSignal::plus(const ControlSignal& other) const {
    if (other.n_steps_ != n_steps_ || other.interp_ != interp_ ||
        std::abs(other.horizon_ - horizon_) > 1e-12)
        throw std::invalid_argument("ControlSignal::plus: signals must share grid and rule");
    return ControlSignal(horizon_, n_steps_, interp_, values_ + other.values_);
}

double detect_jump(const ControlSignal& u, double t_star, double window) {
    if (!(t_star > 0.0) || !(t_star < u.horizon()))
        throw std::invalid_argument("detect_jump: t_star must lie inside (0,horizon)");
    if (!(window > u.dt()))
        throw std::invalid_argument("detect_jump: window must exceed the sampling step");
    if (t_star - window < -1e-12 || t_star + window > u.horizon() + 1e-12)
        throw std::invalid_argument("detect_jump: window out of range");
    return std::abs(u.mean_on(t_star, t_star + window) - u.mean_on(t_star - window, t_star));
}

}  // namespace wavectl
