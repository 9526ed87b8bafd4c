#pragma once

#include "wavectl/signal.hpp"

#include <optional>
#include <variant>

namespace wavectl {

/// y(t,1) = u(t)
struct DirichletControl {
    ControlSignal u;
};

/// y_x(t,1) = u(t)
struct NeumannControl {
    ControlSignal u;
};

/// y_x(t,1) = -f y_t(t,1) + u(t); u absent means the pure closed loop.
struct NeumannFeedback {
    double f = 0.0;
    std::optional<ControlSignal> u;
};

/// Right-end boundary law; the left end is always y(t,0) = 0 except in the
/// dedicated two-sided Dirichlet problem.
using BoundaryLaw = std::variant<DirichletControl, NeumannControl, NeumannFeedback>;

}  // namespace wavectl
