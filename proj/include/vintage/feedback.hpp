#pragma once

#include <functional>

#include "vintage/dynamics.hpp"
#include "vintage/model.hpp"

namespace vintage {

/// Map from a state age profile to a value-gradient age profile.
using GradientMap = std::function<AgeProfile(const AgeProfile&)>;

struct ClosedLoopResult {
    StatePath y;
    ControlPath u;
};

/// Closed-loop simulation: at each step the control is the maximum-principle
/// map of the supplied gradient evaluated at the current state,
/// u[k] = (h0*)'(-B* gradient_map(y[k])), fed into the same one-step state
/// update as evolve_state.
ClosedLoopResult closed_loop_simulate(const AgeProfile& x, const GradientMap& gradient_map,
                                      const ModelSpec& spec, const Grid& grid);

/// Closed-form stationary value gradient for linear revenue:
/// pi(s) = -rho * (1 - e^{-(lambda+mu)(sbar-s)}) / (lambda+mu), sampled on the
/// grid. Throws std::invalid_argument for other revenue variants.
AgeProfile stationary_gradient_map(const ModelSpec& spec, const Grid& grid);

}  // namespace vintage
