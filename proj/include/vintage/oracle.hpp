#pragma once

#include "vintage/dynamics.hpp"
#include "vintage/model.hpp"

namespace vintage {

/// Central finite difference of the cost along a control direction:
/// (J(u + eps*v) - J(u - eps*v)) / (2*eps).
/// Throws std::domain_error if a perturbed control is infeasible.
double cost_gradient_fd(const AgeProfile& x, const ControlPath& u, const ModelSpec& spec,
                        const Grid& grid, const ControlPath& v, double eps);

/// Exact slot-wise gradient of the discretized cost, computed by transposing
/// the forward scheme (discrete adjoint). The returned ControlPath holds
/// dJ/du0[k] and dJ/du1[k][j]. For box-constrained costs this is the gradient
/// of the smooth part; the box is handled by projection.
ControlPath cost_gradient_adjoint(const AgeProfile& x, const ControlPath& u,
                                  const ModelSpec& spec, const Grid& grid);

/// Gradient of the discounted state-cost part alone (same transposition,
/// control-cost terms omitted).
ControlPath state_cost_gradient_adjoint(const AgeProfile& x, const ControlPath& u,
                                        const ModelSpec& spec, const Grid& grid);

enum class GradientMode {
    kBlockFd,  // central differences of true cost values per coordinate (default)
    kAdjoint,  // discrete adjoint; fast but not independent of the adjoint code
};

struct DirectResult {
    ControlPath u;
    double cost = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Direct minimization of the discretized cost by projected, diagonally
/// scaled gradient descent with Armijo backtracking. The default gradient is
/// assembled from finite differences of cost values coordinate by coordinate,
/// organized through the affine state map; it shares no code with the
/// adjoint recursion.
DirectResult direct_optimize(const AgeProfile& x, const ModelSpec& spec, const Grid& grid,
                             double tol, std::size_t max_iter,
                             GradientMode mode = GradientMode::kBlockFd);

/// Value function at the grid's initial time: the directly optimized cost.
double value_at(const AgeProfile& x, const ModelSpec& spec, const Grid& grid, double tol = 1e-6);

struct ValueGradientCheck {
    double fd_directional = 0.0;
    double costate_pairing = 0.0;
    double rel_err = 0.0;
};

/// Compares a central difference of the value function in direction h with
/// the costate pairing <pi(0), h>, pi taken from the converged sweep at x.
ValueGradientCheck value_gradient_check(const AgeProfile& x, const AgeProfile& h,
                                        const ModelSpec& spec, const Grid& grid, double eps);

}  // namespace vintage
