#pragma once

#include "vintage/convex.hpp"
#include "vintage/model.hpp"

namespace vintage {

/// Applies e^{k*dt*A0*}: characteristics flow toward younger ages with decay
/// e^{-mu*dt} per step and zero beyond sbar. Discrete transpose of
/// semigroup_apply up to the decay scalar; bit-identical composition.
AgeProfile adjoint_semigroup_apply(const AgeProfile& f, std::size_t steps, double mu,
                                   const Grid& grid);

/// Backward costate recursion for the truncated problem.
///
/// With q = e^{-(lambda+mu)*dt} and g^{(k)} = g0_grad(y[k]):
///   pi[n_t] = 0,  pi[k][n_s] = 0,
///   pi[k][j] = q*pi[k+1][j+1] + (dt/2)*(g^{(k)}[j] + q*g^{(k+1)}[j+1]).
///
/// The driver is integrated along each characteristic segment by the
/// trapezoidal product rule; the profile is second-order accurate in dt,
/// uniformly in age.
CostatePath solve_costate(const StatePath& y, const ModelSpec& spec, const Grid& grid);

/// Discounted L^q norm of a costate path with L2 age slices:
/// ( sum_k e^{-lambda*t_k} ||pi[k]||_{L2}^q dt )^{1/q}.
double costate_discounted_norm(const CostatePath& pi, double q, double lambda, const Grid& grid);

}  // namespace vintage
