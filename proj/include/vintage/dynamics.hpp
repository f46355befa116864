#pragma once

#include "vintage/convex.hpp"
#include "vintage/model.hpp"

namespace vintage {

/// Applies e^{k*dt*A0} to an age profile: characteristics flow toward older
/// ages with decay e^{-mu*dt} per step and zero inflow at s = 0. Implemented
/// as k single steps so composition is bit-identical.
AgeProfile semigroup_apply(const AgeProfile& f, std::size_t steps, double mu, const Grid& grid);

namespace detail {
/// One transport step; shared by open-loop and closed-loop simulation so the
/// two recursions are bit-identical.
void state_step(const double* yk, double* ynext, double u0k, const double* u1k, double decay,
                double half_dt, std::size_t n_s);
}  // namespace detail

/// Forward state evolution by the method of characteristics.
///
/// One step (a = e^{-mu*dt}):
///   y[k+1][0]   = u0[k]                                    (boundary injection)
///   y[k+1][j]   = a*y[k][j-1] + (dt/2)*(a*u1[k][j-1] + u1[k][j]),  1 <= j < n_s
///   y[k+1][n_s] = a*y[k][n_s-1] + (dt/2)*a*u1[k][n_s-1]
///
/// The source is sampled at both endpoints of each characteristic segment
/// (second order in age); the distributed control at the maximal age is
/// inert, matching the zero costate there.
StatePath evolve_state(const AgeProfile& x, const ControlPath& u, const ModelSpec& spec,
                       const Grid& grid);

/// Output rate Q[k] = trapezoidal integral of alpha * y[k].
std::vector<double> output_path(const StatePath& y, const ModelSpec& spec, const Grid& grid);

/// Discounted state-cost quadrature: sum_k e^{-lambda*t_k} g0(y[k]) dt over
/// k = 0..n_t-1 (left endpoint in time).
double discounted_state_cost(const StatePath& y, const ModelSpec& spec, const Grid& grid);

/// Discounted control-cost quadrature. Each component is discounted at its
/// effective delivery time within the step: boundary investment lands at the
/// end of the step (factor e^{-lambda*dt}), distributed investment acts
/// across the step (midpoint factor e^{-lambda*dt/2}).
/// Returns +infinity if any step violates the control box.
double discounted_control_cost(const ControlPath& u, const ModelSpec& spec, const Grid& grid);

/// Total discretized cost J(x, u) over the truncated horizon.
double cost_functional(const AgeProfile& x, const ControlPath& u, const ModelSpec& spec,
                       const Grid& grid);

/// Cost of an already-computed trajectory (state part from y, control part
/// from u). Equals cost_functional when y = evolve_state(x, u).
double cost_of_trajectory(const StatePath& y, const ControlPath& u, const ModelSpec& spec,
                          const Grid& grid);

}  // namespace vintage
