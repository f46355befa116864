#pragma once

#include "vintage/model.hpp"

namespace vintage {

/// Dual control: z0 pairs with the boundary control, z1 with the distributed
/// one. Produced by b_star from a costate age slice.
struct DualControl {
    double z0 = 0.0;
    AgeProfile z1;
};

/// Trapezoidal inner product on the age grid.
double inner_age(const AgeProfile& f, const AgeProfile& g, const Grid& grid);

/// L2(0, sbar) norm with trapezoidal quadrature.
double l2_age_norm(const AgeProfile& f, const Grid& grid);

/// Running control cost h0(u). Returns +infinity when a box constraint is
/// violated; the sentinel is never fed back into arithmetic.
double h0_value(double u0, const AgeProfile& u1, const CostSpec& cost, const Grid& grid);

/// Gradient of the Fenchel conjugate, (h0*)'(z): the pointwise minimizer of
/// h0(u) - <z, u>, clamped to the box when present.
std::pair<double, AgeProfile> h0_conj_grad(const DualControl& z, const CostSpec& cost);

/// Fenchel conjugate h0*(z) = sup_u <z,u> - h0(u), in closed form.
double h0_conj_value(const DualControl& z, const CostSpec& cost, const Grid& grid);

/// State cost g0(x) = -R(<alpha, x>).
double g0_value(const AgeProfile& x, const ModelSpec& spec, const Grid& grid);

/// Riesz representative of g0'(x): the profile s -> -R'(Q) * alpha(s).
AgeProfile g0_grad(const AgeProfile& x, const ModelSpec& spec, const Grid& grid);

/// Adjoint of the control operator B(u0,u1) = u1 + u0*delta_0:
/// B* pi = (pi(0), pi(.)).
DualControl b_star(const AgeProfile& pi_slice);

}  // namespace vintage
