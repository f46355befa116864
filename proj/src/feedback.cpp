#include "vintage/feedback.hpp"

#include <cmath>
#include <stdexcept>

#include "vintage/convex.hpp"

namespace vintage {

ClosedLoopResult closed_loop_simulate(const AgeProfile& x, const GradientMap& gradient_map,
                                      const ModelSpec& spec, const Grid& grid) {
    if (x.size() != grid.nodes())
        throw std::invalid_argument("closed_loop_simulate: profile length does not match grid");
    if (!gradient_map) throw std::invalid_argument("closed_loop_simulate: empty gradient map");

    const double a = std::exp(-spec.mu * grid.dt);
    const double half_dt = 0.5 * grid.dt;

    ClosedLoopResult result;
    result.y.y = Array2D(grid.n_t + 1, grid.nodes());
    result.u = ControlPath::zero(grid);
    for (std::size_t j = 0; j <= grid.n_s; ++j) result.y.y(0, j) = x[j];

    AgeProfile slice(grid.nodes());
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        for (std::size_t j = 0; j <= grid.n_s; ++j) slice[j] = result.y.y(k, j);
        DualControl z = b_star(gradient_map(slice));
        z.z0 = -z.z0;
        for (double& v : z.z1) v = -v;
        auto [u0, u1] = h0_conj_grad(z, spec.cost);
        if (u1.size() != grid.nodes())
            throw std::invalid_argument("closed_loop_simulate: gradient map length mismatch");

        result.u.u0[k] = u0;
        for (std::size_t j = 0; j <= grid.n_s; ++j) result.u.u1(k, j) = u1[j];
        detail::state_step(result.y.y.row(k), result.y.y.row(k + 1), u0, result.u.u1.row(k), a,
                           half_dt, grid.n_s);
    }
    return result;
}

AgeProfile stationary_gradient_map(const ModelSpec& spec, const Grid& grid) {
    const auto* linear = std::get_if<LinearRevenue>(&spec.revenue.variant);
    if (!linear)
        throw std::invalid_argument("stationary_gradient_map: no closed-form gradient map");
    const double c = spec.lambda + spec.mu;
    AgeProfile pi(grid.nodes());
    for (std::size_t j = 0; j <= grid.n_s; ++j)
        pi[j] = -linear->rho * (1.0 - std::exp(-c * (spec.sbar - grid.s(j)))) / c;
    return pi;
}

}  // namespace vintage
