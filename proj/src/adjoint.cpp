#include "vintage/adjoint.hpp"

#include <cmath>
#include <stdexcept>

namespace vintage {

AgeProfile adjoint_semigroup_apply(const AgeProfile& f, std::size_t steps, double mu,
                                   const Grid& grid) {
    if (f.size() != grid.nodes())
        throw std::invalid_argument("adjoint_semigroup_apply: profile length does not match grid");
    const double a = std::exp(-mu * grid.dt);
    AgeProfile out = f;
    AgeProfile next(grid.nodes());
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t j = 0; j < grid.n_s; ++j) next[j] = a * out[j + 1];
        next[grid.n_s] = 0.0;
        out.swap(next);
    }
    return out;
}

CostatePath solve_costate(const StatePath& y, const ModelSpec& spec, const Grid& grid) {
    if (y.y.rows() != grid.n_t + 1 || y.y.cols() != grid.nodes())
        throw std::invalid_argument("solve_costate: state shape does not match grid");

    const double q = std::exp(-(spec.lambda + spec.mu) * grid.dt);
    const double half_dt = 0.5 * grid.dt;

    CostatePath path;
    path.pi = Array2D(grid.n_t + 1, grid.nodes());  // pi[n_t] = 0 (truncated transversality)

    auto slice = [&](std::size_t k) {
        AgeProfile xk(grid.nodes());
        for (std::size_t j = 0; j <= grid.n_s; ++j) xk[j] = y.y(k, j);
        return xk;
    };

    AgeProfile g_next = g0_grad(slice(grid.n_t), spec, grid);
    for (std::size_t k = grid.n_t; k-- > 0;) {
        AgeProfile g_here = g0_grad(slice(k), spec, grid);
        const double* pi_next = path.pi.row(k + 1);
        double* pi_here = path.pi.row(k);
        for (std::size_t j = 0; j < grid.n_s; ++j)
            pi_here[j] = q * pi_next[j + 1] + half_dt * (g_here[j] + q * g_next[j + 1]);
        pi_here[grid.n_s] = 0.0;  // costate lives in V: f(sbar) = 0
        g_next.swap(g_here);
    }
    return path;
}

double costate_discounted_norm(const CostatePath& pi, double q, double lambda, const Grid& grid) {
    if (!(q >= 1.0)) throw std::invalid_argument("costate_discounted_norm: q must be at least 1");
    if (pi.pi.rows() != grid.n_t + 1 || pi.pi.cols() != grid.nodes())
        throw std::invalid_argument("costate_discounted_norm: costate shape does not match grid");
    double sum = 0.0;
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        double sq = 0.0;
        const double* pk = pi.pi.row(k);
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            sq += trap_weight(grid, j) * pk[j] * pk[j];
        const double slice_norm = std::sqrt(sq * grid.ds);
        sum += std::exp(-lambda * grid.t(k)) * std::pow(slice_norm, q) * grid.dt;
    }
    return std::pow(sum, 1.0 / q);
}

}  // namespace vintage
