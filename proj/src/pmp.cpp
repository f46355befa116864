#include "vintage/pmp.hpp"

#include <cmath>

namespace vintage {

namespace {

AgeProfile costate_slice(const CostatePath& pi, std::size_t k, const Grid& grid) {
    AgeProfile slice(grid.nodes());
    for (std::size_t j = 0; j <= grid.n_s; ++j) slice[j] = pi.pi(k, j);
    return slice;
}

std::pair<double, AgeProfile> mp_map(const CostatePath& pi, std::size_t k, const CostSpec& cost,
                                     const Grid& grid) {
    AgeProfile slice = costate_slice(pi, k, grid);
    DualControl z = b_star(slice);
    z.z0 = -z.z0;
    for (double& v : z.z1) v = -v;
    return h0_conj_grad(z, cost);
}

}  // namespace

double mp_residual(const ControlPath& u, const CostatePath& pi, const CostSpec& cost,
                   double lambda, const Grid& grid) {
    double sum = 0.0;
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        auto [v0, v1] = mp_map(pi, k, cost, grid);
        const double d0 = u.u0[k] - v0;
        double quad = 0.0;
        for (std::size_t j = 0; j <= grid.n_s; ++j) {
            const double d = u.u1(k, j) - v1[j];
            quad += trap_weight(grid, j) * d * d;
        }
        sum += std::exp(-lambda * grid.t(k)) * (d0 * d0 + quad * grid.ds) * grid.dt;
    }
    return std::sqrt(sum);
}

SweepResult fb_sweep(const AgeProfile& x, const ControlPath& u_init, const ModelSpec& spec,
                     const Grid& grid, double theta, double tol, std::size_t max_iter) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("fb_sweep: theta must lie in (0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("fb_sweep: tol must be positive");

    SweepResult result;
    result.u = u_init;
    result.report.converged = false;

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        result.y = evolve_state(x, result.u, spec, grid);
        result.pi = solve_costate(result.y, spec, grid);

        ControlPath u_next = result.u;
        for (std::size_t k = 0; k < grid.n_t; ++k) {
            auto [v0, v1] = mp_map(result.pi, k, spec.cost, grid);
            u_next.u0[k] = (1.0 - theta) * result.u.u0[k] + theta * v0;
            for (std::size_t j = 0; j <= grid.n_s; ++j)
                u_next.u1(k, j) = (1.0 - theta) * result.u.u1(k, j) + theta * v1[j];
        }

        const double residual = mp_residual(u_next, result.pi, spec.cost, spec.lambda, grid);
        result.u = std::move(u_next);
        result.report.residual_history.push_back(residual);
        result.report.iterations = iter + 1;
        if (residual <= tol) {
            result.report.converged = true;
            break;
        }
    }

    // Refresh the trajectory and costate so the returned triple is consistent
    // with the final control.
    result.y = evolve_state(x, result.u, spec, grid);
    result.pi = solve_costate(result.y, spec, grid);
    result.report.final_cost = cost_of_trajectory(result.y, result.u, spec, grid);
    return result;
}

ExtremalityCertificate extremality_certificate(const ControlPath& u, const StatePath& y,
                                               const CostatePath& pi, const ModelSpec& spec,
                                               const Grid& grid, double tol) {
    ExtremalityCertificate cert;

    AgeProfile x(grid.nodes());
    for (std::size_t j = 0; j <= grid.n_s; ++j) x[j] = y.y(0, j);

    const StatePath y_check = evolve_state(x, u, spec, grid);
    for (std::size_t k = 0; k <= grid.n_t; ++k)
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            cert.state_residual = std::max(cert.state_residual,
                                           std::abs(y.y(k, j) - y_check.y(k, j)));

    const CostatePath pi_check = solve_costate(y, spec, grid);
    for (std::size_t k = 0; k <= grid.n_t; ++k)
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            cert.costate_residual = std::max(cert.costate_residual,
                                             std::abs(pi.pi(k, j) - pi_check.pi(k, j)));

    cert.mp_residual = mp_residual(u, pi, spec.cost, spec.lambda, grid);

    AgeProfile tail = costate_slice(pi, grid.n_t, grid);
    cert.transversality_norm = l2_age_norm(tail, grid);

    cert.is_extremal = cert.state_residual <= tol && cert.costate_residual <= tol &&
                       cert.mp_residual <= tol && cert.transversality_norm <= tol;
    return cert;
}

}  // namespace vintage
