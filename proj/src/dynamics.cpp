#include "vintage/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vintage {

AgeProfile semigroup_apply(const AgeProfile& f, std::size_t steps, double mu, const Grid& grid) {
    if (f.size() != grid.nodes())
        throw std::invalid_argument("semigroup_apply: profile length does not match grid");
    const double a = std::exp(-mu * grid.dt);
    AgeProfile out = f;
    AgeProfile next(grid.nodes());
    for (std::size_t k = 0; k < steps; ++k) {
        next[0] = 0.0;
        for (std::size_t j = grid.n_s; j >= 1; --j) next[j] = a * out[j - 1];
        out.swap(next);
    }
    return out;
}

namespace detail {

void state_step(const double* yk, double* ynext, double u0k, const double* u1k, double decay,
                double half_dt, std::size_t n_s) {
    ynext[0] = u0k;
    for (std::size_t j = 1; j < n_s; ++j)
        ynext[j] = decay * yk[j - 1] + half_dt * (decay * u1k[j - 1] + u1k[j]);
    ynext[n_s] = decay * yk[n_s - 1] + half_dt * decay * u1k[n_s - 1];
}

}  // namespace detail

StatePath evolve_state(const AgeProfile& x, const ControlPath& u, const ModelSpec& spec,
                       const Grid& grid) {
    if (x.size() != grid.nodes())
        throw std::invalid_argument("evolve_state: initial profile length does not match grid");
    if (u.u0.size() != grid.n_t || u.u1.rows() != grid.n_t || u.u1.cols() != grid.nodes())
        throw std::invalid_argument("evolve_state: control shape does not match grid");

    const double a = std::exp(-spec.mu * grid.dt);
    const double half_dt = 0.5 * grid.dt;

    StatePath path;
    path.y = Array2D(grid.n_t + 1, grid.nodes());
    for (std::size_t j = 0; j <= grid.n_s; ++j) path.y(0, j) = x[j];

    for (std::size_t k = 0; k < grid.n_t; ++k)
        detail::state_step(path.y.row(k), path.y.row(k + 1), u.u0[k], u.u1.row(k), a, half_dt,
                           grid.n_s);
    return path;
}

std::vector<double> output_path(const StatePath& y, const ModelSpec& spec, const Grid& grid) {
    if (y.y.rows() != grid.n_t + 1 || y.y.cols() != grid.nodes())
        throw std::invalid_argument("output_path: state shape does not match grid");
    if (spec.alpha.size() != grid.nodes())
        throw std::invalid_argument("output_path: alpha length does not match grid");
    std::vector<double> q(grid.n_t + 1);
    for (std::size_t k = 0; k <= grid.n_t; ++k) {
        double sum = 0.0;
        const double* yk = y.y.row(k);
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            sum += trap_weight(grid, j) * spec.alpha[j] * yk[j];
        q[k] = sum * grid.ds;
    }
    return q;
}

double discounted_state_cost(const StatePath& y, const ModelSpec& spec, const Grid& grid) {
    const std::vector<double> q = output_path(y, spec, grid);
    double total = 0.0;
    for (std::size_t k = 0; k < grid.n_t; ++k)
        total += std::exp(-spec.lambda * grid.t(k)) * (-spec.revenue.value(q[k])) * grid.dt;
    return total;
}

double discounted_control_cost(const ControlPath& u, const ModelSpec& spec, const Grid& grid) {
    if (u.u0.size() != grid.n_t || u.u1.rows() != grid.n_t || u.u1.cols() != grid.nodes())
        throw std::invalid_argument("discounted_control_cost: control shape does not match grid");
    const CostSpec& cost = spec.cost;
    const double w0 = std::exp(-spec.lambda * grid.dt);        // boundary: end of step
    const double w1 = std::exp(-0.5 * spec.lambda * grid.dt);  // distributed: midpoint

    double total = 0.0;
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        const double* u1k = u.u1.row(k);
        if (cost.box) {
            const ControlBox& b = *cost.box;
            if (u.u0[k] < b.u0_min || u.u0[k] > b.u0_max)
                return std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j <= grid.n_s; ++j)
                if (u1k[j] < b.u1_min || u1k[j] > b.u1_max)
                    return std::numeric_limits<double>::infinity();
        }
        double quad = 0.0;
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            quad += trap_weight(grid, j) * u1k[j] * u1k[j];
        const double c0 = 0.5 * cost.gamma0 * u.u0[k] * u.u0[k];
        const double c1 = 0.5 * cost.gamma1 * quad * grid.ds;
        total += std::exp(-spec.lambda * grid.t(k)) * (w0 * c0 + w1 * c1) * grid.dt;
    }
    return total;
}

double cost_of_trajectory(const StatePath& y, const ControlPath& u, const ModelSpec& spec,
                          const Grid& grid) {
    const double h = discounted_control_cost(u, spec, grid);
    if (!std::isfinite(h)) return h;
    return discounted_state_cost(y, spec, grid) + h;
}

double cost_functional(const AgeProfile& x, const ControlPath& u, const ModelSpec& spec,
                       const Grid& grid) {
    const double h = discounted_control_cost(u, spec, grid);
    if (!std::isfinite(h)) return h;
    const StatePath y = evolve_state(x, u, spec, grid);
    return discounted_state_cost(y, spec, grid) + h;
}

}  // namespace vintage
