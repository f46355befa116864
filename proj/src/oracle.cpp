#include "vintage/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vintage/pmp.hpp"

namespace vintage {

namespace {

ControlPath axpy(const ControlPath& u, double scale, const ControlPath& v, const Grid& grid) {
    ControlPath out = u;
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        out.u0[k] += scale * v.u0[k];
        for (std::size_t j = 0; j <= grid.n_s; ++j) out.u1(k, j) += scale * v.u1(k, j);
    }
    return out;
}

/// Transpose pass of the forward scheme: P[k][j] = dJ_state/dy[k][j].
Array2D transpose_state_sensitivities(const StatePath& y, const ModelSpec& spec,
                                      const Grid& grid) {
    const double a = std::exp(-spec.mu * grid.dt);
    Array2D P(grid.n_t + 1, grid.nodes(), 0.0);

    AgeProfile slice(grid.nodes());
    for (std::size_t k = grid.n_t; k-- > 0;) {
        for (std::size_t j = 0; j <= grid.n_s; ++j) slice[j] = y.y(k, j);
        const AgeProfile g = g0_grad(slice, spec, grid);
        const double ck = std::exp(-spec.lambda * grid.t(k)) * grid.dt;
        const double* pn = P.row(k + 1);
        double* pk = P.row(k);
        for (std::size_t j = 0; j <= grid.n_s; ++j) {
            pk[j] = ck * trap_weight(grid, j) * grid.ds * g[j];
            if (j + 1 <= grid.n_s) pk[j] += a * pn[j + 1];
        }
    }
    return P;
}

/// Assembles slot gradients from the transpose pass; optionally adds the
/// control-cost terms.
ControlPath assemble_gradient(const Array2D& P, const ControlPath& u, const ModelSpec& spec,
                              const Grid& grid, bool with_control_cost) {
    const double a = std::exp(-spec.mu * grid.dt);
    const double half_dt = 0.5 * grid.dt;
    const double w0 = std::exp(-spec.lambda * grid.dt);
    const double w1 = std::exp(-0.5 * spec.lambda * grid.dt);

    ControlPath grad = ControlPath::zero(grid);
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        const double ck = std::exp(-spec.lambda * grid.t(k)) * grid.dt;
        const double* pn = P.row(k + 1);

        grad.u0[k] = pn[0];
        grad.u1(k, 0) = half_dt * a * pn[1];
        for (std::size_t j = 1; j < grid.n_s; ++j)
            grad.u1(k, j) = half_dt * (pn[j] + a * pn[j + 1]);
        grad.u1(k, grid.n_s) = 0.0;

        if (with_control_cost) {
            grad.u0[k] += w0 * ck * spec.cost.gamma0 * u.u0[k];
            for (std::size_t j = 0; j <= grid.n_s; ++j)
                grad.u1(k, j) +=
                    w1 * ck * trap_weight(grid, j) * grid.ds * spec.cost.gamma1 * u.u1(k, j);
        }
    }
    return grad;
}

struct Preconditioner {
    std::vector<double> d_u0;  // n_t
    Array2D d_u1;              // n_t x (n_s+1)
};

/// Diagonal of the control-cost Hessian; the distributed entry at the inert
/// oldest-age node keeps its quadrature weight so the scaled step stays
/// well defined there.
Preconditioner control_cost_diagonal(const ModelSpec& spec, const Grid& grid) {
    const double w0 = std::exp(-spec.lambda * grid.dt);
    const double w1 = std::exp(-0.5 * spec.lambda * grid.dt);
    Preconditioner pre;
    pre.d_u0.resize(grid.n_t);
    pre.d_u1 = Array2D(grid.n_t, grid.nodes());
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        const double ck = std::exp(-spec.lambda * grid.t(k)) * grid.dt;
        pre.d_u0[k] = w0 * ck * spec.cost.gamma0;
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            pre.d_u1(k, j) = w1 * ck * trap_weight(grid, j) * grid.ds * spec.cost.gamma1;
    }
    return pre;
}

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

void project_box(ControlPath& u, const CostSpec& cost, const Grid& grid) {
    if (!cost.box) return;
    const ControlBox& b = *cost.box;
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        u.u0[k] = clamp(u.u0[k], b.u0_min, b.u0_max);
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            u.u1(k, j) = clamp(u.u1(k, j), b.u1_min, b.u1_max);
    }
}

/// Finite-difference gradient of the cost, one coordinate at a time. The
/// central difference (J(u+eps*e) - J(u-eps*e)) / (2*eps) is evaluated from
/// exact cost differences: the state map is affine, so a coordinate bump
/// shifts the output path along a fixed characteristic cone, and the revenue
/// differences are summed over that cone only.
ControlPath fd_gradient(const AgeProfile& x, const ControlPath& u, const ModelSpec& spec,
                        const Grid& grid, double eps) {
    const double a = std::exp(-spec.mu * grid.dt);
    const double half_dt = 0.5 * grid.dt;
    const double w0 = std::exp(-spec.lambda * grid.dt);
    const double w1 = std::exp(-0.5 * spec.lambda * grid.dt);

    const StatePath y = evolve_state(x, u, spec, grid);
    const std::vector<double> q = output_path(y, spec, grid);
    std::vector<double> ck(grid.n_t);
    for (std::size_t k = 0; k < grid.n_t; ++k)
        ck[k] = std::exp(-spec.lambda * grid.t(k)) * grid.dt;

    // alpha weighted by the trapezoid mass of each node
    std::vector<double> am(grid.nodes());
    for (std::size_t j = 0; j <= grid.n_s; ++j)
        am[j] = trap_weight(grid, j) * spec.alpha[j] * grid.ds;

    ControlPath grad = ControlPath::zero(grid);

    // revenue difference over the cone: sum_m c_m * [R(Q-dq) - R(Q+dq)] / (2 eps)
    auto cone_sum = [&](std::size_t k_from, std::size_t node0, double amp0, std::size_t node1,
                        double amp1, bool two_nodes) {
        double num = 0.0;
        std::size_t n0 = node0, n1 = node1;
        double c0 = amp0, c1 = amp1;
        for (std::size_t m = k_from; m < grid.n_t; ++m) {
            double dq = 0.0;
            if (n0 <= grid.n_s) dq += c0 * am[n0];
            if (two_nodes && n1 <= grid.n_s) dq += c1 * am[n1];
            if (dq != 0.0)
                num += ck[m] * (spec.revenue.value(q[m] - dq) - spec.revenue.value(q[m] + dq));
            ++n0;
            ++n1;
            c0 *= a;
            c1 *= a;
            if (n0 > grid.n_s && (!two_nodes || n1 > grid.n_s)) break;
        }
        return num / (2.0 * eps);
    };

    for (std::size_t k = 0; k < grid.n_t; ++k) {
        // boundary slot: bump eps lands at node 0 of slice k+1
        grad.u0[k] = w0 * ck[k] * spec.cost.gamma0 * u.u0[k] +
                     cone_sum(k + 1, 0, eps, 0, 0.0, false);

        // distributed slots
        grad.u1(k, 0) = w1 * ck[k] * trap_weight(grid, 0) * grid.ds * spec.cost.gamma1 *
                            u.u1(k, 0) +
                        cone_sum(k + 1, 1, half_dt * a * eps, 0, 0.0, false);
        for (std::size_t j = 1; j < grid.n_s; ++j) {
            grad.u1(k, j) = w1 * ck[k] * trap_weight(grid, j) * grid.ds * spec.cost.gamma1 *
                                u.u1(k, j) +
                            cone_sum(k + 1, j, half_dt * eps, j + 1, half_dt * a * eps, true);
        }
        grad.u1(k, grid.n_s) = w1 * ck[k] * trap_weight(grid, grid.n_s) * grid.ds *
                               spec.cost.gamma1 * u.u1(k, grid.n_s);
    }
    return grad;
}

double scaled_projected_gradient_norm(const ControlPath& u, const ControlPath& grad,
                                      const Preconditioner& pre, const ModelSpec& spec,
                                      const Grid& grid) {
    // discounted L2 norm of u - clamp(u - D^{-1} grad)
    double sum = 0.0;
    const ControlBox* box = spec.cost.box ? &*spec.cost.box : nullptr;
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        double step0 = u.u0[k] - grad.u0[k] / pre.d_u0[k];
        if (box) step0 = clamp(step0, box->u0_min, box->u0_max);
        const double d0 = u.u0[k] - step0;
        double quad = 0.0;
        for (std::size_t j = 0; j <= grid.n_s; ++j) {
            double step1 = u.u1(k, j) - grad.u1(k, j) / pre.d_u1(k, j);
            if (box) step1 = clamp(step1, box->u1_min, box->u1_max);
            const double d = u.u1(k, j) - step1;
            quad += trap_weight(grid, j) * d * d;
        }
        sum += std::exp(-spec.lambda * grid.t(k)) * (d0 * d0 + quad * grid.ds) * grid.dt;
    }
    return std::sqrt(sum);
}

}  // namespace

double cost_gradient_fd(const AgeProfile& x, const ControlPath& u, const ModelSpec& spec,
                        const Grid& grid, const ControlPath& v, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("cost_gradient_fd: eps must be positive");
    const double j_plus = cost_functional(x, axpy(u, eps, v, grid), spec, grid);
    const double j_minus = cost_functional(x, axpy(u, -eps, v, grid), spec, grid);
    if (!std::isfinite(j_plus) || !std::isfinite(j_minus))
        throw std::domain_error("cost_gradient_fd: perturbed control is infeasible");
    return (j_plus - j_minus) / (2.0 * eps);
}

ControlPath cost_gradient_adjoint(const AgeProfile& x, const ControlPath& u,
                                  const ModelSpec& spec, const Grid& grid) {
    const StatePath y = evolve_state(x, u, spec, grid);
    const Array2D P = transpose_state_sensitivities(y, spec, grid);
    return assemble_gradient(P, u, spec, grid, true);
}

ControlPath state_cost_gradient_adjoint(const AgeProfile& x, const ControlPath& u,
                                        const ModelSpec& spec, const Grid& grid) {
    const StatePath y = evolve_state(x, u, spec, grid);
    const Array2D P = transpose_state_sensitivities(y, spec, grid);
    return assemble_gradient(P, u, spec, grid, false);
}

DirectResult direct_optimize(const AgeProfile& x, const ModelSpec& spec, const Grid& grid,
                             double tol, std::size_t max_iter, GradientMode mode) {
    if (!(tol > 0.0)) throw std::invalid_argument("direct_optimize: tol must be positive");

    const Preconditioner pre = control_cost_diagonal(spec, grid);
    constexpr double kArmijo = 1e-4;
    constexpr double kFdEps = 1e-4;

    DirectResult result;
    result.u = ControlPath::zero(grid);
    project_box(result.u, spec.cost, grid);
    result.cost = cost_functional(x, result.u, spec, grid);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        result.iterations = iter + 1;
        const ControlPath grad = (mode == GradientMode::kBlockFd)
                                     ? fd_gradient(x, result.u, spec, grid, kFdEps)
                                     : cost_gradient_adjoint(x, result.u, spec, grid);

        if (scaled_projected_gradient_norm(result.u, grad, pre, spec, grid) <= tol) {
            result.converged = true;
            result.iterations = iter;
            break;
        }

        // scaled descent direction
        ControlPath dir = ControlPath::zero(grid);
        double slope = 0.0;
        for (std::size_t k = 0; k < grid.n_t; ++k) {
            dir.u0[k] = -grad.u0[k] / pre.d_u0[k];
            slope += grad.u0[k] * dir.u0[k];
            for (std::size_t j = 0; j <= grid.n_s; ++j) {
                dir.u1(k, j) = -grad.u1(k, j) / pre.d_u1(k, j);
                slope += grad.u1(k, j) * dir.u1(k, j);
            }
        }

        double alpha = 1.0;
        bool accepted = false;
        for (int trial = 0; trial < 40; ++trial) {
            ControlPath candidate = axpy(result.u, alpha, dir, grid);
            project_box(candidate, spec.cost, grid);
            const double j_new = cost_functional(x, candidate, spec, grid);
            if (j_new <= result.cost + kArmijo * alpha * slope) {
                result.u = std::move(candidate);
                result.cost = j_new;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // line search stalled; report best iterate
    }
    return result;
}

double value_at(const AgeProfile& x, const ModelSpec& spec, const Grid& grid, double tol) {
    return direct_optimize(x, spec, grid, tol, 500).cost;
}

ValueGradientCheck value_gradient_check(const AgeProfile& x, const AgeProfile& h,
                                        const ModelSpec& spec, const Grid& grid, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("value_gradient_check: eps must be positive");

    AgeProfile x_plus = x, x_minus = x;
    for (std::size_t j = 0; j < x.size(); ++j) {
        x_plus[j] += eps * h[j];
        x_minus[j] -= eps * h[j];
    }

    ValueGradientCheck check;
    check.fd_directional = (value_at(x_plus, spec, grid) - value_at(x_minus, spec, grid)) /
                           (2.0 * eps);

    const SweepResult sweep =
        fb_sweep(x, ControlPath::zero(grid), spec, grid, 0.5, 1e-11, 400);
    AgeProfile pi0(grid.nodes());
    for (std::size_t j = 0; j <= grid.n_s; ++j) pi0[j] = sweep.pi.pi(0, j);
    check.costate_pairing = inner_age(pi0, h, grid);

    check.rel_err = std::abs(check.fd_directional - check.costate_pairing) /
                    std::max(1.0, std::abs(check.costate_pairing));
    return check;
}

}  // namespace vintage
