#include "vintage/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vintage {

namespace {

void require_grid_length(const AgeProfile& f, const Grid& grid, const char* what) {
    if (f.size() != grid.nodes())
        throw std::invalid_argument(std::string(what) + ": profile length does not match grid");
}

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

double inner_age(const AgeProfile& f, const AgeProfile& g, const Grid& grid) {
    require_grid_length(f, grid, "inner_age");
    require_grid_length(g, grid, "inner_age");
    double sum = 0.0;
    for (std::size_t j = 0; j <= grid.n_s; ++j) sum += trap_weight(grid, j) * f[j] * g[j];
    return sum * grid.ds;
}

double l2_age_norm(const AgeProfile& f, const Grid& grid) {
    return std::sqrt(inner_age(f, f, grid));
}

double h0_value(double u0, const AgeProfile& u1, const CostSpec& cost, const Grid& grid) {
    require_grid_length(u1, grid, "h0_value");
    if (cost.box) {
        const ControlBox& b = *cost.box;
        if (u0 < b.u0_min || u0 > b.u0_max) return std::numeric_limits<double>::infinity();
        for (double v : u1)
            if (v < b.u1_min || v > b.u1_max) return std::numeric_limits<double>::infinity();
    }
    double quad = 0.0;
    for (std::size_t j = 0; j <= grid.n_s; ++j)
        quad += trap_weight(grid, j) * u1[j] * u1[j];
    return 0.5 * cost.gamma0 * u0 * u0 + 0.5 * cost.gamma1 * quad * grid.ds;
}

std::pair<double, AgeProfile> h0_conj_grad(const DualControl& z, const CostSpec& cost) {
    double u0 = z.z0 / cost.gamma0;
    AgeProfile u1(z.z1.size());
    for (std::size_t j = 0; j < z.z1.size(); ++j) u1[j] = z.z1[j] / cost.gamma1;
    if (cost.box) {
        const ControlBox& b = *cost.box;
        u0 = clamp(u0, b.u0_min, b.u0_max);
        for (double& v : u1) v = clamp(v, b.u1_min, b.u1_max);
    }
    return {u0, std::move(u1)};
}

double h0_conj_value(const DualControl& z, const CostSpec& cost, const Grid& grid) {
    require_grid_length(z.z1, grid, "h0_conj_value");
    auto conj_1d = [](double zv, double gamma, double lo, double hi) {
        const double u = clamp(zv / gamma, lo, hi);
        return zv * u - 0.5 * gamma * u * u;
    };
    const double lo0 = cost.box ? cost.box->u0_min : -std::numeric_limits<double>::infinity();
    const double hi0 = cost.box ? cost.box->u0_max : std::numeric_limits<double>::infinity();
    const double lo1 = cost.box ? cost.box->u1_min : -std::numeric_limits<double>::infinity();
    const double hi1 = cost.box ? cost.box->u1_max : std::numeric_limits<double>::infinity();

    double value = conj_1d(z.z0, cost.gamma0, lo0, hi0);
    double integral = 0.0;
    for (std::size_t j = 0; j <= grid.n_s; ++j)
        integral += trap_weight(grid, j) * conj_1d(z.z1[j], cost.gamma1, lo1, hi1);
    return value + integral * grid.ds;
}

double g0_value(const AgeProfile& x, const ModelSpec& spec, const Grid& grid) {
    require_grid_length(x, grid, "g0_value");
    const double q = inner_age(spec.alpha, x, grid);
    return -spec.revenue.value(q);
}

AgeProfile g0_grad(const AgeProfile& x, const ModelSpec& spec, const Grid& grid) {
    require_grid_length(x, grid, "g0_grad");
    const double q = inner_age(spec.alpha, x, grid);
    const double slope = spec.revenue.slope(q);
    AgeProfile g(grid.nodes());
    for (std::size_t j = 0; j <= grid.n_s; ++j) g[j] = -slope * spec.alpha[j];
    return g;
}

DualControl b_star(const AgeProfile& pi_slice) {
    if (pi_slice.empty()) throw std::invalid_argument("b_star: empty slice");
    return DualControl{pi_slice.front(), pi_slice};
}

}  // namespace vintage
