#include "vintage/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vintage {

double RevenueSpec::value(double q) const {
    return std::visit(
        [q](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, LinearRevenue>) {
                return r.rho * q;
            } else if constexpr (std::is_same_v<T, CappedQuadraticRevenue>) {
                // quadratic on [0, qcap], slope-matched C^1 continuation outside
                if (q < 0.0) return r.a * q;
                if (q > r.qcap) return 0.5 * r.a * r.qcap;
                return r.a * q - 0.5 * r.a * q * q / r.qcap;
            } else {
                return r.b * q - 0.5 * r.a * q * q;
            }
        },
        variant);
}

double RevenueSpec::slope(double q) const {
    return std::visit(
        [q](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, LinearRevenue>) {
                return r.rho;
            } else if constexpr (std::is_same_v<T, CappedQuadraticRevenue>) {
                if (q < 0.0) return r.a;
                if (q > r.qcap) return 0.0;
                return r.a * (1.0 - q / r.qcap);
            } else {
                return r.b - r.a * q;
            }
        },
        variant);
}

std::optional<double> RevenueSpec::slope_bound() const {
    return std::visit(
        [](const auto& r) -> std::optional<double> {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, LinearRevenue>) {
                return std::abs(r.rho);
            } else if constexpr (std::is_same_v<T, CappedQuadraticRevenue>) {
                return r.a;
            } else {
                if (!r.qmax) return std::nullopt;
                return std::abs(r.b) + r.a * std::abs(*r.qmax);
            }
        },
        variant);
}

std::vector<std::string> validate_model(const ModelSpec& spec) {
    std::vector<std::string> violations;
    auto fail = [&violations](const std::string& msg) { violations.push_back(msg); };

    if (!(spec.mu > 0.0)) fail("mu must be positive");
    if (!(spec.sbar > 0.0) || !std::isfinite(spec.sbar)) fail("sbar must be finite and positive");
    if (!(spec.p >= 2.0)) fail("p must be at least 2");
    if (!(spec.omega >= 0.0)) fail("omega must be nonnegative");
    if (!(spec.lambda > 2.0 * spec.omega)) fail("lambda must exceed 2*omega");

    for (double a : spec.alpha) {
        if (!std::isfinite(a)) {
            fail("alpha must be finite on [0, sbar]");
            break;
        }
    }

    std::visit(
        [&fail](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, LinearRevenue>) {
                if (!(r.rho >= 0.0)) fail("linear revenue slope must be nonnegative");
            } else if constexpr (std::is_same_v<T, CappedQuadraticRevenue>) {
                if (!(r.a > 0.0)) fail("capped-quadratic revenue curvature must be positive");
                if (!(r.qcap > 0.0)) fail("capped-quadratic cap point must be positive");
            } else {
                if (!(r.a > 0.0)) fail("quadratic revenue curvature must be positive");
            }
        },
        spec.revenue.variant);

    if (!(spec.cost.gamma0 > 0.0)) fail("gamma0 must be positive");
    if (!(spec.cost.gamma1 > 0.0)) fail("gamma1 must be positive");
    if (spec.cost.box) {
        const ControlBox& b = *spec.cost.box;
        if (!(b.u0_min <= b.u0_max)) fail("control box requires u0_min <= u0_max");
        if (!(b.u1_min <= b.u1_max)) fail("control box requires u1_min <= u1_max");
        if (b.u0_min > 0.0 || b.u0_max < 0.0 || b.u1_min > 0.0 || b.u1_max < 0.0)
            fail("h0*(0)=0 requires 0 in control box");
    }

    return violations;
}

Grid make_grid(const ModelSpec& spec, std::size_t n_s, double T, double t0) {
    if (n_s < 2) throw std::invalid_argument("make_grid: n_s must be at least 2");
    if (!(T > t0)) throw std::invalid_argument("make_grid: horizon must exceed t0");

    Grid grid;
    grid.n_s = n_s;
    grid.t0 = t0;
    grid.ds = spec.sbar / static_cast<double>(n_s);
    grid.dt = grid.ds;  // unit-CFL alignment, bit-identical by construction
    const double steps = (T - t0) / grid.dt;
    grid.n_t = static_cast<std::size_t>(std::max<long long>(1, std::llround(steps)));
    grid.T = t0 + static_cast<double>(grid.n_t) * grid.dt;
    return grid;
}

double truncation_horizon(const ModelSpec& spec, double tail_tol, double t0) {
    if (!(tail_tol > 0.0)) throw std::invalid_argument("truncation_horizon: tail_tol must be positive");

    const std::optional<double> rho_max = spec.revenue.slope_bound();
    if (!rho_max)
        throw std::invalid_argument("truncation_horizon: no a-priori tail bound for this revenue");

    double alpha_max = 0.0;
    for (double a : spec.alpha) alpha_max = std::max(alpha_max, std::abs(a));
    if (spec.alpha.empty()) alpha_max = 1.0;

    const double c = spec.lambda + spec.mu;
    const double bound0 = *rho_max * alpha_max / c;  // tail bound at T = t0
    double horizon = 0.0;
    if (bound0 > tail_tol) horizon = std::log(bound0 / tail_tol) / c;
    // Floor of one age span: every characteristic clears the grid at least once.
    horizon = std::max(horizon, spec.sbar);
    return t0 + horizon;
}

AgeProfile constant_profile(const Grid& grid, double value) {
    return AgeProfile(grid.nodes(), value);
}

}  // namespace vintage
