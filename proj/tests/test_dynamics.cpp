#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"
#include "vintage/dynamics.hpp"

using namespace vintage;
using vintage::testing::benchmark_spec;
using vintage::testing::random_control;
using vintage::testing::random_profile;

namespace {

Grid grid_for(ModelSpec& spec, std::size_t n_s, double T) {
    Grid grid = make_grid(spec, n_s, T);
    spec.alpha = constant_profile(grid, 1.0);
    return grid;
}

}  // namespace

TEST_CASE("semigroup_apply: identity at k = 0 and closed-form decay") {
    ModelSpec spec = benchmark_spec();
    Grid grid = grid_for(spec, 10, 2.0);
    std::mt19937 rng(1);
    const AgeProfile f = random_profile(rng, grid.nodes());

    CHECK(semigroup_apply(f, 0, spec.mu, grid) == f);

    // k*dt = 0.5 (k = 5): e^{-mu*k*dt} = e^{-0.05} above s = 0.5, zero below
    const AgeProfile ones = constant_profile(grid, 1.0);
    const AgeProfile shifted = semigroup_apply(ones, 5, spec.mu, grid);
    const double decay = std::exp(-0.05);
    for (std::size_t j = 0; j <= grid.n_s; ++j) {
        if (j >= 5)
            CHECK(shifted[j] == doctest::Approx(decay).epsilon(1e-13));
        else
            CHECK(shifted[j] == 0.0);
    }
}

TEST_CASE("semigroup law is bit-exact") {
    ModelSpec spec = benchmark_spec();
    Grid grid = grid_for(spec, 16, 2.0);
    std::mt19937 rng(2);
    const AgeProfile f = random_profile(rng, grid.nodes());

    const AgeProfile two_stage = semigroup_apply(semigroup_apply(f, 3, spec.mu, grid), 5,
                                                 spec.mu, grid);
    const AgeProfile one_stage = semigroup_apply(f, 8, spec.mu, grid);
    CHECK(two_stage == one_stage);
}

TEST_CASE("evolve_state: zero data gives the zero trajectory") {
    ModelSpec spec = benchmark_spec();
    Grid grid = grid_for(spec, 10, 2.0);
    const StatePath y = evolve_state(constant_profile(grid, 0.0), ControlPath::zero(grid), spec,
                                     grid);
    for (std::size_t k = 0; k <= grid.n_t; ++k)
        for (std::size_t j = 0; j <= grid.n_s; ++j) CHECK(y.y(k, j) == 0.0);
}

TEST_CASE("evolve_state: free decay of the initial profile is exact") {
    ModelSpec spec = benchmark_spec();
    Grid grid = grid_for(spec, 10, 2.0);
    const StatePath y = evolve_state(constant_profile(grid, 1.0), ControlPath::zero(grid), spec,
                                     grid);
    const double a = std::exp(-spec.mu * grid.dt);
    for (std::size_t k = 0; k <= grid.n_t; ++k) {
        double decay = 1.0;
        for (std::size_t i = 0; i < k; ++i) decay *= a;
        for (std::size_t j = 0; j <= grid.n_s; ++j) {
            if (j >= k)
                CHECK(y.y(k, j) == decay);  // bit-exact characteristics
            else
                CHECK(y.y(k, j) == 0.0);
        }
    }
}

TEST_CASE("evolve_state: boundary injection fills ages below tau - t0") {
    ModelSpec spec = benchmark_spec();
    Grid grid = grid_for(spec, 10, 2.0);
    ControlPath u = ControlPath::zero(grid);
    for (double& v : u.u0) v = 1.0;
    const StatePath y = evolve_state(constant_profile(grid, 0.0), u, spec, grid);

    const double a = std::exp(-spec.mu * grid.dt);
    for (std::size_t k = 1; k <= grid.n_t; ++k) {
        double decay = 1.0;
        for (std::size_t j = 0; j <= grid.n_s; ++j) {
            if (j <= k - 1)
                CHECK(y.y(k, j) == doctest::Approx(decay).epsilon(1e-14));
            else
                CHECK(y.y(k, j) == 0.0);
            decay *= a;
        }
    }
}

TEST_CASE("output_path quadrature") {
    ModelSpec spec = benchmark_spec();
    Grid grid = grid_for(spec, 10, 2.0);

    const StatePath zero = evolve_state(constant_profile(grid, 0.0), ControlPath::zero(grid),
                                        spec, grid);
    for (double q : output_path(zero, spec, grid)) CHECK(q == 0.0);

    StatePath constant;
    constant.y = Array2D(grid.n_t + 1, grid.nodes(), 3.0);
    for (double q : output_path(constant, spec, grid))
        CHECK(q == doctest::Approx(3.0 * spec.sbar).epsilon(1e-14));

    // alpha(s) = s against y = 1: integral s^2/2 at sbar = 1, trapezoid exact on linears
    ModelSpec ramp = spec;
    for (std::size_t j = 0; j <= grid.n_s; ++j) ramp.alpha[j] = grid.s(j);
    StatePath ones;
    ones.y = Array2D(grid.n_t + 1, grid.nodes(), 1.0);
    for (double q : output_path(ones, ramp, grid)) CHECK(q == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("cost_functional: zero data, analytic decay case, box feasibility") {
    ModelSpec spec = benchmark_spec();
    Grid grid = grid_for(spec, 50, 2.0);

    CHECK(cost_functional(constant_profile(grid, 0.0), ControlPath::zero(grid), spec, grid) ==
          0.0);

    // x = 1, u = 0: J = -int_0^sbar e^{-(lambda+mu) tau} (sbar - tau) dtau
    const double c = spec.lambda + spec.mu;
    const double L = spec.sbar;
    const double analytic =
        -(L * (1.0 - std::exp(-c * L)) / c - (1.0 - std::exp(-c * L) * (1.0 + c * L)) / (c * c));
    const double j_disc =
        cost_functional(constant_profile(grid, 1.0), ControlPath::zero(grid), spec, grid);
    CHECK(std::abs(j_disc - analytic) < 3.0 * grid.dt);

    ModelSpec boxed = spec;
    boxed.cost.box = ControlBox{0.0, 1.0, 0.0, 1.0};
    boxed.alpha = spec.alpha;
    ControlPath at_bounds = ControlPath::zero(grid);
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        at_bounds.u0[k] = 1.0;
        for (std::size_t j = 0; j <= grid.n_s; ++j) at_bounds.u1(k, j) = 1.0;
    }
    CHECK(std::isfinite(cost_functional(constant_profile(grid, 1.0), at_bounds, boxed, grid)));
    at_bounds.u0[0] = 1.5;
    CHECK(std::isinf(cost_functional(constant_profile(grid, 1.0), at_bounds, boxed, grid)));
}

TEST_CASE("evolve_state is affine in (x, u)") {
    ModelSpec spec = benchmark_spec();
    Grid grid = grid_for(spec, 12, 2.0);
    std::mt19937 rng(5);

    const AgeProfile xa = random_profile(rng, grid.nodes());
    const AgeProfile xb = random_profile(rng, grid.nodes());
    const ControlPath ua = random_control(rng, grid);
    const ControlPath ub = random_control(rng, grid);

    AgeProfile x_sum(grid.nodes());
    for (std::size_t j = 0; j <= grid.n_s; ++j) x_sum[j] = xa[j] + xb[j];
    ControlPath u_sum = ControlPath::zero(grid);
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        u_sum.u0[k] = ua.u0[k] + ub.u0[k];
        for (std::size_t j = 0; j <= grid.n_s; ++j) u_sum.u1(k, j) = ua.u1(k, j) + ub.u1(k, j);
    }

    const StatePath ya = evolve_state(xa, ua, spec, grid);
    const StatePath yb = evolve_state(xb, ub, spec, grid);
    const StatePath y0 = evolve_state(constant_profile(grid, 0.0), ControlPath::zero(grid), spec,
                                      grid);
    const StatePath ys = evolve_state(x_sum, u_sum, spec, grid);

    for (std::size_t k = 0; k <= grid.n_t; ++k)
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            CHECK(std::abs(ya.y(k, j) + yb.y(k, j) - y0.y(k, j) - ys.y(k, j)) < 1e-12);
}

TEST_CASE("evolve_state restart is bit-identical") {
    ModelSpec spec = benchmark_spec();
    Grid grid = grid_for(spec, 10, 3.0);
    std::mt19937 rng(6);
    const AgeProfile x = random_profile(rng, grid.nodes());
    const ControlPath u = random_control(rng, grid);

    const StatePath full = evolve_state(x, u, spec, grid);

    const std::size_t k1 = 7;
    ModelSpec tail_spec = spec;
    Grid tail_grid = grid;
    tail_grid.n_t = grid.n_t - k1;
    tail_grid.t0 = grid.t(k1);
    tail_grid.T = grid.T;
    tail_spec.alpha = spec.alpha;

    AgeProfile x_mid(grid.nodes());
    for (std::size_t j = 0; j <= grid.n_s; ++j) x_mid[j] = full.y(k1, j);
    ControlPath u_tail = ControlPath::zero(tail_grid);
    for (std::size_t k = 0; k < tail_grid.n_t; ++k) {
        u_tail.u0[k] = u.u0[k1 + k];
        for (std::size_t j = 0; j <= grid.n_s; ++j) u_tail.u1(k, j) = u.u1(k1 + k, j);
    }

    const StatePath restarted = evolve_state(x_mid, u_tail, tail_spec, tail_grid);
    for (std::size_t k = 0; k <= tail_grid.n_t; ++k)
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            CHECK(restarted.y(k, j) == full.y(k1 + k, j));
}

TEST_CASE("grid refinement converges to the characteristic solution at order >= 1") {
    // x = 0, u1(s) = s constant in time; closed form via the source integral
    auto max_error = [](std::size_t n_s) {
        ModelSpec spec = benchmark_spec();
        Grid grid = make_grid(spec, n_s, 2.0);
        spec.alpha = constant_profile(grid, 1.0);
        ControlPath u = ControlPath::zero(grid);
        for (std::size_t k = 0; k < grid.n_t; ++k)
            for (std::size_t j = 0; j <= grid.n_s; ++j) u.u1(k, j) = grid.s(j);
        const StatePath y = evolve_state(constant_profile(grid, 0.0), u, spec, grid);

        const double mu = spec.mu;
        double err = 0.0;
        for (std::size_t j = 0; j <= grid.n_s; ++j) {
            const double s = grid.s(j);
            const double exact = s * (1.0 - std::exp(-mu * s)) / mu -
                                 (1.0 - std::exp(-mu * s) * (1.0 + mu * s)) / (mu * mu);
            err = std::max(err, std::abs(y.y(grid.n_t, j) - exact));
        }
        return err;
    };

    const double e1 = max_error(20);
    const double e2 = max_error(40);
    const double e3 = max_error(80);
    CHECK(e1 / e2 >= 1.8);
    CHECK(e2 / e3 >= 1.8);
}

TEST_CASE("cost is convex along control segments") {
    ModelSpec spec = benchmark_spec();
    spec.revenue.variant = CappedQuadraticRevenue{1.0, 2.0};
    Grid grid = grid_for(spec, 10, 2.0);
    std::mt19937 rng(8);
    const AgeProfile x = random_profile(rng, grid.nodes(), 0.0, 1.0);

    for (int trial = 0; trial < 20; ++trial) {
        const ControlPath ua = random_control(rng, grid);
        const ControlPath ub = random_control(rng, grid);
        ControlPath mid = ControlPath::zero(grid);
        for (std::size_t k = 0; k < grid.n_t; ++k) {
            mid.u0[k] = 0.5 * (ua.u0[k] + ub.u0[k]);
            for (std::size_t j = 0; j <= grid.n_s; ++j)
                mid.u1(k, j) = 0.5 * (ua.u1(k, j) + ub.u1(k, j));
        }
        const double bow = cost_functional(x, mid, spec, grid) -
                           0.5 * (cost_functional(x, ua, spec, grid) +
                                  cost_functional(x, ub, spec, grid));
        CHECK(bow <= 1e-10);
    }
}
