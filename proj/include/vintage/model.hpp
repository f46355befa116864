#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vintage {

/// Profile sampled at the age nodes s_j = j*ds, j = 0..n_s.
using AgeProfile = std::vector<double>;

/// Dense row-major 2-D array of doubles.
class Array2D {
public:
    Array2D() = default;
    Array2D(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Revenue R(Q): concave, C^1.
// ---------------------------------------------------------------------------

/// R(Q) = rho * Q.
struct LinearRevenue {
    double rho = 1.0;
};

/// Quadratic on [0, qcap] with R'(0) = a and R'(qcap) = 0, continued C^1:
/// linearly (slope a) below 0 and flat above qcap.
struct CappedQuadraticRevenue {
    double a = 1.0;
    double qcap = 1.0;
};

/// R(Q) = b*Q - (a/2) Q^2. |R'| is unbounded; a user-supplied |Q| bound
/// (qmax) is required wherever a slope bound is needed.
struct QuadraticRevenue {
    double a = 1.0;
    double b = 0.0;
    std::optional<double> qmax;
};

struct RevenueSpec {
    std::variant<LinearRevenue, CappedQuadraticRevenue, QuadraticRevenue> variant =
        LinearRevenue{};

    double value(double q) const;
    double slope(double q) const;
    /// Bound on |R'| over the admissible output range; empty if none exists.
    std::optional<double> slope_bound() const;
};

// ---------------------------------------------------------------------------
// Control cost h0(u) = gamma0*u0^2/2 + int gamma1*u1(s)^2/2 ds, optionally
// +infinity outside a box.
// ---------------------------------------------------------------------------

struct ControlBox {
    double u0_min = 0.0;
    double u0_max = 0.0;
    double u1_min = 0.0;
    double u1_max = 0.0;
};

struct CostSpec {
    double gamma0 = 1.0;
    double gamma1 = 1.0;
    std::optional<ControlBox> box;  // empty: unconstrained quadratic

    bool constrained() const { return box.has_value(); }
};

// ---------------------------------------------------------------------------
// Model and grid
// ---------------------------------------------------------------------------

struct ModelSpec {
    double mu = 0.1;        // depreciation rate, > 0
    double lambda = 0.5;    // discount rate, > 2*omega
    double sbar = 1.0;      // maximal capital age, finite > 0
    double p = 2.0;         // coercivity exponent, >= 2
    double omega = 0.0;     // semigroup growth bound (0 for this model)
    AgeProfile alpha;       // output weights at the age nodes of the grid in use
    RevenueSpec revenue;
    CostSpec cost;
};

/// Aligned age/time grid with dt = ds exactly, so transport is an index shift.
struct Grid {
    std::size_t n_s = 0;  // age intervals (nodes are 0..n_s)
    std::size_t n_t = 0;  // time steps (slices are 0..n_t)
    double t0 = 0.0;
    double T = 0.0;       // t0 + n_t*dt
    double ds = 0.0;
    double dt = 0.0;      // == ds

    double s(std::size_t j) const { return static_cast<double>(j) * ds; }
    double t(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    std::size_t nodes() const { return n_s + 1; }
};

/// Trapezoidal weight of age node j (times ds gives the quadrature mass).
inline double trap_weight(const Grid& grid, std::size_t j) {
    return (j == 0 || j == grid.n_s) ? 0.5 : 1.0;
}

struct ControlPath {
    std::vector<double> u0;  // n_t values, left-endpoint constant per step
    Array2D u1;              // n_t x (n_s+1)

    static ControlPath zero(const Grid& grid) {
        ControlPath u;
        u.u0.assign(grid.n_t, 0.0);
        u.u1 = Array2D(grid.n_t, grid.nodes(), 0.0);
        return u;
    }
};

struct StatePath {
    Array2D y;  // (n_t+1) x (n_s+1); y(0,.) is the initial profile
};

struct CostatePath {
    Array2D pi;  // (n_t+1) x (n_s+1); pi(k, n_s) == 0 for all k
};

struct SweepReport {
    std::size_t iterations = 0;
    std::vector<double> residual_history;
    bool converged = false;
    double final_cost = 0.0;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Checks the standing assumptions; returns one message per violation.
std::vector<std::string> validate_model(const ModelSpec& spec);

/// Builds the aligned grid: ds = sbar/n_s, dt = ds, n_t = round((T-t0)/dt),
/// T adjusted to t0 + n_t*dt. Throws std::invalid_argument on bad input.
Grid make_grid(const ModelSpec& spec, std::size_t n_s, double T, double t0 = 0.0);

/// Smallest horizon T such that the a-priori costate tail bound
/// rho_max*||alpha||_inf*exp(-(lambda+mu)(T-t0))/(lambda+mu) <= tail_tol.
/// Floored at t0 + sbar (one age span). Throws std::invalid_argument when no
/// slope bound exists (quadratic revenue without a supplied Q bound).
double truncation_horizon(const ModelSpec& spec, double tail_tol, double t0 = 0.0);

/// Profile constant over the grid's age nodes.
AgeProfile constant_profile(const Grid& grid, double value);

}  // namespace vintage
