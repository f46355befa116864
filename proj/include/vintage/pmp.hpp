#pragma once

#include "vintage/adjoint.hpp"
#include "vintage/convex.hpp"
#include "vintage/dynamics.hpp"
#include "vintage/model.hpp"

namespace vintage {

/// Discounted L2 distance between u and the maximum-principle map of pi,
/// k -> (h0*)'(-B* pi[k]).
double mp_residual(const ControlPath& u, const CostatePath& pi, const CostSpec& cost,
                   double lambda, const Grid& grid);

struct SweepResult {
    ControlPath u;
    StatePath y;
    CostatePath pi;
    SweepReport report;
};

/// Relaxed forward-backward sweep for the extremal system. Each iteration
/// evolves the state, solves the costate, and moves the control toward the
/// maximum-principle map with relaxation theta. Non-convergence is reported
/// through the SweepReport, not an exception.
SweepResult fb_sweep(const AgeProfile& x, const ControlPath& u_init, const ModelSpec& spec,
                     const Grid& grid, double theta = 0.5, double tol = 1e-8,
                     std::size_t max_iter = 100);

struct ExtremalityCertificate {
    double state_residual = 0.0;
    double costate_residual = 0.0;
    double mp_residual = 0.0;
    double transversality_norm = 0.0;
    bool is_extremal = false;
};

/// Residuals of the extremal-system equations for a candidate triple
/// (u, y, pi); the initial profile is read from y[0].
ExtremalityCertificate extremality_certificate(const ControlPath& u, const StatePath& y,
                                               const CostatePath& pi, const ModelSpec& spec,
                                               const Grid& grid, double tol);

}  // namespace vintage
