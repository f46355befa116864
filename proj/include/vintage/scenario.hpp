#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vintage/model.hpp"
#include "vintage/oracle.hpp"
#include "vintage/pmp.hpp"

namespace vintage {

/// Discounted L^p norm of a control path:
/// ( sum_k e^{-lambda*t_k} (|u0[k]|^2 + ||u1[k]||_{L2}^2)^{p/2} dt )^{1/p}.
double discounted_lp_norm(const ControlPath& u, double p, double lambda, const Grid& grid);

/// Scenario file contents: flat "key = value" text, '#' comments.
/// Schema documented in the README. Profiles are constant over age.
struct Scenario {
    // model
    double mu = 0.1;
    double lambda = 0.5;
    double sbar = 1.0;
    double p = 2.0;
    double alpha = 1.0;
    std::string revenue = "linear";  // linear | capped_quadratic | quadratic
    double rho = 1.0;                // linear
    double a = 1.0;                  // capped_quadratic / quadratic curvature
    double qcap = 1.0;               // capped_quadratic
    double b = 0.0;                  // quadratic linear term
    std::optional<double> qmax;      // quadratic slope bound
    std::string cost = "quadratic";  // quadratic | box
    double gamma0 = 1.0;
    double gamma1 = 1.0;
    double u0_min = 0.0, u0_max = 0.0, u1_min = 0.0, u1_max = 0.0;  // box
    // grid / solver
    std::size_t n_s = 100;
    double t0 = 0.0;
    std::optional<double> horizon;  // explicit T; otherwise tail_tol decides
    double tail_tol = 1e-8;
    double x0 = 1.0;  // constant initial profile
    double theta = 0.5;
    double tol = 1e-8;
    std::size_t max_iter = 200;
    double oracle_tol = 1e-3;
    bool with_oracle = false;
    bool with_gradient_check = false;
    std::string out_dir = "out";

    bool operator==(const Scenario&) const = default;
};

/// Parses scenario text; throws std::invalid_argument with a message on
/// unknown keys or malformed lines.
Scenario parse_scenario_text(const std::string& text);

/// Reads and parses a scenario file; throws std::runtime_error if unreadable.
Scenario load_scenario(const std::string& path);

/// Canonical text form; parsing it reproduces the scenario exactly.
std::string serialize_scenario(const Scenario& sc);

/// Builds the model, grid and initial profile a scenario describes.
struct BuiltScenario {
    ModelSpec spec;
    Grid grid;
    AgeProfile x;
};
BuiltScenario build_scenario(const Scenario& sc);

struct ScenarioOutputs {
    ModelSpec spec;
    Grid grid;
    SweepResult sweep;
    ExtremalityCertificate certificate;
    std::optional<DirectResult> oracle;
    std::optional<double> oracle_cost_gap_rel;
    std::optional<ValueGradientCheck> gradient_check;
    std::optional<double> analytic_costate_max_rel_err;  // linear revenue only
    Scenario scenario;
};

/// Writes trajectory CSVs and a key = value summary to out_dir; returns the
/// list of written paths. Values are formatted with 17 significant digits.
std::vector<std::string> emit_results(const ScenarioOutputs& outputs, const std::string& out_dir);

/// Command-line overrides applied on top of the scenario file.
struct ScenarioOverrides {
    std::optional<std::string> out_dir;
    std::optional<bool> with_oracle;
    std::optional<bool> with_gradient_check;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
};

/// Exit codes: 0 success, 2 config invalid/unreadable, 3 model assumptions
/// violated, 4 solver did not converge.
int run_scenario(const std::string& config_path, const ScenarioOverrides& overrides = {});

}  // namespace vintage
