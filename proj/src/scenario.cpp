#include "vintage/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vintage/feedback.hpp"

namespace vintage {

double discounted_lp_norm(const ControlPath& u, double p, double lambda, const Grid& grid) {
    if (!(p >= 1.0)) throw std::invalid_argument("discounted_lp_norm: p must be at least 1");
    double sum = 0.0;
    for (std::size_t k = 0; k < grid.n_t; ++k) {
        double quad = 0.0;
        for (std::size_t j = 0; j <= grid.n_s; ++j)
            quad += trap_weight(grid, j) * u.u1(k, j) * u.u1(k, j);
        const double slot = u.u0[k] * u.u0[k] + quad * grid.ds;
        sum += std::exp(-lambda * grid.t(k)) * std::pow(slot, 0.5 * p) * grid.dt;
    }
    return std::pow(sum, 1.0 / p);
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("scenario: bad number for '" + key + "': " + value);
    }
    if (pos != value.size())
        throw std::invalid_argument("scenario: bad number for '" + key + "': " + value);
    return v;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v < 0 || v != std::floor(v))
        throw std::invalid_argument("scenario: '" + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("scenario: '" + key + "' must be true or false");
}

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
    Scenario sc;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario: line " + std::to_string(line_no) +
                                        " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "mu") sc.mu = parse_double(key, value);
        else if (key == "lambda") sc.lambda = parse_double(key, value);
        else if (key == "sbar") sc.sbar = parse_double(key, value);
        else if (key == "p") sc.p = parse_double(key, value);
        else if (key == "alpha") sc.alpha = parse_double(key, value);
        else if (key == "revenue") sc.revenue = value;
        else if (key == "rho") sc.rho = parse_double(key, value);
        else if (key == "a") sc.a = parse_double(key, value);
        else if (key == "qcap") sc.qcap = parse_double(key, value);
        else if (key == "b") sc.b = parse_double(key, value);
        else if (key == "qmax") sc.qmax = parse_double(key, value);
        else if (key == "cost") sc.cost = value;
        else if (key == "gamma0") sc.gamma0 = parse_double(key, value);
        else if (key == "gamma1") sc.gamma1 = parse_double(key, value);
        else if (key == "u0_min") sc.u0_min = parse_double(key, value);
        else if (key == "u0_max") sc.u0_max = parse_double(key, value);
        else if (key == "u1_min") sc.u1_min = parse_double(key, value);
        else if (key == "u1_max") sc.u1_max = parse_double(key, value);
        else if (key == "n_s") sc.n_s = parse_size(key, value);
        else if (key == "t0") sc.t0 = parse_double(key, value);
        else if (key == "horizon") sc.horizon = parse_double(key, value);
        else if (key == "tail_tol") sc.tail_tol = parse_double(key, value);
        else if (key == "x0") sc.x0 = parse_double(key, value);
        else if (key == "theta") sc.theta = parse_double(key, value);
        else if (key == "tol") sc.tol = parse_double(key, value);
        else if (key == "max_iter") sc.max_iter = parse_size(key, value);
        else if (key == "oracle_tol") sc.oracle_tol = parse_double(key, value);
        else if (key == "with_oracle") sc.with_oracle = parse_bool(key, value);
        else if (key == "with_gradient_check") sc.with_gradient_check = parse_bool(key, value);
        else if (key == "out_dir") sc.out_dir = value;
        else throw std::invalid_argument("scenario: unknown key '" + key + "'");
    }
    if (sc.revenue != "linear" && sc.revenue != "capped_quadratic" && sc.revenue != "quadratic")
        throw std::invalid_argument("scenario: revenue must be linear, capped_quadratic or quadratic");
    if (sc.cost != "quadratic" && sc.cost != "box")
        throw std::invalid_argument("scenario: cost must be quadratic or box");
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read scenario file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_text(text.str());
}

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "mu = " << format_double(sc.mu) << "\n";
    out << "lambda = " << format_double(sc.lambda) << "\n";
    out << "sbar = " << format_double(sc.sbar) << "\n";
    out << "p = " << format_double(sc.p) << "\n";
    out << "alpha = " << format_double(sc.alpha) << "\n";
    out << "revenue = " << sc.revenue << "\n";
    out << "rho = " << format_double(sc.rho) << "\n";
    out << "a = " << format_double(sc.a) << "\n";
    out << "qcap = " << format_double(sc.qcap) << "\n";
    out << "b = " << format_double(sc.b) << "\n";
    if (sc.qmax) out << "qmax = " << format_double(*sc.qmax) << "\n";
    out << "cost = " << sc.cost << "\n";
    out << "gamma0 = " << format_double(sc.gamma0) << "\n";
    out << "gamma1 = " << format_double(sc.gamma1) << "\n";
    out << "u0_min = " << format_double(sc.u0_min) << "\n";
    out << "u0_max = " << format_double(sc.u0_max) << "\n";
    out << "u1_min = " << format_double(sc.u1_min) << "\n";
    out << "u1_max = " << format_double(sc.u1_max) << "\n";
    out << "n_s = " << sc.n_s << "\n";
    out << "t0 = " << format_double(sc.t0) << "\n";
    if (sc.horizon) out << "horizon = " << format_double(*sc.horizon) << "\n";
    out << "tail_tol = " << format_double(sc.tail_tol) << "\n";
    out << "x0 = " << format_double(sc.x0) << "\n";
    out << "theta = " << format_double(sc.theta) << "\n";
    out << "tol = " << format_double(sc.tol) << "\n";
    out << "max_iter = " << sc.max_iter << "\n";
    out << "oracle_tol = " << format_double(sc.oracle_tol) << "\n";
    out << "with_oracle = " << (sc.with_oracle ? "true" : "false") << "\n";
    out << "with_gradient_check = " << (sc.with_gradient_check ? "true" : "false") << "\n";
    out << "out_dir = " << sc.out_dir << "\n";
    return out.str();
}

BuiltScenario build_scenario(const Scenario& sc) {
    BuiltScenario built;
    built.spec.mu = sc.mu;
    built.spec.lambda = sc.lambda;
    built.spec.sbar = sc.sbar;
    built.spec.p = sc.p;
    built.spec.omega = 0.0;
    if (sc.revenue == "linear") {
        built.spec.revenue.variant = LinearRevenue{sc.rho};
    } else if (sc.revenue == "capped_quadratic") {
        built.spec.revenue.variant = CappedQuadraticRevenue{sc.a, sc.qcap};
    } else {
        built.spec.revenue.variant = QuadraticRevenue{sc.a, sc.b, sc.qmax};
    }
    built.spec.cost.gamma0 = sc.gamma0;
    built.spec.cost.gamma1 = sc.gamma1;
    if (sc.cost == "box")
        built.spec.cost.box = ControlBox{sc.u0_min, sc.u0_max, sc.u1_min, sc.u1_max};

    const double T = sc.horizon ? *sc.horizon
                                : truncation_horizon(built.spec, sc.tail_tol, sc.t0);
    built.grid = make_grid(built.spec, sc.n_s, T, sc.t0);
    built.spec.alpha = constant_profile(built.grid, sc.alpha);
    built.x = constant_profile(built.grid, sc.x0);
    return built;
}

namespace {

void write_time_age_csv(const std::string& path, const Array2D& field, const Grid& grid) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "time,age,value\n");
    for (std::size_t k = 0; k < field.rows(); ++k)
        for (std::size_t j = 0; j < field.cols(); ++j)
            std::fprintf(f, "%.17g,%.17g,%.17g\n", grid.t(k), grid.s(j), field(k, j));
    std::fclose(f);
}

void write_time_csv(const std::string& path, const std::vector<double>& values, const Grid& grid) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "time,value\n");
    for (std::size_t k = 0; k < values.size(); ++k)
        std::fprintf(f, "%.17g,%.17g\n", grid.t(k), values[k]);
    std::fclose(f);
}

}  // namespace

std::vector<std::string> emit_results(const ScenarioOutputs& outputs, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> manifest;
    auto path_of = [&out_dir](const char* name) { return (fs::path(out_dir) / name).string(); };

    const Grid& grid = outputs.grid;

    write_time_age_csv(path_of("state.csv"), outputs.sweep.y.y, grid);
    manifest.push_back(path_of("state.csv"));
    write_time_age_csv(path_of("costate.csv"), outputs.sweep.pi.pi, grid);
    manifest.push_back(path_of("costate.csv"));
    write_time_age_csv(path_of("control_u1.csv"), outputs.sweep.u.u1, grid);
    manifest.push_back(path_of("control_u1.csv"));
    write_time_csv(path_of("control_u0.csv"), outputs.sweep.u.u0, grid);
    manifest.push_back(path_of("control_u0.csv"));
    write_time_csv(path_of("output_q.csv"), output_path(outputs.sweep.y, outputs.spec, grid),
                   grid);
    manifest.push_back(path_of("output_q.csv"));

    std::ostringstream summary;
    auto put = [&summary](const char* key, double v) {
        summary << key << " = " << format_double(v) << "\n";
    };
    put("J", outputs.sweep.report.final_cost);
    summary << "iterations = " << outputs.sweep.report.iterations << "\n";
    summary << "converged = " << (outputs.sweep.report.converged ? "true" : "false") << "\n";
    if (!outputs.sweep.report.residual_history.empty())
        put("mp_residual", outputs.sweep.report.residual_history.back());
    put("certificate_state_residual", outputs.certificate.state_residual);
    put("certificate_costate_residual", outputs.certificate.costate_residual);
    put("certificate_mp_residual", outputs.certificate.mp_residual);
    put("certificate_transversality_norm", outputs.certificate.transversality_norm);
    summary << "certificate_is_extremal = "
            << (outputs.certificate.is_extremal ? "true" : "false") << "\n";
    if (outputs.oracle) {
        put("oracle_J", outputs.oracle->cost);
        summary << "oracle_iterations = " << outputs.oracle->iterations << "\n";
        summary << "oracle_converged = " << (outputs.oracle->converged ? "true" : "false") << "\n";
    }
    if (outputs.oracle_cost_gap_rel) put("oracle_cost_gap_rel", *outputs.oracle_cost_gap_rel);
    if (outputs.gradient_check) {
        put("gradient_check_fd", outputs.gradient_check->fd_directional);
        put("gradient_check_pairing", outputs.gradient_check->costate_pairing);
        put("gradient_check_rel_err", outputs.gradient_check->rel_err);
    }
    if (outputs.analytic_costate_max_rel_err)
        put("analytic_costate_max_rel_err", *outputs.analytic_costate_max_rel_err);
    write_text_file(path_of("summary.txt"), summary.str());
    manifest.push_back(path_of("summary.txt"));

    write_text_file(path_of("config_echo.cfg"), serialize_scenario(outputs.scenario));
    manifest.push_back(path_of("config_echo.cfg"));
    return manifest;
}

int run_scenario(const std::string& config_path, const ScenarioOverrides& overrides) {
    Scenario sc;
    try {
        sc = load_scenario(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (overrides.out_dir) sc.out_dir = *overrides.out_dir;
    if (overrides.with_oracle) sc.with_oracle = *overrides.with_oracle;
    if (overrides.with_gradient_check) sc.with_gradient_check = *overrides.with_gradient_check;
    if (overrides.tol) sc.tol = *overrides.tol;
    if (overrides.max_iter) sc.max_iter = *overrides.max_iter;

    BuiltScenario built;
    try {
        built = build_scenario(sc);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    const std::vector<std::string> violations = validate_model(built.spec);
    if (!violations.empty()) {
        for (const std::string& v : violations) std::cerr << "assumption violated: " << v << "\n";
        return 3;
    }

    ScenarioOutputs outputs;
    outputs.spec = built.spec;
    outputs.grid = built.grid;
    outputs.scenario = sc;
    outputs.sweep = fb_sweep(built.x, ControlPath::zero(built.grid), built.spec, built.grid,
                             sc.theta, sc.tol, sc.max_iter);
    outputs.certificate = extremality_certificate(outputs.sweep.u, outputs.sweep.y,
                                                  outputs.sweep.pi, built.spec, built.grid,
                                                  std::max(sc.tol, 1e-8) * 10.0);

    if (std::holds_alternative<LinearRevenue>(built.spec.revenue.variant)) {
        // stationary-window deviation from the closed-form costate
        const AgeProfile analytic = stationary_gradient_map(built.spec, built.grid);
        double scale = 0.0;
        for (double v : analytic) scale = std::max(scale, std::abs(v));
        if (scale > 0.0 && built.grid.n_t > built.grid.n_s) {
            double max_err = 0.0;
            for (std::size_t k = 0; k + built.grid.n_s <= built.grid.n_t; ++k)
                for (std::size_t j = 0; j <= built.grid.n_s; ++j)
                    max_err = std::max(max_err,
                                       std::abs(outputs.sweep.pi.pi(k, j) - analytic[j]));
            outputs.analytic_costate_max_rel_err = max_err / scale;
        }
    }

    if (sc.with_oracle) {
        outputs.oracle = direct_optimize(built.x, built.spec, built.grid, sc.oracle_tol, 500);
        const double denom = std::max(1.0, std::abs(outputs.oracle->cost));
        outputs.oracle_cost_gap_rel =
            std::abs(outputs.sweep.report.final_cost - outputs.oracle->cost) / denom;
    }
    if (sc.with_gradient_check) {
        const AgeProfile direction = constant_profile(built.grid, 1.0);
        outputs.gradient_check =
            value_gradient_check(built.x, direction, built.spec, built.grid, 1e-3);
    }

    try {
        emit_results(outputs, sc.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return 2;
    }

    if (!outputs.sweep.report.converged) {
        std::cerr << "solver did not converge within " << sc.max_iter << " iterations\n";
        return 4;
    }
    return 0;
}

}  // namespace vintage
