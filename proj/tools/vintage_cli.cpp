#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vintage/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Vintage-capital boundary-control solver"};

    std::string scenario_path;
    app.add_option("scenario", scenario_path, "Scenario config file (key = value text)")
        ->required();

    std::optional<std::string> out_dir;
    app.add_option("--out-dir", out_dir, "Directory for result files");
    bool with_oracle = false;
    app.add_flag("--with-oracle", with_oracle, "Also run the direct optimizer and compare");
    bool with_gradient_check = false;
    app.add_flag("--with-gradient-check", with_gradient_check,
                 "Also compare a value-function difference with the costate pairing");
    std::optional<double> tol;
    app.add_option("--tol", tol, "Override the sweep tolerance");
    std::optional<std::size_t> max_iter;
    app.add_option("--max-iter", max_iter, "Override the sweep iteration cap");

    CLI11_PARSE(app, argc, argv);

    vintage::ScenarioOverrides overrides;
    overrides.out_dir = out_dir;
    if (with_oracle) overrides.with_oracle = true;
    if (with_gradient_check) overrides.with_gradient_check = true;
    overrides.tol = tol;
    overrides.max_iter = max_iter;

    return vintage::run_scenario(scenario_path, overrides);
}
