#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "reqcon/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Optimal requirement-based contracts for a one-shot, shallow "
                 "principal-agent model of systems engineering"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_path;

    auto* solve = app.add_subcommand("solve", "Compute optimal contracts for a scenario");
    solve->add_option("--config", config_path, "Scenario config (JSON)")->required();
    solve->add_option("--out", output_path, "Result document path (JSON)")->required();

    std::size_t agent_index = 0;
    double grid_min = 0.0;
    double grid_max = 2.0;
    int grid_points = 201;
    auto* sweep = app.add_subcommand(
        "sweep", "Sweep one agent's passed-down requirement around the optimum");
    sweep->add_option("--config", config_path, "Scenario config (JSON)")->required();
    sweep->add_option("--agent", agent_index, "Agent index to sweep (default 0)");
    sweep->add_option("--min", grid_min, "Lowest psi3 value (default 0)");
    sweep->add_option("--max", grid_max, "Highest psi3 value (default 2)");
    sweep->add_option("--points", grid_points, "Number of grid points (default 201)");
    sweep->add_option("--out", output_path, "Sweep CSV path")->required();

    std::string csv_path;
    double q0 = 0.0;
    double i0 = 0.0;
    double q_required = 0.0;
    double horizon = 0.0;
    double cost_rate = 0.0;
    auto* calibrate = app.add_subcommand(
        "calibrate", "Fit the investment-to-quality model from historical records");
    calibrate->add_option("--csv", csv_path, "CSV with header investment,quality")
        ->required();
    calibrate->add_option("--q0", q0, "State-of-the-art quality")->required();
    calibrate->add_option("--i0", i0, "State-of-the-art cumulative investment")
        ->required();
    calibrate->add_option("--qr", q_required, "Required quality")->required();
    calibrate->add_option("--horizon", horizon, "Hiring horizon in years")->required();
    calibrate->add_option("--cost-rate", cost_rate, "Cost per year (million USD)")
        ->required();
    calibrate->add_option("--out", output_path, "Calibration document path (JSON)")
        ->required();

    std::uint64_t n_samples = 1000000;
    std::uint64_t seed = 0;
    auto* verify = app.add_subcommand(
        "verify", "Cross-check analytic expectations against Monte Carlo");
    verify->add_option("--config", config_path, "Scenario config (JSON)")->required();
    verify->add_option("--n", n_samples, "Samples per check (default 1e6)");
    verify->add_option("--seed", seed, "Stream seed (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : reqcon::cli::kExitInputError;
    }

    if (solve->parsed()) {
        return reqcon::cli::cmd_solve(config_path, output_path, std::cerr);
    }
    if (sweep->parsed()) {
        return reqcon::cli::cmd_sweep(config_path, agent_index, grid_min, grid_max,
                                      grid_points, output_path, std::cerr);
    }
    if (calibrate->parsed()) {
        return reqcon::cli::cmd_calibrate(csv_path, q0, i0, q_required, horizon,
                                          cost_rate, output_path, std::cerr);
    }
    if (verify->parsed()) {
        return reqcon::cli::cmd_verify(config_path, n_samples, seed, std::cout,
                                       std::cerr);
    }
    return reqcon::cli::kExitInputError;
}
