#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "reqcon/calibration.hpp"
#include "reqcon/model.hpp"
#include "reqcon/principal.hpp"

// Command implementations behind the reqcon binary. Kept in the library so
// tests can drive them directly.

namespace reqcon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitVerifyFailure = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParsedConfig {
    Scenario scenario;
    OptimizerOptions optimizer;
};

// Strict config parsing: unknown keys are errors, invalid values are reported
// with the offending key path, and no defaults are applied to invalid values.
ParsedConfig parse_scenario_config(const nlohmann::json& config);
ParsedConfig load_scenario_config(const std::string& path);

/// Solve output document; serialization round-trips doubles losslessly.
nlohmann::json result_document(const ParsedConfig& config, const SolveResult& result);

/// Calibrate output document.
nlohmann::json calibration_document(const CalibrationFit& fit,
                                    const DimensionlessParams& params);

/// Sweep output: header "psi13,principal_payoff,effort,slack", 17 significant digits.
std::string sweep_csv(const SweepResult& sweep);

int cmd_solve(const std::string& config_path, const std::string& output_path,
              std::ostream& err);

int cmd_sweep(const std::string& config_path, std::size_t agent_index,
              double grid_min, double grid_max, int grid_points,
              const std::string& output_path, std::ostream& err);

int cmd_calibrate(const std::string& csv_path, double q0, double i0,
                  double q_required, double horizon, double cost_rate,
                  const std::string& output_path, std::ostream& err);

int cmd_verify(const std::string& config_path, std::uint64_t n, std::uint64_t seed,
               std::ostream& out, std::ostream& err);

}  // namespace reqcon::cli
