#include "reqcon/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <vector>

#include "reqcon/agent.hpp"
#include "reqcon/montecarlo.hpp"

namespace reqcon::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path + ": expected a number");
    return j.get<double>();
}

double require_finite(const json& j, const std::string& path) {
    const double v = require_number(j, path);
    if (!std::isfinite(v)) fail(path + ": must be finite");
    return v;
}

double require_positive(const json& j, const std::string& path) {
    const double v = require_finite(j, path);
    if (!(v > 0.0)) fail(path + ": must be > 0");
    return v;
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& path) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const std::string& key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(path + ": unknown key '" + item.key() + "'");
    }
}

std::string format17(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot open output file: " + path);
    out << content;
    if (!out) fail("failed writing output file: " + path);
}

}  // namespace

ParsedConfig parse_scenario_config(const json& config) {
    if (!config.is_object()) fail("config: expected a JSON object");
    reject_unknown_keys(config, {"v0", "agents", "optimizer"}, "config");

    ParsedConfig parsed;
    if (!config.contains("v0")) fail("config: missing key 'v0'");
    parsed.scenario.v0 = require_finite(config.at("v0"), "v0");
    if (parsed.scenario.v0 < 0.0) fail("v0: must be >= 0");

    if (!config.contains("agents")) fail("config: missing key 'agents'");
    const json& agents = config.at("agents");
    if (!agents.is_array() || agents.empty()) {
        fail("agents: expected a non-empty array");
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string path = "agents[" + std::to_string(i) + "]";
        const json& entry = agents.at(i);
        if (!entry.is_object()) fail(path + ": expected an object");
        reject_unknown_keys(entry, {"a", "sigma", "c", "r"}, path);
        for (const char* key : {"a", "sigma", "c", "r"}) {
            if (!entry.contains(key)) fail(path + ": missing key '" + key + "'");
        }
        AgentParams agent;
        agent.a = require_positive(entry.at("a"), path + ".a");
        agent.sigma = require_positive(entry.at("sigma"), path + ".sigma");
        agent.c = require_positive(entry.at("c"), path + ".c");
        agent.r = require_positive(entry.at("r"), path + ".r");
        parsed.scenario.agents.push_back(agent);
    }

    if (config.contains("optimizer")) {
        const json& opt = config.at("optimizer");
        if (!opt.is_object()) fail("optimizer: expected an object");
        reject_unknown_keys(opt,
                            {"n_restarts", "max_iterations", "feasibility_tolerance",
                             "convergence_tolerance", "seed"},
                            "optimizer");
        if (opt.contains("n_restarts")) {
            if (!opt.at("n_restarts").is_number_integer()) {
                fail("optimizer.n_restarts: expected an integer");
            }
            parsed.optimizer.n_restarts = opt.at("n_restarts").get<int>();
            if (parsed.optimizer.n_restarts < 1) fail("optimizer.n_restarts: must be >= 1");
        }
        if (opt.contains("max_iterations")) {
            if (!opt.at("max_iterations").is_number_integer()) {
                fail("optimizer.max_iterations: expected an integer");
            }
            parsed.optimizer.max_iterations = opt.at("max_iterations").get<int>();
            if (parsed.optimizer.max_iterations < 1) {
                fail("optimizer.max_iterations: must be >= 1");
            }
        }
        if (opt.contains("feasibility_tolerance")) {
            parsed.optimizer.feasibility_tolerance =
                require_positive(opt.at("feasibility_tolerance"),
                                 "optimizer.feasibility_tolerance");
        }
        if (opt.contains("convergence_tolerance")) {
            parsed.optimizer.convergence_tolerance =
                require_positive(opt.at("convergence_tolerance"),
                                 "optimizer.convergence_tolerance");
        }
        if (opt.contains("seed")) {
            const json& seed = opt.at("seed");
            if (!seed.is_number_integer() ||
                (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
                fail("optimizer.seed: expected a non-negative integer");
            }
            parsed.optimizer.seed = seed.get<std::uint64_t>();
        }
    }
    return parsed;
}

ParsedConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file: " + path);
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        fail("config parse error: " + std::string(e.what()));
    }
    return parse_scenario_config(config);
}

json result_document(const ParsedConfig& config, const SolveResult& result) {
    json agents = json::array();
    for (const AgentParams& agent : config.scenario.agents) {
        agents.push_back(
            {{"a", agent.a}, {"sigma", agent.sigma}, {"c", agent.c}, {"r", agent.r}});
    }
    json doc;
    doc["schema_version"] = "1";
    doc["input"] = {
        {"v0", config.scenario.v0},
        {"agents", agents},
        {"optimizer",
         {{"n_restarts", config.optimizer.n_restarts},
          {"max_iterations", config.optimizer.max_iterations},
          {"feasibility_tolerance", config.optimizer.feasibility_tolerance},
          {"convergence_tolerance", config.optimizer.convergence_tolerance},
          {"seed", config.optimizer.seed}}}};

    json res;
    res["converged"] = result.converged;
    res["n_restarts_used"] = result.n_restarts_used;
    if (result.converged) {
        json contracts = json::array();
        for (const Contract& contract : result.contracts) {
            contracts.push_back({{"psi1", contract.psi1},
                                 {"psi2", contract.psi2},
                                 {"psi3", contract.psi3}});
        }
        res["contracts"] = contracts;
        res["efforts"] = result.efforts;
        res["participation_slacks"] = result.participation_slacks;
        res["principal_payoff"] = result.principal_payoff;
    }
    doc["result"] = res;
    return doc;
}

json calibration_document(const CalibrationFit& fit, const DimensionlessParams& params) {
    json doc;
    doc["schema_version"] = "1";
    doc["fit"] = {{"a_hat", fit.a_hat},
                  {"sigma_hat", fit.sigma_hat},
                  {"mean_squared_residual", fit.mean_squared_residual},
                  {"q0", fit.q0},
                  {"i0", fit.i0},
                  {"n_points", fit.n_points}};
    doc["dimensionless"] = {{"a", params.a},
                            {"sigma", params.sigma},
                            {"q_required", params.q_required},
                            {"horizon", params.horizon},
                            {"cost_rate", params.cost_rate}};
    json warnings = json::array();
    if (params.sigma == 0.0) {
        warnings.push_back("sigma is 0: the stochastic quality model needs sigma > 0");
    }
    if (!(params.a > 0.0)) {
        warnings.push_back("a is not > 0: the quality model needs a positive slope");
    }
    doc["warnings"] = warnings;
    return doc;
}

std::string sweep_csv(const SweepResult& sweep) {
    std::string out = "psi13,principal_payoff,effort,slack\n";
    for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
        out += format17(sweep.grid[i]) + ',' + format17(sweep.payoffs[i]) + ',' +
               format17(sweep.efforts[i]) + ',' + format17(sweep.slacks[i]) + '\n';
    }
    return out;
}

int cmd_solve(const std::string& config_path, const std::string& output_path,
              std::ostream& err) {
    try {
        const ParsedConfig config = load_scenario_config(config_path);
        const SolveResult result = optimize_contracts(config.scenario, config.optimizer);
        write_text_file(output_path, result_document(config, result).dump(2) + "\n");
        if (!result.converged) {
            err << "no feasible contract vector found\n";
            return kExitInfeasible;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int cmd_sweep(const std::string& config_path, std::size_t agent_index,
              double grid_min, double grid_max, int grid_points,
              const std::string& output_path, std::ostream& err) {
    try {
        const ParsedConfig config = load_scenario_config(config_path);
        if (agent_index >= config.scenario.size()) {
            fail("agent index out of range");
        }
        if (!(grid_min >= 0.0 && grid_max <= 2.0)) {
            fail("sweep range must lie within [0, 2]");
        }
        if (grid_points < 1) fail("need at least one grid point");
        if (grid_points == 1 && grid_min != grid_max) {
            fail("a single-point sweep needs min == max");
        }
        if (grid_points > 1 && !(grid_min < grid_max)) {
            fail("sweep range must satisfy min < max");
        }

        const SolveResult base = optimize_contracts(config.scenario, config.optimizer);
        if (!base.converged) {
            err << "no feasible contract vector found\n";
            return kExitInfeasible;
        }

        std::vector<double> grid(static_cast<std::size_t>(grid_points));
        for (int i = 0; i < grid_points; ++i) {
            grid[static_cast<std::size_t>(i)] =
                grid_points == 1
                    ? grid_min
                    : grid_min + (grid_max - grid_min) * i / (grid_points - 1);
        }
        const SweepResult sweep =
            sweep_requirement(config.scenario, base, agent_index, grid);
        write_text_file(output_path, sweep_csv(sweep));
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int cmd_calibrate(const std::string& csv_path, double q0, double i0,
                  double q_required, double horizon, double cost_rate,
                  const std::string& output_path, std::ostream& err) {
    try {
        const std::vector<HistoricalRecord> records = read_records_csv_file(csv_path);
        const CalibrationFit fit = fit_linear_mle(records, q0, i0);
        const DimensionlessParams params =
            to_dimensionless(fit, q_required, horizon, cost_rate);
        const json doc = calibration_document(fit, params);
        for (const auto& warning : doc.at("warnings")) {
            err << "warning: " << warning.get<std::string>() << "\n";
        }
        write_text_file(output_path, doc.dump(2) + "\n");
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int cmd_verify(const std::string& config_path, std::uint64_t n, std::uint64_t seed,
               std::ostream& out, std::ostream& err) {
    try {
        if (n < 2) fail("need at least 2 samples");
        const ParsedConfig config = load_scenario_config(config_path);
        const SolveResult solved = optimize_contracts(config.scenario, config.optimizer);
        if (!solved.converged) {
            err << "no feasible contract vector found\n";
            return kExitInfeasible;
        }

        struct Check {
            std::string name;
            double analytic;
            McEstimate estimate;
        };
        std::vector<Check> checks;
        std::uint64_t check_seed = seed;

        const std::size_t n_agents = config.scenario.size();
        for (std::size_t i = 0; i < n_agents; ++i) {
            const AgentParams& agent = config.scenario.agents[i];
            const Contract& contract = solved.contracts[i];
            const double effort = solved.efforts[i];
            checks.push_back({"agent_payoff[" + std::to_string(i) + "]",
                              expected_agent_payoff(effort, contract, agent),
                              simulate_expected_agent_payoff(effort, contract, agent, n,
                                                             check_seed++)});
        }
        checks.push_back({"principal_payoff",
                          expected_principal_payoff(solved.contracts, config.scenario),
                          simulate_expected_principal_payoff(solved.contracts,
                                                             config.scenario, n,
                                                             check_seed++)});
        for (std::size_t i = 0; i < n_agents; ++i) {
            const AgentParams& agent = config.scenario.agents[i];
            const double lambda = agent.a * solved.efforts[i] - solved.contracts[i].psi3;
            checks.push_back({"phi_identity[" + std::to_string(i) + "]",
                              std_normal_cdf(lambda / agent.sigma),
                              verify_phi_identity(lambda, agent.sigma, n, check_seed++)});
        }

        bool all_ok = true;
        char line[192];
        std::snprintf(line, sizeof line, "%-20s %16s %16s %12s %8s\n", "check",
                      "analytic", "monte_carlo", "std_error", "z");
        out << line;
        for (const Check& check : checks) {
            double z;
            if (check.estimate.std_error == 0.0) {
                z = std::abs(check.analytic - check.estimate.mean) <= 1e-12
                        ? 0.0
                        : std::numeric_limits<double>::infinity();
            } else {
                z = std::abs(check.analytic - check.estimate.mean) /
                    check.estimate.std_error;
            }
            if (!(z <= 4.0)) all_ok = false;
            std::snprintf(line, sizeof line, "%-20s %16.9e %16.9e %12.3e %8.3f\n",
                          check.name.c_str(), check.analytic, check.estimate.mean,
                          check.estimate.std_error, z);
            out << line;
        }
        out << (all_ok ? "verify: all checks within 4 standard errors\n"
                       : "verify: FAILED\n");
        return all_ok ? kExitOk : kExitVerifyFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace reqcon::cli
