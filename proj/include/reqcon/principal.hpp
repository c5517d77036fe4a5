#pragma once

#include <cstdint>
#include <vector>

#include "reqcon/model.hpp"

// The systems engineer's side of the game: payoff evaluation under any
// contract vector, participation checks, the mechanism-design optimization
// over contract parameters, and sensitivity sweeps over the passed-down
// requirement.

namespace reqcon {

struct OptimizerOptions {
    int n_restarts = 32;
    int max_iterations = 2000;          // per restart
    double feasibility_tolerance = 1e-8;
    double convergence_tolerance = 1e-9;
    std::uint64_t seed = 0;             // drives restart-point sampling

    void validate() const;
};

struct SweepResult {
    std::vector<double> grid;      // strictly increasing psi3 values
    std::vector<double> payoffs;   // principal expected payoff per grid point
    std::vector<double> efforts;   // swept agent's induced effort
    std::vector<double> slacks;    // swept agent's participation slack
    std::vector<Contract> fixed_contracts;
};

// Search box for one agent's contract parameters: psi1, psi2 in [0, 2c] and
// psi3 in [max(0, r - 3*sigma), r + 3*sigma].
struct ContractBounds {
    double psi1_hi;
    double psi3_lo;
    double psi3_hi;
};
ContractBounds contract_bounds(const AgentParams& agent);

// E[payoff] with every agent at its best response:
//   v0 * prod Phi((a_i e_i* - r_i)/sigma_i)
//   - sum psi_i1 - sum psi_i2 * Phi((a_i e_i* - psi_i3)/sigma_i).
double expected_principal_payoff(const std::vector<Contract>& contracts,
                                 const Scenario& scenario);

/// The agent's expected payoff at its best response; >= 0 means it participates.
double participation_slack(const Contract& contract, const AgentParams& agent);

// Maximizes the principal's expected payoff over all 3N contract parameters
// inside the search box, subject to every participation slack staying above
// -feasibility_tolerance. Derivative-free: multistart Nelder-Mead with an
// exact penalty on constraint violation, followed by coordinate line-search
// polish. Restart k starts from a point sampled deterministically from the
// box via (seed, k); the best feasible restart wins, ties to the lowest
// restart index. converged == false means no restart was feasible.
SolveResult optimize_contracts(const Scenario& scenario,
                               const OptimizerOptions& opts = {});

// Re-evaluates the solved scenario along a grid of psi3 values for one agent,
// holding everything else fixed at `base`. Participation may go negative
// along the sweep; it is reported, not enforced.
SweepResult sweep_requirement(const Scenario& scenario, const SolveResult& base,
                              std::size_t agent_index,
                              const std::vector<double>& grid);

}  // namespace reqcon
