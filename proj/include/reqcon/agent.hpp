#pragma once

#include <vector>

#include "reqcon/model.hpp"

// The subsystem engineer's side of the game: expected payoff for a fixed
// contract and the globally optimal effort choice (best response).

namespace reqcon {

/// E[payoff] = psi1 - c*e + psi2 * Phi((a*e - psi3) / sigma).
double expected_agent_payoff(double e, const Contract& contract,
                             const AgentParams& agent);

// Candidate efforts for the global maximum of the expected payoff: both
// endpoints plus, when it exists, the interior stationary point
// e = (psi3 + sigma*zbar)/a with zbar the positive root of
// phi(z) = c*sigma/(psi2*a). The negative root is a local minimum and is
// skipped. Clamping to [0, 1] happens here, nowhere else.
std::vector<double> stationary_candidates(const Contract& contract,
                                          const AgentParams& agent);

// Global best response over [0, 1]. The interior candidate is refined by
// bounded golden-section search; payoff ties within 1e-12 go to the larger
// effort so an indifferent engineer picks the principal-preferred action.
EffortSolution best_response_effort(const Contract& contract,
                                    const AgentParams& agent);

}  // namespace reqcon
