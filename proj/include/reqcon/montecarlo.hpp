#pragma once

#include <cstdint>
#include <vector>

#include "reqcon/model.hpp"

// Independent stochastic oracle: estimates the model's analytic expectations
// by direct sampling of the state of nature.
//
// Reproducibility contract: draws come from a counter-based uniform stream
// mapped through the inverse normal CDF. Sample index k owns substream k;
// within a substream, dimension j selects the j-th draw (agent j in the
// principal simulator). Identical (seed, k, j) gives identical draws on any
// platform and under any partitioning of the sample range across workers.

namespace reqcon {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Uniform draw in the open interval (0, 1) for (seed, sample, dim).
double uniform_draw(std::uint64_t seed, std::uint64_t sample, std::uint64_t dim);

/// Standard normal draw for (seed, sample, dim), via the inverse CDF.
double normal_draw(std::uint64_t seed, std::uint64_t sample, std::uint64_t dim);

/// Inverse standard normal CDF on (0, 1), accurate to ~1e-15.
double inverse_normal_cdf(double p);

/// Sample mean/std-error of the agent's realized payoff at fixed effort.
McEstimate simulate_expected_agent_payoff(double e, const Contract& contract,
                                          const AgentParams& agent,
                                          std::uint64_t n, std::uint64_t seed);

// Sample mean/std-error of the principal's realized payoff. Efforts are the
// agents' best responses to the given contracts; each draw samples an
// independent noise term per agent.
McEstimate simulate_expected_principal_payoff(const std::vector<Contract>& contracts,
                                              const Scenario& scenario,
                                              std::uint64_t n, std::uint64_t seed);

/// Sample mean of heaviside(lambda + sigma*xi); converges to Phi(lambda/sigma).
McEstimate verify_phi_identity(double lambda, double sigma, std::uint64_t n,
                               std::uint64_t seed);

}  // namespace reqcon
