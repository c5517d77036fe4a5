#include "reqcon/model.hpp"

#include <stdexcept>
#include <string>

namespace reqcon {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite and > 0");
    }
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
    }
}

void require_effort(double e) {
    if (!(e >= 0.0 && e <= 1.0)) {
        throw std::invalid_argument("effort must lie in [0, 1]");
    }
}

}  // namespace

void AgentParams::validate() const {
    require_positive(a, "a");
    require_positive(sigma, "sigma");
    require_positive(c, "c");
    require_positive(r, "r");
}

void Contract::validate() const {
    require_nonnegative(psi1, "psi1");
    require_nonnegative(psi2, "psi2");
    require_nonnegative(psi3, "psi3");
}

void Scenario::validate() const {
    // v0 == 0 is legal (a worthless system): the optimum is then to pay nothing.
    require_nonnegative(v0, "v0");
    if (agents.empty()) {
        throw std::invalid_argument("scenario needs at least one agent");
    }
    for (const AgentParams& agent : agents) agent.validate();
}

double transfer(double q, const Contract& contract) {
    return contract.psi1 + contract.psi2 * heaviside(q - contract.psi3);
}

double quality(double e, double xi, const AgentParams& agent) {
    require_effort(e);
    return agent.a * e + agent.sigma * xi;
}

double system_value(const std::vector<double>& qualities, const Scenario& scenario) {
    if (qualities.size() != scenario.size()) {
        throw std::invalid_argument("one quality per agent required");
    }
    for (std::size_t i = 0; i < qualities.size(); ++i) {
        if (qualities[i] < scenario.agents[i].r) return 0.0;
    }
    return scenario.v0;
}

double agent_realized_payoff(double e, double xi, const Contract& contract,
                             const AgentParams& agent) {
    return transfer(quality(e, xi, agent), contract) - agent.c * e;
}

}  // namespace reqcon
