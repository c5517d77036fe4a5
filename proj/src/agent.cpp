#include "reqcon/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace reqcon {

namespace {

constexpr double kPayoffTie = 1e-12;
constexpr double kRefineHalfWidth = 1e-4;
constexpr double kRefineTol = 1e-10;

// Golden-section maximization on [lo, hi]; returns the best point evaluated.
// Works on the payoff hump, which is smooth and unimodal inside the bracket.
template <typename F>
double golden_max(F&& f, double lo, double hi, double tol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        }
    }
    return f1 >= f2 ? x1 : x2;
}

}  // namespace

double expected_agent_payoff(double e, const Contract& contract,
                             const AgentParams& agent) {
    if (!(e >= 0.0 && e <= 1.0)) {
        throw std::invalid_argument("effort must lie in [0, 1]");
    }
    const double z = (agent.a * e - contract.psi3) / agent.sigma;
    return contract.psi1 - agent.c * e + contract.psi2 * std_normal_cdf(z);
}

std::vector<double> stationary_candidates(const Contract& contract,
                                          const AgentParams& agent) {
    std::vector<double> candidates = {0.0, 1.0};
    if (contract.psi2 <= 0.0) return candidates;

    // Interior stationary point exists only when the first-order condition
    // phi(z) = c*sigma/(psi2*a) has a solution, i.e. the ratio below is < 1.
    const double ratio = agent.c * agent.sigma * kSqrt2Pi / (contract.psi2 * agent.a);
    if (!(ratio < 1.0)) return candidates;

    const double zbar = std::sqrt(-2.0 * std::log(ratio));
    const double interior = (contract.psi3 + agent.sigma * zbar) / agent.a;
    candidates.push_back(std::clamp(interior, 0.0, 1.0));
    return candidates;
}

EffortSolution best_response_effort(const Contract& contract,
                                    const AgentParams& agent) {
    EffortSolution solution;
    solution.candidates = stationary_candidates(contract, agent);

    if (solution.candidates.size() > 2) {
        // Polish the interior candidate; the analytic point stands unless
        // refinement improves on it.
        const double e0 = solution.candidates.back();
        const double lo = std::max(0.0, e0 - kRefineHalfWidth);
        const double hi = std::min(1.0, e0 + kRefineHalfWidth);
        const double refined = golden_max(
            [&](double e) { return expected_agent_payoff(e, contract, agent); },
            lo, hi, kRefineTol);
        if (expected_agent_payoff(refined, contract, agent) >=
            expected_agent_payoff(e0, contract, agent)) {
            solution.candidates.back() = refined;
        }
    }

    double best_effort = 0.0;
    double best_payoff = -std::numeric_limits<double>::infinity();
    for (double e : solution.candidates) {
        const double payoff = expected_agent_payoff(e, contract, agent);
        if (payoff > best_payoff + kPayoffTie ||
            (payoff >= best_payoff - kPayoffTie && e > best_effort)) {
            best_effort = e;
            best_payoff = std::max(best_payoff, payoff);
        }
    }
    solution.effort = best_effort;
    solution.expected_payoff = expected_agent_payoff(best_effort, contract, agent);
    return solution;
}

}  // namespace reqcon
