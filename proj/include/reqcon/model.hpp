#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

// Core types and closed-form model functions shared by every other module.
//
// Conventions: quality is measured in units of the true requirement (so the
// requirement itself is 1 after non-dimensionalization), money in units of
// the system success value, and effort lives on the closed interval [0, 1].

namespace reqcon {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kSqrt2Pi = 2.5066282746310002;
inline constexpr double kInvSqrt2Pi = 0.3989422804014327;

/// Standard normal CDF. Accurate to ~1e-15 absolute via erfc.
inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

/// Standard normal density.
inline double std_normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Unit step with heaviside(0) == 1.
inline double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

// Subsystem engineer parameters, dimensionless.
struct AgentParams {
    double a;      // quality gained per unit effort
    double sigma;  // quality standard deviation
    double c;      // opportunity cost per unit effort
    double r = 1.0;  // true requirement (1 after scaling, kept explicit)

    void validate() const;  // throws std::invalid_argument naming the field
};

// Transfer-function parameters: a fixed participation payment plus a bonus
// paid when realized quality reaches the passed-down requirement.
struct Contract {
    double psi1;  // participation payment
    double psi2;  // bonus payment
    double psi3;  // passed-down requirement

    void validate() const;
};

// The systems engineer's full problem instance.
struct Scenario {
    double v0 = 1.0;                  // system success value
    std::vector<AgentParams> agents;  // one entry per subsystem engineer

    std::size_t size() const { return agents.size(); }
    void validate() const;
};

// Result of the subsystem engineer's effort choice for a fixed contract.
struct EffortSolution {
    double effort = 0.0;
    double expected_payoff = 0.0;
    std::vector<double> candidates;  // efforts that were compared (diagnostics)
};

// Result of the systems engineer's contract optimization.
struct SolveResult {
    std::vector<Contract> contracts;
    std::vector<double> efforts;
    double principal_payoff = 0.0;
    std::vector<double> participation_slacks;
    int n_restarts_used = 0;
    bool converged = false;
};

/// Payment for realized quality q: psi1 + psi2 * heaviside(q - psi3).
double transfer(double q, const Contract& contract);

/// Realized quality a*e + sigma*xi. Effort outside [0, 1] is an error.
double quality(double e, double xi, const AgentParams& agent);

/// v0 if every quality meets its agent's true requirement, else 0.
double system_value(const std::vector<double>& qualities, const Scenario& scenario);

/// transfer(quality(e, xi)) - c*e for one realized state of nature.
double agent_realized_payoff(double e, double xi, const Contract& contract,
                             const AgentParams& agent);

}  // namespace reqcon
