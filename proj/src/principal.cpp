#include "reqcon/principal.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "reqcon/agent.hpp"
#include "reqcon/montecarlo.hpp"

namespace reqcon {

namespace {

using Eigen::VectorXd;

constexpr double kPenaltyWeight = 1e6;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<Contract> unpack(const VectorXd& x) {
    std::vector<Contract> contracts(static_cast<std::size_t>(x.size()) / 3);
    for (std::size_t i = 0; i < contracts.size(); ++i) {
        contracts[i] = Contract{x[3 * i], x[3 * i + 1], x[3 * i + 2]};
    }
    return contracts;
}

// Objective for the inner optimizer: principal payoff minus an exact penalty
// on participation violations beyond the feasibility tolerance.
struct PenalizedObjective {
    const Scenario& scenario;
    double feasibility_tolerance;
    double scale;  // payoff scale for the penalty weight

    double operator()(const VectorXd& x) const {
        const std::vector<Contract> contracts = unpack(x);
        double value = expected_principal_payoff(contracts, scenario);
        for (std::size_t i = 0; i < contracts.size(); ++i) {
            const double slack = participation_slack(contracts[i], scenario.agents[i]);
            const double violation = -(slack + feasibility_tolerance);
            if (violation > 0.0) value -= kPenaltyWeight * scale * violation;
        }
        return value;
    }
};

VectorXd clip_to_box(VectorXd x, const VectorXd& lo, const VectorXd& hi) {
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        x[k] = std::clamp(x[k], lo[k], hi[k]);
    }
    return x;
}

// Nelder-Mead maximization with vertices projected onto the box.
template <typename F>
VectorXd nelder_mead_max(const F& f, VectorXd x0, const VectorXd& lo,
                         const VectorXd& hi, int max_iterations, double tol) {
    const Eigen::Index dim = x0.size();
    const int n_vertices = static_cast<int>(dim) + 1;

    std::vector<VectorXd> vertex(n_vertices, x0);
    std::vector<double> value(n_vertices);
    for (int i = 1; i < n_vertices; ++i) {
        const Eigen::Index k = i - 1;
        double step = 0.05 * (hi[k] - lo[k]);
        if (step <= 0.0) step = 1e-8;
        if (vertex[i][k] + step > hi[k]) step = -step;
        vertex[i][k] += step;
        vertex[i] = clip_to_box(vertex[i], lo, hi);
    }
    for (int i = 0; i < n_vertices; ++i) value[i] = f(vertex[i]);

    std::vector<int> order(n_vertices);
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return value[a] > value[b]; });
    };

    for (int iter = 0; iter < max_iterations; ++iter) {
        sort_vertices();
        const int best = order[0];
        const int worst = order[n_vertices - 1];
        const int second_worst = order[n_vertices - 2];

        double spread = 0.0;
        for (int i = 1; i < n_vertices; ++i) {
            spread = std::max(spread,
                              (vertex[order[i]] - vertex[best]).cwiseAbs().maxCoeff());
        }
        if (spread < tol && value[best] - value[worst] < tol) break;

        VectorXd centroid = VectorXd::Zero(dim);
        for (int i = 0; i < n_vertices; ++i) {
            if (i != worst) centroid += vertex[i];
        }
        centroid /= static_cast<double>(n_vertices - 1);

        const VectorXd reflected =
            clip_to_box(centroid + (centroid - vertex[worst]), lo, hi);
        const double f_reflected = f(reflected);

        if (f_reflected > value[best]) {
            const VectorXd expanded =
                clip_to_box(centroid + 2.0 * (centroid - vertex[worst]), lo, hi);
            const double f_expanded = f(expanded);
            if (f_expanded > f_reflected) {
                vertex[worst] = expanded;
                value[worst] = f_expanded;
            } else {
                vertex[worst] = reflected;
                value[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected > value[second_worst]) {
            vertex[worst] = reflected;
            value[worst] = f_reflected;
            continue;
        }

        VectorXd contracted;
        if (f_reflected > value[worst]) {
            contracted = clip_to_box(centroid + 0.5 * (reflected - centroid), lo, hi);
        } else {
            contracted = clip_to_box(centroid + 0.5 * (vertex[worst] - centroid), lo, hi);
        }
        const double f_contracted = f(contracted);
        if (f_contracted > std::max(value[worst], f_reflected)) {
            vertex[worst] = contracted;
            value[worst] = f_contracted;
            continue;
        }

        for (int i = 0; i < n_vertices; ++i) {  // shrink toward the best vertex
            if (i == best) continue;
            vertex[i] = clip_to_box(vertex[best] + 0.5 * (vertex[i] - vertex[best]),
                                    lo, hi);
            value[i] = f(vertex[i]);
        }
    }
    sort_vertices();
    return vertex[order[0]];
}

// Coordinate polish: a uniform scan per coordinate locates the best cell,
// golden-section search sharpens inside it. The objective is discontinuous
// where an agent's best response jumps, so the search keeps the best point
// it actually evaluated.
template <typename F>
VectorXd coordinate_polish(const F& f, VectorXd x, const VectorXd& lo,
                           const VectorXd& hi, int sweeps) {
    constexpr int kScanPoints = 41;
    constexpr double invphi = 0.6180339887498949;

    double fx = f(x);
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            const double span = hi[k] - lo[k];
            if (span <= 0.0) continue;

            auto eval_at = [&](double t) {
                VectorXd y = x;
                y[k] = t;
                return f(y);
            };

            double best_t = x[k];
            double best_f = fx;
            const double cell = span / (kScanPoints - 1);
            for (int i = 0; i < kScanPoints; ++i) {
                const double t = lo[k] + cell * i;
                const double ft = eval_at(t);
                if (ft > best_f) {
                    best_f = ft;
                    best_t = t;
                }
            }

            double a = std::max(lo[k], best_t - cell);
            double b = std::min(hi[k], best_t + cell);
            double t1 = b - invphi * (b - a);
            double t2 = a + invphi * (b - a);
            double f1 = eval_at(t1);
            double f2 = eval_at(t2);
            while (b - a > 1e-11 * std::max(1.0, span)) {
                if (f1 > best_f) { best_f = f1; best_t = t1; }
                if (f2 > best_f) { best_f = f2; best_t = t2; }
                if (f1 < f2) {
                    a = t1;
                    t1 = t2;
                    f1 = f2;
                    t2 = a + invphi * (b - a);
                    f2 = eval_at(t2);
                } else {
                    b = t2;
                    t2 = t1;
                    f2 = f1;
                    t1 = b - invphi * (b - a);
                    f1 = eval_at(t1);
                }
            }
            if (f1 > best_f) { best_f = f1; best_t = t1; }
            if (f2 > best_f) { best_f = f2; best_t = t2; }

            if (best_f > fx) {
                x[k] = best_t;
                fx = best_f;
            }
        }
    }
    return x;
}

bool agents_identical(const Scenario& scenario) {
    for (std::size_t i = 1; i < scenario.size(); ++i) {
        const AgentParams& p = scenario.agents[i];
        const AgentParams& q = scenario.agents[0];
        if (p.a != q.a || p.sigma != q.sigma || p.c != q.c || p.r != q.r) return false;
    }
    return true;
}

// For identical agents, try giving every agent the same per-agent contract;
// keep the symmetric point only when it strictly improves the objective.
template <typename F>
VectorXd try_symmetrize(const F& f, VectorXd x, double& fx, std::size_t n_agents) {
    for (std::size_t i = 0; i < n_agents; ++i) {
        VectorXd y = x;
        for (std::size_t j = 0; j < n_agents; ++j) {
            y.segment<3>(3 * static_cast<Eigen::Index>(j)) =
                x.segment<3>(3 * static_cast<Eigen::Index>(i));
        }
        const double fy = f(y);
        if (fy > fx) {
            x = y;
            fx = fy;
        }
    }
    return x;
}

}  // namespace

void OptimizerOptions::validate() const {
    if (n_restarts < 1) throw std::invalid_argument("n_restarts must be >= 1");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(feasibility_tolerance > 0.0)) {
        throw std::invalid_argument("feasibility_tolerance must be > 0");
    }
    if (!(convergence_tolerance > 0.0)) {
        throw std::invalid_argument("convergence_tolerance must be > 0");
    }
}

ContractBounds contract_bounds(const AgentParams& agent) {
    return ContractBounds{2.0 * agent.c, std::max(0.0, agent.r - 3.0 * agent.sigma),
                          agent.r + 3.0 * agent.sigma};
}

double expected_principal_payoff(const std::vector<Contract>& contracts,
                                 const Scenario& scenario) {
    if (contracts.size() != scenario.size()) {
        throw std::invalid_argument("one contract per agent required");
    }
    double success_probability = 1.0;
    double payments = 0.0;
    for (std::size_t i = 0; i < contracts.size(); ++i) {
        const AgentParams& agent = scenario.agents[i];
        const Contract& contract = contracts[i];
        const double effort = best_response_effort(contract, agent).effort;
        const double mean_quality = agent.a * effort;
        success_probability *=
            std_normal_cdf((mean_quality - agent.r) / agent.sigma);
        payments += contract.psi1 +
                    contract.psi2 *
                        std_normal_cdf((mean_quality - contract.psi3) / agent.sigma);
    }
    return scenario.v0 * success_probability - payments;
}

double participation_slack(const Contract& contract, const AgentParams& agent) {
    return best_response_effort(contract, agent).expected_payoff;
}

SolveResult optimize_contracts(const Scenario& scenario, const OptimizerOptions& opts) {
    scenario.validate();
    opts.validate();

    const std::size_t n_agents = scenario.size();
    const Eigen::Index dim = static_cast<Eigen::Index>(3 * n_agents);
    VectorXd lo(dim), hi(dim);
    for (std::size_t i = 0; i < n_agents; ++i) {
        const ContractBounds box = contract_bounds(scenario.agents[i]);
        lo[3 * i] = 0.0;
        hi[3 * i] = box.psi1_hi;
        lo[3 * i + 1] = 0.0;
        hi[3 * i + 1] = box.psi1_hi;
        lo[3 * i + 2] = box.psi3_lo;
        hi[3 * i + 2] = box.psi3_hi;
    }

    const PenalizedObjective objective{scenario, opts.feasibility_tolerance,
                                       std::max(1.0, std::abs(scenario.v0))};
    const bool symmetric = n_agents > 1 && agents_identical(scenario);

    VectorXd best_x;
    double best_value = kNegInf;
    bool found_feasible = false;

    for (int restart = 0; restart < opts.n_restarts; ++restart) {
        VectorXd x0(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            const double u = uniform_draw(opts.seed, static_cast<std::uint64_t>(restart),
                                          static_cast<std::uint64_t>(k));
            x0[k] = lo[k] + u * (hi[k] - lo[k]);
        }

        VectorXd x = nelder_mead_max(objective, x0, lo, hi, opts.max_iterations,
                                     opts.convergence_tolerance);
        x = coordinate_polish(objective, x, lo, hi, 2);
        double fx = objective(x);
        if (symmetric) x = try_symmetrize(objective, x, fx, n_agents);

        const std::vector<Contract> contracts = unpack(x);
        bool feasible = true;
        for (std::size_t i = 0; i < n_agents; ++i) {
            if (participation_slack(contracts[i], scenario.agents[i]) <
                -opts.feasibility_tolerance) {
                feasible = false;
                break;
            }
        }
        if (feasible && fx > best_value) {
            best_value = fx;
            best_x = x;
            found_feasible = true;
        }
    }

    SolveResult result;
    result.n_restarts_used = opts.n_restarts;
    result.converged = found_feasible;
    if (!found_feasible) {
        // Explicit no-solution result: no contracts rather than a silent zero.
        result.principal_payoff = kNegInf;
        return result;
    }

    result.contracts = unpack(best_x);
    result.efforts.resize(n_agents);
    result.participation_slacks.resize(n_agents);
    for (std::size_t i = 0; i < n_agents; ++i) {
        const EffortSolution bre =
            best_response_effort(result.contracts[i], scenario.agents[i]);
        result.efforts[i] = bre.effort;
        result.participation_slacks[i] = bre.expected_payoff;
    }
    result.principal_payoff = expected_principal_payoff(result.contracts, scenario);
    return result;
}

SweepResult sweep_requirement(const Scenario& scenario, const SolveResult& base,
                              std::size_t agent_index,
                              const std::vector<double>& grid) {
    scenario.validate();
    if (!base.converged || base.contracts.size() != scenario.size()) {
        throw std::invalid_argument("base solve must be converged and match scenario");
    }
    if (agent_index >= scenario.size()) {
        throw std::invalid_argument("agent_index out of range");
    }
    if (grid.empty()) throw std::invalid_argument("grid must be non-empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] <= 2.0)) {
            throw std::invalid_argument("grid values must lie in [0, 2]");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("grid must be strictly increasing");
        }
    }

    SweepResult sweep;
    sweep.grid = grid;
    sweep.fixed_contracts = base.contracts;
    sweep.payoffs.reserve(grid.size());
    sweep.efforts.reserve(grid.size());
    sweep.slacks.reserve(grid.size());

    std::vector<Contract> contracts = base.contracts;
    for (double psi3 : grid) {
        contracts[agent_index].psi3 = psi3;
        const EffortSolution bre =
            best_response_effort(contracts[agent_index], scenario.agents[agent_index]);
        sweep.payoffs.push_back(expected_principal_payoff(contracts, scenario));
        sweep.efforts.push_back(bre.effort);
        sweep.slacks.push_back(bre.expected_payoff);
    }
    return sweep;
}

}  // namespace reqcon
