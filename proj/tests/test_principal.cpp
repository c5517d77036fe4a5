#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "reqcon/agent.hpp"
#include "reqcon/montecarlo.hpp"
#include "reqcon/principal.hpp"

using namespace reqcon;

namespace {

Scenario identical_agents(int n, double a, double sigma, double c) {
    Scenario scenario;
    scenario.v0 = 1.0;
    scenario.agents.assign(n, AgentParams{a, sigma, c, 1.0});
    return scenario;
}

OptimizerOptions quick_options() {
    OptimizerOptions opts;
    opts.n_restarts = 8;
    return opts;
}

}  // namespace

TEST_CASE("expected_principal_payoff closed form") {
    SUBCASE("no payments, no incentives") {
        const Scenario scenario = identical_agents(2, 2.0, 0.05, 0.01);
        const std::vector<Contract> contracts(2, Contract{0.0, 0.0, 1.0});
        const double phi = std_normal_cdf(-1.0 / 0.05);
        CHECK(expected_principal_payoff(contracts, scenario) ==
              doctest::Approx(phi * phi).epsilon(1e-12));
    }

    SUBCASE("reference contracts on two identical agents") {
        // Both agents shirk (the fixed fee beats the interior stationary
        // point), so the principal pays the fees for a nearly-sure failure.
        const Scenario scenario = identical_agents(2, 2.0, 0.05, 0.01);
        const std::vector<Contract> contracts(2, Contract{0.001, 0.005, 1.087});
        const auto grid =
            oracles::grid_best_response(contracts[0], scenario.agents[0], 100001);
        CHECK(grid.effort == 0.0);
        // Success and bonus probabilities at zero effort are below 1e-88;
        // only the fixed fees matter.
        const double expected =
            -2.0 * (0.001 + 0.005 * std_normal_cdf((0.0 - 1.087) / 0.05));
        CHECK(expected_principal_payoff(contracts, scenario) ==
              doctest::Approx(expected).epsilon(1e-12));
        CHECK(expected_principal_payoff(contracts, scenario) ==
              doctest::Approx(-0.002).epsilon(1e-9));
    }

    SUBCASE("unreachable requirement still owes the fixed fees") {
        Scenario scenario = identical_agents(2, 2.0, 0.05, 0.01);
        std::vector<Contract> contracts = {Contract{0.003, 0.0001, 1.05},
                                           Contract{0.002, 0.01, 10.0}};
        CHECK(best_response_effort(contracts[0], scenario.agents[0]).effort == 0.0);
        CHECK(best_response_effort(contracts[1], scenario.agents[1]).effort == 0.0);
        const double payoff = expected_principal_payoff(contracts, scenario);
        CHECK(payoff == doctest::Approx(-0.005).epsilon(1e-9));
    }

    SUBCASE("length mismatch is an error") {
        const Scenario scenario = identical_agents(2, 2.0, 0.05, 0.01);
        CHECK_THROWS_AS(
            expected_principal_payoff({Contract{0.0, 0.0, 1.0}}, scenario),
            std::invalid_argument);
    }
}

TEST_CASE("participation_slack") {
    const AgentParams agent{2.0, 0.05, 0.01, 1.0};
    CHECK(participation_slack(Contract{0.02, 0.0, 1.0}, agent) == 0.02);
    CHECK(participation_slack(Contract{0.0, 0.0, 1.0}, agent) == 0.0);
    // The optimal response to the reference contract is to shirk and keep the
    // fixed fee, so the slack equals psi1 (plus a negligible bonus term).
    CHECK(participation_slack(Contract{0.001, 0.005, 1.087}, agent) ==
          doctest::Approx(0.001).epsilon(1e-12));
}

TEST_CASE("optimize_contracts on a worthless system pays nothing") {
    Scenario scenario = identical_agents(1, 2.0, 0.05, 0.01);
    scenario.v0 = 0.0;
    const SolveResult result = optimize_contracts(scenario, quick_options());
    REQUIRE(result.converged);
    CHECK(std::abs(result.principal_payoff) <= 1e-9);
    CHECK(result.contracts[0].psi1 <= 1e-6);
    CHECK(result.contracts[0].psi2 * std_normal_cdf((scenario.agents[0].a *
                                                     result.efforts[0] -
                                                     result.contracts[0].psi3) /
                                                    scenario.agents[0].sigma) <= 1e-6);
}

TEST_CASE("optimize_contracts returns feasible in-box solutions") {
    const std::uint64_t master = 555;
    for (int t = 0; t < 4; ++t) {
        Scenario scenario;
        scenario.v0 = 1.0;
        const int n = 1 + static_cast<int>(3.0 * uniform_draw(master, t, 9));
        for (int i = 0; i < n; ++i) {
            AgentParams agent;
            agent.a = 1.2 + 1.3 * uniform_draw(master, t, 3 * i);
            agent.sigma = 0.03 + 0.22 * uniform_draw(master, t, 3 * i + 1);
            agent.c = 0.005 + 0.05 * uniform_draw(master, t, 3 * i + 2);
            agent.r = 1.0;
            scenario.agents.push_back(agent);
        }
        const OptimizerOptions opts = quick_options();
        const SolveResult result = optimize_contracts(scenario, opts);
        REQUIRE(result.converged);
        REQUIRE(result.contracts.size() == scenario.size());
        for (std::size_t i = 0; i < scenario.size(); ++i) {
            const ContractBounds box = contract_bounds(scenario.agents[i]);
            CHECK(result.participation_slacks[i] >= -opts.feasibility_tolerance);
            CHECK(result.contracts[i].psi1 >= 0.0);
            CHECK(result.contracts[i].psi1 <= box.psi1_hi);
            CHECK(result.contracts[i].psi2 >= 0.0);
            CHECK(result.contracts[i].psi2 <= box.psi1_hi);
            CHECK(result.contracts[i].psi3 >= box.psi3_lo);
            CHECK(result.contracts[i].psi3 <= box.psi3_hi);
            CHECK(result.efforts[i] ==
                  best_response_effort(result.contracts[i], scenario.agents[i]).effort);
        }
        CHECK(result.principal_payoff ==
              expected_principal_payoff(result.contracts, scenario));
    }
}

TEST_CASE("optimize_contracts is deterministic") {
    const Scenario scenario = identical_agents(2, 1.5, 0.05, 0.01);
    const OptimizerOptions opts = quick_options();
    const SolveResult r1 = optimize_contracts(scenario, opts);
    const SolveResult r2 = optimize_contracts(scenario, opts);
    REQUIRE(r1.converged == r2.converged);
    CHECK(r1.principal_payoff == r2.principal_payoff);
    for (std::size_t i = 0; i < r1.contracts.size(); ++i) {
        CHECK(r1.contracts[i].psi1 == r2.contracts[i].psi1);
        CHECK(r1.contracts[i].psi2 == r2.contracts[i].psi2);
        CHECK(r1.contracts[i].psi3 == r2.contracts[i].psi3);
        CHECK(r1.efforts[i] == r2.efforts[i]);
        CHECK(r1.participation_slacks[i] == r2.participation_slacks[i]);
    }
}

TEST_CASE("identical agents get near-identical contracts") {
    // Interior-optimum regimes pin the solution; degenerate high-noise cases
    // admit payoff-equivalent contract families and are not asserted here.
    for (double sigma : {0.05, 0.1}) {
        const Scenario scenario = identical_agents(2, 2.0, sigma, 0.01);
        const SolveResult result = optimize_contracts(scenario, quick_options());
        REQUIRE(result.converged);
        CHECK(std::abs(result.contracts[0].psi1 - result.contracts[1].psi1) <= 2e-2);
        CHECK(std::abs(result.contracts[0].psi2 - result.contracts[1].psi2) <= 2e-2);
        CHECK(std::abs(result.contracts[0].psi3 - result.contracts[1].psi3) <= 2e-2);
    }
}

TEST_CASE("single-agent optimum is not beaten by a coarse grid") {
    const std::uint64_t master = 4242;
    for (int t = 0; t < 3; ++t) {
        AgentParams agent;
        agent.a = 1.2 + 1.3 * uniform_draw(master, t, 0);
        agent.sigma = 0.03 + 0.22 * uniform_draw(master, t, 1);
        agent.c = 0.005 + 0.055 * uniform_draw(master, t, 2);
        agent.r = 1.0;
        Scenario scenario;
        scenario.v0 = 1.0;
        scenario.agents = {agent};

        const SolveResult result = optimize_contracts(scenario, {});
        const ContractBounds box = contract_bounds(agent);
        double brute = -1e300;
        for (int i = 0; i < 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                for (int k = 0; k < 50; ++k) {
                    const Contract c{box.psi1_hi * i / 49.0, box.psi1_hi * j / 49.0,
                                     box.psi3_lo + (box.psi3_hi - box.psi3_lo) * k / 49.0};
                    brute = std::max(brute, expected_principal_payoff({c}, scenario));
                }
            }
        }
        CHECK(result.principal_payoff >= brute - 1e-3);
    }
}

TEST_CASE("sweep_requirement") {
    const Scenario scenario = identical_agents(2, 1.5, 0.05, 0.01);
    const SolveResult base = optimize_contracts(scenario, quick_options());
    REQUIRE(base.converged);
    const double psi3_star = base.contracts[0].psi3;

    SUBCASE("grid through the optimum reproduces the solve payoff") {
        const SweepResult sweep =
            sweep_requirement(scenario, base, 0, {0.5, psi3_star, 1.6});
        CHECK(std::abs(sweep.payoffs[1] - base.principal_payoff) <= 1e-9);
    }

    SUBCASE("unreachable requirement kills effort and payoff") {
        const SweepResult sweep = sweep_requirement(scenario, base, 0, {2.0});
        CHECK(sweep.efforts[0] == 0.0);
        // Only the other agent's expected payment is still owed.
        CHECK(sweep.payoffs[0] < 0.0);
        CHECK(sweep.payoffs[0] ==
              doctest::Approx(-(base.contracts[1].psi1 +
                                base.contracts[1].psi2 *
                                    std_normal_cdf((1.5 * base.efforts[1] -
                                                    base.contracts[1].psi3) /
                                                   0.05)))
                  .epsilon(1e-6));
    }

    SUBCASE("full sweep is single-peaked with the peak at the optimum") {
        std::vector<double> grid;
        for (int i = 0; i <= 200; ++i) grid.push_back(2.0 * i / 200.0);
        const SweepResult sweep = sweep_requirement(scenario, base, 0, grid);
        std::size_t argmax = 0;
        for (std::size_t i = 1; i < sweep.payoffs.size(); ++i) {
            if (sweep.payoffs[i] > sweep.payoffs[argmax]) argmax = i;
        }
        CHECK(std::abs(sweep.grid[argmax] - psi3_star) <= 2.0 / 200.0 + 1e-9);
        for (std::size_t i = 1; i <= argmax; ++i) {
            CHECK(sweep.payoffs[i] >= sweep.payoffs[i - 1] - 1e-9);
        }
        for (std::size_t i = argmax; i < sweep.payoffs.size(); ++i) {
            CHECK(sweep.payoffs[i] <= sweep.payoffs[argmax] + 1e-12);
        }
        // Participation is reported, not enforced, along the sweep.
        CHECK(sweep.slacks.size() == grid.size());
    }

    SUBCASE("invalid inputs are rejected") {
        CHECK_THROWS_AS(sweep_requirement(scenario, base, 5, {1.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(sweep_requirement(scenario, base, 0, {1.0, 0.5}),
                        std::invalid_argument);
        CHECK_THROWS_AS(sweep_requirement(scenario, base, 0, {1.0, 2.5}),
                        std::invalid_argument);
        CHECK_THROWS_AS(sweep_requirement(scenario, base, 0, {}),
                        std::invalid_argument);
        SolveResult unsolved;
        CHECK_THROWS_AS(sweep_requirement(scenario, unsolved, 0, {1.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("analytic principal payoff agrees with Monte Carlo") {
    const Scenario scenario = identical_agents(2, 2.0, 0.05, 0.01);
    const std::vector<Contract> contracts(2, Contract{0.0, 0.0062, 1.08});
    const double analytic = expected_principal_payoff(contracts, scenario);
    const McEstimate mc =
        simulate_expected_principal_payoff(contracts, scenario, 1000000, 99);
    CHECK(std::abs(analytic - mc.mean) <= 4.0 * mc.std_error);
}

TEST_CASE("optimizer options are validated") {
    OptimizerOptions opts;
    opts.n_restarts = 0;
    CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
    opts = OptimizerOptions{};
    opts.feasibility_tolerance = 0.0;
    CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
    opts = OptimizerOptions{};
    opts.convergence_tolerance = -1.0;
    CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
}
