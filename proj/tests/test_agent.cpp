#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "reqcon/agent.hpp"
#include "reqcon/montecarlo.hpp"

using namespace reqcon;

namespace {
const Contract kReferenceContract{0.001, 0.005, 1.087};
const AgentParams kReferenceAgent{2.0, 0.05, 0.01, 1.0};
}  // namespace

TEST_CASE("expected_agent_payoff closed form") {
    const AgentParams agent{2.0, 0.05, 0.01, 1.0};

    SUBCASE("no bonus reduces to psi1 - c*e") {
        const Contract contract{0.02, 0.0, 1.0};
        for (double e = 0.0; e <= 1.0; e += 0.1) {
            CHECK(expected_agent_payoff(e, contract, agent) ==
                  doctest::Approx(0.02 - 0.01 * e).epsilon(1e-15));
        }
    }

    SUBCASE("threshold exactly at the mean quality gives psi2/2") {
        const Contract contract{0.003, 0.008, 1.0};
        const double e = contract.psi3 / agent.a;  // (a*e - psi3)/sigma == 0
        CHECK(expected_agent_payoff(e, contract, agent) ==
              doctest::Approx(0.003 - 0.01 * e + 0.004).epsilon(1e-14));
    }

    SUBCASE("reference instance against the series oracle") {
        const double e = 0.5945;
        const double expected =
            0.001 - 0.01 * e +
            0.005 * oracles::series_normal_cdf((2.0 * e - 1.087) / 0.05);
        const double got = expected_agent_payoff(e, kReferenceContract, agent);
        CHECK(std::abs(got - expected) <= 1e-12);
        CHECK(got == doctest::Approx(-4.84e-5).epsilon(0.01));
    }

    SUBCASE("effort out of range is rejected") {
        const Contract contract{0.0, 0.01, 1.0};
        CHECK_THROWS_AS(expected_agent_payoff(-0.01, contract, agent),
                        std::invalid_argument);
        CHECK_THROWS_AS(expected_agent_payoff(1.01, contract, agent),
                        std::invalid_argument);
    }
}

TEST_CASE("stationary_candidates") {
    SUBCASE("no bonus leaves only the endpoints") {
        CHECK(stationary_candidates(Contract{0.01, 0.0, 1.0}, kReferenceAgent) ==
              std::vector<double>{0.0, 1.0});
    }

    SUBCASE("interior stationary point solves the first-order condition") {
        const auto candidates =
            stationary_candidates(kReferenceContract, kReferenceAgent);
        REQUIRE(candidates.size() == 3);
        // Independent root of phi(z) = c*sigma/(psi2*a) = 0.05 by bisection.
        double lo = 0.0, hi = 10.0;
        const double target = 0.01 * 0.05 / (0.005 * 2.0);
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (std_normal_pdf(mid) > target ? lo : hi) = mid;
        }
        const double zbar = 0.5 * (lo + hi);
        CHECK(zbar == doctest::Approx(2.038).epsilon(1e-3));
        CHECK(candidates[2] ==
              doctest::Approx((1.087 + 0.05 * zbar) / 2.0).epsilon(1e-9));
        CHECK(candidates[2] == doctest::Approx(0.5945).epsilon(1e-3));
    }

    SUBCASE("exact tangency of the first-order condition is excluded") {
        // a == 2 keeps psi2 * a == c * sigma * sqrt(2*pi) bit-exact.
        const AgentParams agent{2.0, 0.05, 0.01, 1.0};
        const double psi2 = agent.c * agent.sigma * kSqrt2Pi / agent.a;
        CHECK(stationary_candidates(Contract{0.0, psi2, 1.0}, agent) ==
              std::vector<double>{0.0, 1.0});
    }
}

TEST_CASE("best_response_effort") {
    SUBCASE("no bonus means no effort") {
        const EffortSolution s =
            best_response_effort(Contract{0.02, 0.0, 1.0}, kReferenceAgent);
        CHECK(s.effort == 0.0);
        CHECK(s.expected_payoff == 0.02);
    }

    SUBCASE("unreachable requirement means no effort") {
        const EffortSolution s =
            best_response_effort(Contract{0.0, 0.005, 10.0}, kReferenceAgent);
        CHECK(s.effort == 0.0);
    }

    SUBCASE("reference instance matches the dense grid oracle") {
        // With psi1 > 0 the fixed fee beats the (slightly negative) payoff at
        // the interior stationary point, so the global optimum is to shirk.
        const auto grid =
            oracles::grid_best_response(kReferenceContract, kReferenceAgent, 1000001);
        const EffortSolution s =
            best_response_effort(kReferenceContract, kReferenceAgent);
        CHECK(s.expected_payoff >= grid.payoff - 1e-8);
        CHECK(grid.effort == 0.0);
        CHECK(s.effort == 0.0);
        CHECK(s.expected_payoff == doctest::Approx(0.001).epsilon(1e-12));
    }

    SUBCASE("interior optimum when the fixed fee is zero") {
        const Contract contract{0.0, 0.0062, 1.087};
        const auto grid =
            oracles::grid_best_response(contract, kReferenceAgent, 1000001);
        const EffortSolution s = best_response_effort(contract, kReferenceAgent);
        CHECK(s.expected_payoff >= grid.payoff - 1e-8);
        CHECK(s.effort == doctest::Approx(grid.effort).epsilon(1e-4));
        CHECK(s.effort > 0.5);
    }

    SUBCASE("solution payoff is consistent with the payoff function") {
        const EffortSolution s =
            best_response_effort(kReferenceContract, kReferenceAgent);
        CHECK(s.expected_payoff ==
              expected_agent_payoff(s.effort, kReferenceContract, kReferenceAgent));
    }
}

TEST_CASE("best response is globally optimal on random instances") {
    const std::uint64_t master = 1001;
    for (int t = 0; t < 100; ++t) {
        AgentParams agent;
        agent.a = 0.5 + 2.5 * uniform_draw(master, t, 0);
        agent.sigma = 0.01 + 0.49 * uniform_draw(master, t, 1);
        agent.c = 0.001 + 0.099 * uniform_draw(master, t, 2);
        agent.r = 1.0;
        Contract contract;
        contract.psi1 = 0.1 * uniform_draw(master, t, 3);
        contract.psi2 = 0.1 * uniform_draw(master, t, 4);
        contract.psi3 = 2.0 * uniform_draw(master, t, 5);

        const auto grid = oracles::grid_best_response(contract, agent, 10001);
        const EffortSolution s = best_response_effort(contract, agent);
        CHECK(s.expected_payoff >= grid.payoff - 1e-8);
    }
}

TEST_CASE("best response effort is nondecreasing in the bonus") {
    const AgentParams agent{1.5, 0.1, 0.02, 1.0};
    double prev = -1.0;
    for (double psi2 = 0.0; psi2 <= 0.08; psi2 += 0.002) {
        const double e = best_response_effort(Contract{0.0, psi2, 0.95}, agent).effort;
        CHECK(e >= prev - 1e-6);
        prev = e;
    }
}

TEST_CASE("best response is invariant to joint money scaling") {
    const AgentParams agent{1.8, 0.08, 0.015, 1.0};
    const Contract contract{0.004, 0.02, 1.05};
    const double base = best_response_effort(contract, agent).effort;
    for (double lambda : {2.0, 0.5, 3.7, 100.0}) {
        AgentParams scaled_agent = agent;
        scaled_agent.c = lambda * agent.c;
        const Contract scaled{lambda * contract.psi1, lambda * contract.psi2,
                              contract.psi3};
        CHECK(std::abs(best_response_effort(scaled, scaled_agent).effort - base) <=
              1e-9);
    }
}

TEST_CASE("analytic expected payoff agrees with Monte Carlo") {
    const AgentParams agent{2.0, 0.05, 0.01, 1.0};
    const Contract contract{0.001, 0.005, 1.087};
    const double e = 0.5945;
    const McEstimate mc =
        simulate_expected_agent_payoff(e, contract, agent, 1000000, 7);
    const double analytic = expected_agent_payoff(e, contract, agent);
    CHECK(std::abs(analytic - mc.mean) <= 4.0 * mc.std_error);
}
