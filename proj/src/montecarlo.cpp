#include "reqcon/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "reqcon/agent.hpp"

namespace reqcon {

namespace {

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Neumaier-compensated accumulator; the reduction is order-independent to
// well below the 1e-12 contract.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Streaming mean / standard error with a constant-signal shortcut so that a
// constant integrand reports its value exactly with zero error.
struct Moments {
    CompensatedSum sx;
    CompensatedSum sxx;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::uint64_t n = 0;

    void add(double x) {
        sx.add(x);
        sxx.add(x * x);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        ++n;
    }

    McEstimate finish(std::uint64_t seed) const {
        McEstimate est;
        est.n_samples = n;
        est.seed = seed;
        if (lo == hi) {
            est.mean = lo;
            est.std_error = 0.0;
            return est;
        }
        const double s = sx.value();
        est.mean = s / static_cast<double>(n);
        const double nn = static_cast<double>(n);
        const double ss = std::max(0.0, sxx.value() - s * s / nn);
        est.std_error = std::sqrt(ss / (nn * (nn - 1.0)));
        return est;
    }
};

void require_samples(std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("need at least 2 samples");
}

}  // namespace

double uniform_draw(std::uint64_t seed, std::uint64_t sample, std::uint64_t dim) {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (sample * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
    h = mix64(h ^ (dim * 0x2545F4914F6CDD1DULL + 0x6A09E667F3BCC909ULL));
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

double normal_draw(std::uint64_t seed, std::uint64_t sample, std::uint64_t dim) {
    return inverse_normal_cdf(uniform_draw(seed, sample, dim));
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("inverse_normal_cdf needs p in (0, 1)");
    }
    if (p > 0.5) return -inverse_normal_cdf(1.0 - p);  // 1 - p is exact here

    // Acklam's rational approximation, then two Halley steps against the
    // erfc-based CDF push the result to full double precision.
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double err = std_normal_cdf(x) - p;
        const double u = err / std_normal_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

McEstimate simulate_expected_agent_payoff(double e, const Contract& contract,
                                          const AgentParams& agent,
                                          std::uint64_t n, std::uint64_t seed) {
    require_samples(n);
    Moments m;
    for (std::uint64_t k = 0; k < n; ++k) {
        const double xi = normal_draw(seed, k, 0);
        m.add(agent_realized_payoff(e, xi, contract, agent));
    }
    return m.finish(seed);
}

McEstimate simulate_expected_principal_payoff(const std::vector<Contract>& contracts,
                                              const Scenario& scenario,
                                              std::uint64_t n, std::uint64_t seed) {
    require_samples(n);
    if (contracts.size() != scenario.size()) {
        throw std::invalid_argument("one contract per agent required");
    }
    const std::size_t n_agents = scenario.size();
    std::vector<double> efforts(n_agents);
    for (std::size_t i = 0; i < n_agents; ++i) {
        efforts[i] = best_response_effort(contracts[i], scenario.agents[i]).effort;
    }

    Moments m;
    std::vector<double> qualities(n_agents);
    for (std::uint64_t k = 0; k < n; ++k) {
        double payments = 0.0;
        for (std::size_t i = 0; i < n_agents; ++i) {
            const double xi = normal_draw(seed, k, i);
            qualities[i] = quality(efforts[i], xi, scenario.agents[i]);
            payments += transfer(qualities[i], contracts[i]);
        }
        m.add(system_value(qualities, scenario) - payments);
    }
    return m.finish(seed);
}

McEstimate verify_phi_identity(double lambda, double sigma, std::uint64_t n,
                               std::uint64_t seed) {
    require_samples(n);
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    Moments m;
    for (std::uint64_t k = 0; k < n; ++k) {
        m.add(heaviside(lambda + sigma * normal_draw(seed, k, 0)));
    }
    return m.finish(seed);
}

}  // namespace reqcon
