#pragma once

#include <cmath>
#include <cstdint>

#include "pdk/core/errors.hpp"
#include "pdk/core/rng.hpp"

namespace pdk {

// Two-detector estimation of a weak secondary emitter: intensity fraction
// eps of the light lands on detector 2, so the click probabilities are
//   P1 = eta / (1 + eps),   P2 = eta * eps / (1 + eps),
// and the click-count ratio N2/N1 estimates eps independently of eta.
inline double super_resolution_p1(double epsilon, double eta) {
    return eta / (1.0 + epsilon);
}

inline double super_resolution_p2(double epsilon, double eta) {
    return eta * epsilon / (1.0 + epsilon);
}

struct SuperResolutionResult {
    double epsilon_hat = 0.0;
    double stderr_est = 0.0; // delta-method standard error from observed counts
    long long n1 = 0;
    long long n2 = 0;
    double p1 = 0.0; // analytic click probabilities
    double p2 = 0.0;
    std::size_t trials = 0;
};

inline SuperResolutionResult super_resolution_estimate(double epsilon, double eta,
                                                       std::size_t trials,
                                                       std::uint64_t seed) {
    if (epsilon < 0.0 || epsilon >= 1.0)
        throw parameter_error("emitter fraction must lie in [0, 1)");
    if (eta <= 0.0 || eta > 1.0) throw parameter_error("efficiency must lie in (0, 1]");
    if (trials < 10000) throw parameter_error("need at least 10000 trials");

    SuperResolutionResult result;
    result.trials = trials;
    result.p1 = super_resolution_p1(epsilon, eta);
    result.p2 = super_resolution_p2(epsilon, eta);

    Rng rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        if (rng.bernoulli(result.p1)) ++result.n1;
        if (rng.bernoulli(result.p2)) ++result.n2;
    }
    if (result.n1 == 0) throw numeric_error("no clicks on the primary detector");

    result.epsilon_hat = static_cast<double>(result.n2) / static_cast<double>(result.n1);
    if (result.n2 > 0) {
        const auto n = static_cast<double>(trials);
        const double p1_hat = static_cast<double>(result.n1) / n;
        const double p2_hat = static_cast<double>(result.n2) / n;
        // Var(N2/N1) by the delta method for independent binomial counts.
        result.stderr_est = result.epsilon_hat *
                            std::sqrt((1.0 - p1_hat) / (n * p1_hat) +
                                      (1.0 - p2_hat) / (n * p2_hat));
    }
    return result;
}

} // namespace pdk
