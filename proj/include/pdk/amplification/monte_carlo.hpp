#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pdk/amplification/schemes.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/rng.hpp"

namespace pdk {

struct MonteCarloResult {
    double mean = 0.0;            // sample mean of the readout count
    double variance = 0.0;        // unbiased sample variance
    double variance_stderr = 0.0; // standard error of the sample variance
    double fourth_moment = 0.0;   // central fourth sample moment
    std::size_t samples = 0;
};

namespace detail {

inline void require_integer(double x, const char* what) {
    if (std::abs(x - std::llround(x)) > 1e-9 * (1.0 + std::abs(x)))
        throw parameter_error(std::string(what) + " must be an integer for simulation");
}

} // namespace detail

// Stochastic readout of the number-multiplying schemes: the deterministic
// amplified signal G n_a plus thermal noise drawn per readout mode, weighted
// by the gain it still traverses.  The amplifying (phase-insensitive /
// phase-sensitive) schemes evolve amplitudes rather than counts and are not
// covered.  Identical seeds give identical results.
inline MonteCarloResult monte_carlo_readout(AmplifierScheme scheme, const AmplifierInput& in,
                                            std::size_t samples, std::uint64_t seed) {
    in.validate(scheme);
    if (samples < 2) throw parameter_error("need at least two samples");
    if (scheme == AmplifierScheme::phase_insensitive ||
        scheme == AmplifierScheme::phase_sensitive)
        throw parameter_error("Monte-Carlo validation covers the number-multiplying schemes");

    // Per-sample noise draws: weight applied to each independent thermal mode.
    std::vector<double> weights;
    const double G = in.gain;
    const double g = in.step_gain;
    switch (scheme) {
        case AmplifierScheme::single_mode:
            weights.push_back(1.0);
            break;
        case AmplifierScheme::multimode: {
            detail::require_integer(G, "multimode gain");
            weights.assign(static_cast<std::size_t>(std::llround(G)), 1.0);
            break;
        }
        case AmplifierScheme::multi_step_single_mode: {
            const int steps = amplifier_steps(in);
            if (std::abs(std::pow(g, steps) - G) > 1e-6 * G)
                throw parameter_error("total gain must be a power of the per-step gain");
            for (int j = 1; j <= steps; ++j) weights.push_back(std::pow(g, steps - j));
            break;
        }
        case AmplifierScheme::multi_step_multi_mode: {
            detail::require_integer(g, "per-step gain");
            const int steps = amplifier_steps(in);
            if (std::abs(std::pow(g, steps) - G) > 1e-6 * G)
                throw parameter_error("total gain must be a power of the per-step gain");
            for (int j = 1; j <= steps; ++j) {
                const auto modes = static_cast<std::size_t>(std::llround(std::pow(g, j)));
                const double w = std::pow(g, steps - j);
                weights.insert(weights.end(), modes, w);
            }
            break;
        }
        default:
            throw parameter_error("unknown amplifier scheme");
    }
    if (weights.size() > 1000000)
        throw parameter_error("fan-out too large to simulate");

    Rng rng(seed);
    const double signal = amplified_signal_mean(in);
    std::vector<double> counts(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        double x = signal;
        for (double w : weights) x += w * static_cast<double>(rng.thermal(in.noise_mean));
        counts[s] = x;
    }

    MonteCarloResult result;
    result.samples = samples;
    double sum = 0.0;
    for (double x : counts) sum += x;
    result.mean = sum / static_cast<double>(samples);
    double m2 = 0.0, m4 = 0.0;
    for (double x : counts) {
        const double d = x - result.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const auto n = static_cast<double>(samples);
    result.variance = m2 / (n - 1.0);
    result.fourth_moment = m4 / n;
    const double spread = result.fourth_moment - result.variance * result.variance;
    result.variance_stderr = spread > 0.0 ? std::sqrt(spread / n) : 0.0;
    return result;
}

} // namespace pdk
