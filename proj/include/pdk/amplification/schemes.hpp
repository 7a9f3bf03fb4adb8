#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "pdk/core/errors.hpp"

namespace pdk {

// Photon-number amplification strategies for the trigger stage.
//
//   phase_insensitive      single nondegenerate amplifier, gain G
//   phase_sensitive        single degenerate amplifier, gain G
//   single_mode            ideal number multiplier, one readout mode
//   multimode              ideal number multiplier fanned out over G modes
//   multi_step_single_mode cascade of log_g(G) multipliers, one mode each
//   multi_step_multi_mode  cascade of log_g(G) multipliers, fan-out g each
enum class AmplifierScheme {
    phase_insensitive,
    phase_sensitive,
    single_mode,
    multimode,
    multi_step_single_mode,
    multi_step_multi_mode,
};

inline std::string to_string(AmplifierScheme s) {
    switch (s) {
        case AmplifierScheme::phase_insensitive: return "phase-insensitive";
        case AmplifierScheme::phase_sensitive: return "phase-sensitive";
        case AmplifierScheme::single_mode: return "single-mode";
        case AmplifierScheme::multimode: return "multimode";
        case AmplifierScheme::multi_step_single_mode: return "multi-step-single-mode";
        case AmplifierScheme::multi_step_multi_mode: return "multi-step-multi-mode";
    }
    throw parameter_error("unknown amplifier scheme");
}

inline AmplifierScheme scheme_from_string(const std::string& name) {
    if (name == "phase-insensitive") return AmplifierScheme::phase_insensitive;
    if (name == "phase-sensitive") return AmplifierScheme::phase_sensitive;
    if (name == "single-mode") return AmplifierScheme::single_mode;
    if (name == "multimode") return AmplifierScheme::multimode;
    if (name == "multi-step-single-mode") return AmplifierScheme::multi_step_single_mode;
    if (name == "multi-step-multi-mode") return AmplifierScheme::multi_step_multi_mode;
    throw spec_error("unknown amplifier scheme '" + name + "'");
}

inline bool is_multi_step(AmplifierScheme s) {
    return s == AmplifierScheme::multi_step_single_mode ||
           s == AmplifierScheme::multi_step_multi_mode;
}

// Operating point of an amplification chain.  The signal mode enters with
// mean photon number `signal_mean` and variance `signal_variance`; the added
// noise per readout mode has mean `noise_mean` and variance `noise_variance`
// (for the amplifying schemes this is the idler / environment occupation, for
// the multiplying schemes the per-mode trigger noise).
struct AmplifierInput {
    double gain = 2.0;            // total photon-number gain G
    double step_gain = 2.0;       // per-step gain g (multi-step schemes)
    double signal_mean = 1.0;     // n_a
    double signal_variance = 0.0; // (Delta n_a)^2
    double noise_mean = 0.0;      // n_b
    double noise_variance = 0.0;  // (Delta n_b)^2

    void validate(AmplifierScheme scheme) const {
        if (gain < 1.0) throw parameter_error("gain must be at least one");
        if (signal_mean < 0.0 || noise_mean < 0.0)
            throw parameter_error("mean photon numbers must be non-negative");
        if (signal_variance < 0.0 || noise_variance < 0.0)
            throw parameter_error("variances must be non-negative");
        if (is_multi_step(scheme)) {
            if (step_gain <= 1.0)
                throw parameter_error("per-step gain must exceed one");
            if (gain < step_gain)
                throw parameter_error("total gain must be at least the per-step gain");
        }
    }
};

// Number of cascade steps N with g^N = G (nearest integer; the variance
// formulas below use G and g directly and hold for any consistent pair).
inline int amplifier_steps(const AmplifierInput& in) {
    return static_cast<int>(std::llround(std::log(in.gain) / std::log(in.step_gain)));
}

// Mean readout photon number contributed by the amplified signal.
inline double amplified_signal_mean(const AmplifierInput& in) {
    return in.gain * in.signal_mean;
}

// Variance of the readout photon number for each scheme.
inline double output_variance(AmplifierScheme scheme, const AmplifierInput& in) {
    in.validate(scheme);
    const double G = in.gain;
    const double g = in.step_gain;
    const double na = in.signal_mean;
    const double va = in.signal_variance;
    const double nb = in.noise_mean;
    const double vb = in.noise_variance;
    switch (scheme) {
        case AmplifierScheme::phase_insensitive:
            return G * G * va + (G - 1.0) * (G - 1.0) * vb +
                   G * (G - 1.0) * (2.0 * na * nb + na + nb + 1.0);
        case AmplifierScheme::phase_sensitive:
            return (6.0 * G * (G - 1.0) + 1.0) * va +
                   2.0 * G * (G - 1.0) * (na * na + na + 1.0);
        case AmplifierScheme::single_mode:
            return vb + G * G * va;
        case AmplifierScheme::multimode:
            return G * vb + G * G * va;
        case AmplifierScheme::multi_step_single_mode:
            return (G * G - 1.0) / (g * g - 1.0) * vb + G * G * va;
        case AmplifierScheme::multi_step_multi_mode:
            return G * (G - 1.0) / (g - 1.0) * vb + G * G * va;
    }
    throw parameter_error("unknown amplifier scheme");
}

// Signal-to-noise ratio G n_a / sqrt(output variance) at the operating point.
// A noiseless readout (zero variance) returns +infinity.
inline double signal_to_noise(AmplifierScheme scheme, const AmplifierInput& in) {
    const double variance = output_variance(scheme, in);
    const double signal = amplified_signal_mean(in);
    if (variance <= 0.0) return std::numeric_limits<double>::infinity();
    return signal / std::sqrt(variance);
}

// Closed-form SNR limits for a noiseless input signal (signal_variance = 0).
// The amplifying schemes saturate a gain-independent bound as G grows; unit
// gain is noiseless and returns +infinity.
inline double snr_bound(AmplifierScheme scheme, const AmplifierInput& in) {
    in.validate(scheme);
    const double G = in.gain;
    const double g = in.step_gain;
    const double na = in.signal_mean;
    const double db = std::sqrt(in.noise_variance);
    const double inf = std::numeric_limits<double>::infinity();
    switch (scheme) {
        case AmplifierScheme::phase_insensitive:
            if (G == 1.0) return inf;
            return G / (G - 1.0) * na / db;
        case AmplifierScheme::phase_sensitive:
            if (G == 1.0) return inf;
            return (2.0 * G - 1.0) / std::sqrt(2.0 * G * (G - 1.0)) * na;
        case AmplifierScheme::single_mode:
            return G * na / db;
        case AmplifierScheme::multimode:
            return std::sqrt(G) * na / db;
        case AmplifierScheme::multi_step_single_mode:
            if (G == 1.0) return inf;
            return G * std::sqrt((g * g - 1.0) / (G * G - 1.0)) * na / db;
        case AmplifierScheme::multi_step_multi_mode:
            if (G == 1.0) return inf;
            return std::sqrt(G * (g - 1.0) / (G - 1.0)) * na / db;
    }
    throw parameter_error("unknown amplifier scheme");
}

} // namespace pdk
