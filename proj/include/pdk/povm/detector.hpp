#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "pdk/core/errors.hpp"
#include "pdk/core/fourier.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/network/transfer.hpp"
#include "pdk/wavepacket/forward.hpp"

namespace pdk {

namespace detail {

inline void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (a.size() != b.size())
        throw parameter_error(std::string(what) + " must share a grid (sizes differ)");
    const double scale = 1.0 + std::abs(a.front()) + std::abs(a.back());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-9 * scale)
            throw parameter_error(std::string(what) + " must share a grid");
}

inline double squared_norm(const Sampled& f) {
    std::vector<double> density(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) density[i] = std::norm(f.values[i]);
    return integrate(density, f.grid);
}

} // namespace detail

// Readout counts that register as a click: either every k >= k_min
// (threshold mode, `values` empty) or an explicit finite set.
struct ClickSet {
    long long k_min = 1;
    std::vector<long long> values;

    static ClickSet at_least(long long k) { return ClickSet{k, {}}; }
    static ClickSet exactly(std::vector<long long> ks) { return ClickSet{1, std::move(ks)}; }

    bool threshold() const { return values.empty(); }

    void validate() const {
        if (threshold()) {
            if (k_min < 1) throw parameter_error("click threshold must be at least one");
            return;
        }
        for (long long k : values)
            if (k < 1) throw parameter_error("click counts must be at least one");
    }

    bool contains(long long k) const {
        if (threshold()) return k >= k_min;
        return std::find(values.begin(), values.end(), k) != values.end();
    }

    // Smallest registering count (first n with any click weight).
    long long smallest() const {
        if (threshold()) return k_min;
        return *std::min_element(values.begin(), values.end());
    }
};

// Trigger-mode transmission/reflection overlaps through the filter network,
//   tau^2 = int |Psi(w)|^2 |T(w)|^2 dw,   rho^2 = int |Psi(w)|^2 |R(w)|^2 dw,
// with the renormalized filtered states.  For a lossless filter
// tau^2 + rho^2 = 1; side channels leave a deficit.
struct ModeOverlap {
    double tau = 1.0;
    double rho = 0.0;
    SpectralFunction transmitted; // T Psi / tau
    SpectralFunction reflected;   // R Psi / rho (empty when rho is negligible)
};

inline ModeOverlap mode_overlap(const SpectralFunction& trigger, const TransferResult& filter) {
    detail::require_same_grid(trigger.grid, filter.grid, "trigger spectrum and filter");
    const double norm = detail::squared_norm(trigger);
    if (std::abs(norm - 1.0) > 1e-6)
        throw parameter_error("trigger spectrum must be L2-normalized");

    const std::size_t n = trigger.size();
    std::vector<double> dens_t(n), dens_r(n);
    for (std::size_t i = 0; i < n; ++i) {
        dens_t[i] = std::norm(trigger.values[i] * filter.T[i]);
        dens_r[i] = std::norm(trigger.values[i] * filter.R[i]);
    }
    ModeOverlap out;
    const double tau2 = integrate(dens_t, trigger.grid);
    const double rho2 = integrate(dens_r, trigger.grid);
    if (tau2 < 1e-15)
        throw infeasible_error("the network blocks the trigger spectrum entirely");
    out.tau = std::sqrt(tau2);
    out.rho = std::sqrt(std::max(rho2, 0.0));

    out.transmitted.grid = trigger.grid;
    out.transmitted.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.transmitted.values[i] = trigger.values[i] * filter.T[i] / out.tau;
    if (out.rho > 1e-12) {
        out.reflected.grid = trigger.grid;
        out.reflected.values.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.reflected.values[i] = trigger.values[i] * filter.R[i] / out.rho;
    }
    return out;
}

// Spectral amplitude of the temporal mode the trigger absorbs: the Fourier
// transform of the conjugated retrodictive amplitude, L2-normalized.
inline SpectralFunction trigger_spectrum(const RetrodictiveAmplitude& amplitude) {
    TemporalFunction mode;
    mode.grid = amplitude.psi_star.grid;
    mode.values.resize(amplitude.psi_star.size());
    for (std::size_t i = 0; i < mode.values.size(); ++i)
        mode.values[i] = std::conj(amplitude.psi_star.values[i]);
    SpectralFunction spectrum = fourier_transform(mode);
    const double norm = detail::squared_norm(spectrum);
    if (norm <= 0.0) throw numeric_error("trigger mode has zero spectral mass");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : spectrum.values) v *= scale;
    return spectrum;
}

// Full detector description: readout efficiency and click set, amplification
// gain, thermal occupations of the readout target mode (n_bar) and of the
// internal continuum seen by the trigger (n_bar'), the trigger-filter
// overlaps, and the projected spectral state the element detects.
struct DetectorSpec {
    double eta = 1.0;            // readout efficiency per excitation
    ClickSet clicks;             // registering readout counts
    long long gain = 1;          // excitations produced per trigger quantum
    double n_bar_readout = 0.0;  // thermal occupation of the readout mode
    double n_bar_trigger = 0.0;  // thermal occupation seen by the trigger
    double tau = 1.0;            // trigger transmission overlap
    double rho = 0.0;            // trigger reflection overlap
    double window_weight = 1.0;  // finite on-time subnormalization of the trigger
    double detection_time = 0.0; // click time stamp carried by the projected state
    SpectralFunction state;      // projected spectral state (optional for weight-only work)

    void validate() const {
        clicks.validate();
        if (eta < 0.0 || eta > 1.0) throw parameter_error("efficiency must lie in [0, 1]");
        if (gain < 1) throw parameter_error("gain must be a positive integer");
        if (n_bar_readout < 0.0 || n_bar_trigger < 0.0)
            throw parameter_error("thermal occupations must be non-negative");
        if (tau < 0.0 || tau > 1.0 || rho < 0.0 || rho > 1.0)
            throw parameter_error("overlaps must lie in [0, 1]");
        if (tau * tau + rho * rho > 1.0 + 1e-8)
            throw parameter_error("overlaps exceed unity: tau^2 + rho^2 > 1");
        if (window_weight < 0.0 || window_weight > 1.0 + 1e-9)
            throw parameter_error("window weight must lie in [0, 1]");
    }
};

// Assemble a detector description from its physical ingredients.  The
// projected state is the conjugated, click-time-stamped filtered trigger
// mode: detecting an input spectrum f means overlapping f against exactly
// this function.
inline DetectorSpec make_detector(double eta, ClickSet clicks, long long gain,
                                  double n_bar_readout, double n_bar_trigger,
                                  const SpectralFunction& trigger, const TransferResult& filter,
                                  double window_weight = 1.0, double detection_time = 0.0) {
    DetectorSpec spec;
    spec.eta = eta;
    spec.clicks = std::move(clicks);
    spec.gain = gain;
    spec.n_bar_readout = n_bar_readout;
    spec.n_bar_trigger = n_bar_trigger;
    spec.window_weight = window_weight;
    spec.detection_time = detection_time;

    const ModeOverlap overlap = mode_overlap(trigger, filter);
    spec.tau = overlap.tau;
    spec.rho = overlap.rho;
    spec.state.grid = overlap.transmitted.grid;
    spec.state.values.resize(overlap.transmitted.size());
    for (std::size_t i = 0; i < spec.state.values.size(); ++i) {
        const double w = spec.state.grid[i];
        spec.state.values[i] = std::conj(overlap.transmitted.values[i]) *
                               std::exp(Complex(0.0, w * detection_time));
    }
    spec.validate();
    return spec;
}

} // namespace pdk
