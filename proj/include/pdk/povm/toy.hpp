#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pdk/core/constants.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/fourier.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"

namespace pdk {

// Detection probability of a narrowband spectral probe through the filter
// when the monitored continuum is only observed for a finite window tau_int:
// transform the filtered probe to the time domain, center the window on the
// intensity peak, and integrate |amplitude|^2 over it.  As tau_int grows the
// probability approaches int |T|^2 |probe|^2 dw (all of the transmitted
// light is eventually seen).
inline double toy_detection_probability(const SpectralFunction& transmission,
                                        double omega_probe, double tau_int,
                                        double probe_sigma) {
    if (tau_int <= 0.0) throw parameter_error("integration window must be positive");
    if (probe_sigma <= 0.0) throw parameter_error("probe width must be positive");
    if (!transmission.grid.is_uniform())
        throw parameter_error("finite-window weights require a uniform grid");
    if (omega_probe < transmission.grid.front() || omega_probe > transmission.grid.back())
        throw parameter_error("probe frequency lies outside the sampled band");

    const std::size_t n = transmission.size();
    // Normalized Gaussian probe |psi|^2 with spectral intensity width sigma.
    std::vector<Complex> filtered(n);
    const double norm = 1.0 / std::sqrt(probe_sigma * std::sqrt(kTwoPi));
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (transmission.grid[i] - omega_probe) / probe_sigma;
        const double probe = norm * std::exp(-0.25 * u * u);
        filtered[i] = probe * transmission.values[i];
    }

    const SpectralFunction filtered_fn(transmission.grid, std::move(filtered));
    const double dw = transmission.grid.step();
    const double dt = kTwoPi / (dw * static_cast<double>(n));
    const double t_start = -0.5 * dt * static_cast<double>(n - 1);
    const TemporalFunction signal = inverse_fourier_transform(filtered_fn, t_start);

    std::vector<double> intensity(n);
    std::size_t peak = 0;
    for (std::size_t i = 0; i < n; ++i) {
        intensity[i] = std::norm(signal.values[i]);
        if (intensity[i] > intensity[peak]) peak = i;
    }
    const double center = signal.grid[peak];
    const double lo = center - 0.5 * tau_int;
    const double hi = center + 0.5 * tau_int;

    double p = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = signal.grid[i], b = signal.grid[i + 1];
        if (b <= lo || a >= hi) continue;
        const double ca = std::max(a, lo), cb = std::min(b, hi);
        // Linear interpolation of the intensity across the clipped interval.
        const double h = b - a;
        const double ya = intensity[i] + (intensity[i + 1] - intensity[i]) * (ca - a) / h;
        const double yb = intensity[i] + (intensity[i + 1] - intensity[i]) * (cb - a) / h;
        p += 0.5 * (ya + yb) * (cb - ca);
    }
    return p;
}

// Diagonal weight function of the time-integrated click element.  In the
// long-window limit the element weighs each frequency by |T(w)|^2; a finite
// window is evaluated per frequency with a narrowband probe (width
// probe_sigma, default one part in 200 of the sampled span).
inline std::vector<double> toy_povm_weights(
    const SpectralFunction& transmission,
    double tau_int = std::numeric_limits<double>::infinity(), double probe_sigma = 0.0) {
    const std::size_t n = transmission.size();
    std::vector<double> weights(n);
    if (!std::isfinite(tau_int)) {
        for (std::size_t i = 0; i < n; ++i) weights[i] = std::norm(transmission.values[i]);
        return weights;
    }
    if (probe_sigma <= 0.0)
        probe_sigma = (transmission.grid.back() - transmission.grid.front()) / 200.0;
    for (std::size_t i = 0; i < n; ++i)
        weights[i] = toy_detection_probability(transmission, transmission.grid[i], tau_int,
                                               probe_sigma);
    return weights;
}

} // namespace pdk
