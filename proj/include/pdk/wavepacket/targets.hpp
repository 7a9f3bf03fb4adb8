#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pdk/core/constants.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/wavepacket/types.hpp"

namespace pdk {

// Gaussian wavepacket of temporal intensity width sigma, centred at t0, with
// carrier detuning omega0 (linear phase, so delta(t) = omega0):
//   A(t) = (2 pi sigma^2)^(-1/4) exp(-(t - t0)^2 / (4 sigma^2)),  phi = omega0 t.
inline TargetWavepacket gaussian_target(double sigma, double t0, double omega0,
                                        const Grid& grid) {
    if (sigma <= 0.0) throw parameter_error("width must be positive");
    TargetWavepacket out;
    out.grid = grid;
    out.amplitude.resize(grid.size());
    out.phase.resize(grid.size());
    const double norm = std::pow(2.0 * kPi * sigma * sigma, -0.25);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid[i] - t0;
        out.amplitude[i] = norm * std::exp(-u * u / (4.0 * sigma * sigma));
        out.phase[i] = omega0 * grid[i];
    }
    return out;
}

// Closed-form emission rate that produces the Gaussian target by time T:
//   kappa(t) = exp(-(t-t0)^2/(2 sigma^2)) /
//              ( sqrt(2 pi sigma^2) (1 + erf((t0-T)/(sqrt2 sigma))/2
//                                      - erf((t0-t)/(sqrt2 sigma))/2 ) ).
inline double gaussian_reference_kappa(double sigma, double t0, double T, double t) {
    const double s2 = std::sqrt(2.0) * sigma;
    const double den = 1.0 + 0.5 * std::erf((t0 - T) / s2) - 0.5 * std::erf((t0 - t) / s2);
    const double num = std::exp(-(t - t0) * (t - t0) / (2.0 * sigma * sigma)) /
                       std::sqrt(2.0 * kPi * sigma * sigma);
    return num / den;
}

// Probability mass of the Gaussian captured by a window ending at T.
inline double gaussian_window_weight(double sigma, double t0, double T) {
    return 0.5 + 0.5 * std::erf((T - t0) / (std::sqrt(2.0) * sigma));
}

// Power-law ramp kappa(t) = kappa0 ((T - t)/sigma)^n on the window (T = last
// grid point), with zero detuning.
inline CouplingSchedule polynomial_schedule(double kappa0, int n, double sigma,
                                            const Grid& grid) {
    if (kappa0 < 0.0) throw parameter_error("rate scale must be non-negative");
    if (n < 0) throw parameter_error("polynomial order must be non-negative");
    if (sigma <= 0.0) throw parameter_error("time scale must be positive");
    CouplingSchedule sched;
    sched.grid = grid;
    sched.kappa.resize(grid.size());
    sched.delta.assign(grid.size(), 0.0);
    const double T = grid.back();
    for (std::size_t i = 0; i < grid.size(); ++i)
        sched.kappa[i] = kappa0 * std::pow((T - grid[i]) / sigma, n);
    return sched;
}

// Emittable stand-in for the first excited temporal mode, orthogonal to the
// base Gaussian yet with a smooth non-negative amplitude:
//   1. take the first-order Hermite-Gaussian  u * exp(-u^2/(4 sigma^2)),
//      split it at the centre t0 and push the halves apart by the dead-zone
//      half-width z;
//   2. keep |amplitude| and encode the centre sign flip as a pi phase step
//      at t0;
//   3. smooth amplitude and phase with a triangular kernel of full width s;
//   4. renormalize to unit mass on the grid.
// Orthogonality to the base Gaussian is exact when s <= z: the smoothed phase
// ramp (support |t - t0| <= s/2) and the smoothed amplitude (support
// |t - t0| >= z - s/2) never overlap, so the antisymmetry argument applies
// unperturbed.  Higher orders would need interior phase ramps that overlap
// the amplitude and lose exact orthogonality, so they are rejected.
inline TargetWavepacket build_orthogonal_pulse(double sigma, double t0, int order,
                                               double z, double s, const Grid& grid) {
    if (sigma <= 0.0) throw parameter_error("width must be positive");
    if (order != 1)
        throw parameter_error("only the first-order pulse construction is supported");
    if (z < 0.0 || s < 0.0) throw parameter_error("dead zone and smoothing must be non-negative");
    if (z < s) throw parameter_error("dead-zone half-width must be at least the smoothing width");
    if (!grid.is_uniform()) throw parameter_error("pulse construction requires a uniform grid");

    const std::size_t n = grid.size();
    std::vector<double> amp(n, 0.0);
    std::vector<double> phase(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = grid[i] - t0;
        if (std::abs(u) > z) {
            const double v = (u > 0.0 ? u - z : u + z);
            amp[i] = std::abs(v) * std::exp(-v * v / (4.0 * sigma * sigma));
        }
        phase[i] = (u > 0.0) ? kPi : 0.0;
    }

    // Triangular smoothing kernel of full width s, unit discrete weight.
    if (s > 0.0) {
        const double h = grid.step();
        const long half = static_cast<long>(std::floor(0.5 * s / h));
        if (half > 0) {
            std::vector<double> kert(2 * half + 1);
            double wsum = 0.0;
            for (long j = -half; j <= half; ++j) {
                const double u = static_cast<double>(j) * h;
                kert[j + half] = 1.0 - 2.0 * std::abs(u) / s;
                wsum += kert[j + half];
            }
            for (double& w : kert) w /= wsum;
            auto convolve = [&](const std::vector<double>& src) {
                std::vector<double> dst(n, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    double acc = 0.0;
                    for (long j = -half; j <= half; ++j) {
                        long idx = static_cast<long>(i) + j;
                        if (idx < 0) idx = 0;
                        if (idx >= static_cast<long>(n)) idx = static_cast<long>(n) - 1;
                        acc += kert[j + half] * src[idx];
                    }
                    dst[i] = acc;
                }
                return dst;
            };
            amp = convolve(amp);
            phase = convolve(phase);
        }
    }

    // Renormalize to unit mass on the grid.
    std::vector<double> a2(n);
    for (std::size_t i = 0; i < n; ++i) a2[i] = amp[i] * amp[i];
    const double mass = integrate(a2, grid);
    if (mass <= 0.0) throw numeric_error("pulse construction produced an empty amplitude");
    const double scale = 1.0 / std::sqrt(mass);
    for (double& a : amp) a *= scale;

    TargetWavepacket out;
    out.grid = grid;
    out.amplitude = std::move(amp);
    out.phase = std::move(phase);
    return out;
}

} // namespace pdk
