#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pdk/core/constants.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"

namespace pdk {

struct PhaseOptions {
    double magnitude_floor = kPhaseFloor; // below this, arg() is undefined
    double jump_threshold = 0.5 * kPi;    // increments above this are inspected
    double dip_ratio = 1e-2;              // zero-crossing signature: |f| dips this deep
};

struct PhaseAnalysis {
    std::vector<double> phase;    // continuous-branch unwrapped arg, NaN below floor
    std::vector<bool> jump_after; // [i]: a spectral zero sits between samples i and i+1
    double accumulated = 0.0;     // total continuous winding across the grid
    int excluded_jumps = 0;
};

// Unwrap the spectral phase and accumulate its continuous winding.
//
// A response with an exact zero inside the grid (perfect-reflection frequency)
// flips sign there, so the sampled phase shows a jump of ~pi that carries no
// winding information.  Such increments are recognised by their size together
// with a deep local dip of |f|; the pi step is subtracted so the stored phase
// follows the continuous branch.  A large increment *without* the dip
// signature means the grid is too coarse to follow the phase and raises a
// numeric error.
inline PhaseAnalysis analyze_phase(const Sampled& f, const PhaseOptions& opt = {}) {
    const std::size_t n = f.size();
    if (n < 2) throw parameter_error("phase analysis needs at least two samples");

    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(f.values[i]);

    PhaseAnalysis out;
    out.phase.assign(n, std::numeric_limits<double>::quiet_NaN());
    out.jump_after.assign(n, false);

    bool have_prev = false;
    double prev_raw = 0.0;
    std::size_t prev_idx = 0;

    for (std::size_t i = 0; i < n; ++i) {
        if (mag[i] < opt.magnitude_floor) continue;
        const double raw = std::atan2(f.values[i].imag(), f.values[i].real());
        if (!have_prev) {
            out.phase[i] = raw;
        } else {
            double d = raw - prev_raw;
            while (d > kPi) d -= kTwoPi;
            while (d <= -kPi) d += kTwoPi;
            if (std::abs(d) > opt.jump_threshold) {
                double local_max = 0.0;
                const std::size_t lo = prev_idx > 10 ? prev_idx - 10 : 0;
                const std::size_t hi = std::min(n - 1, i + 10);
                for (std::size_t k = lo; k <= hi; ++k) local_max = std::max(local_max, mag[k]);
                double local_min = mag[prev_idx];
                for (std::size_t k = prev_idx; k <= i; ++k)
                    local_min = std::min(local_min, mag[k]);
                if (!(local_min < opt.dip_ratio * local_max))
                    throw numeric_error("phase increment exceeds threshold without a spectral "
                                        "zero signature: grid too coarse to unwrap");
                // Remove the sign-flip step, keep the small continuous remainder.
                d -= (d > 0.0 ? kPi : -kPi);
                out.jump_after[prev_idx] = true;
                ++out.excluded_jumps;
            }
            out.accumulated += d;
            out.phase[i] = out.phase[prev_idx] + d;
        }
        prev_raw = raw;
        prev_idx = i;
        have_prev = true;
    }
    return out;
}

// Total continuous transmission phase across the grid.
inline double accumulated_phase(const Sampled& f, const PhaseOptions& opt = {}) {
    return analyze_phase(f, opt).accumulated;
}

// Group delay  tau_g(w) = -d(phase)/dw  on a uniform grid.
//
// NaN marks frequencies where the delay is undefined: magnitude below the
// floor, within two samples of a spectral zero crossing, or inside a valid
// run too short for the five-point stencil.
inline std::vector<double> group_delay(const Sampled& f, const PhaseOptions& opt = {}) {
    if (!f.grid.is_uniform()) throw parameter_error("group delay requires a uniform grid");
    const PhaseAnalysis pa = analyze_phase(f, opt);
    const std::size_t n = f.size();
    std::vector<double> tau(n, std::numeric_limits<double>::quiet_NaN());

    std::vector<bool> usable(n);
    for (std::size_t i = 0; i < n; ++i) usable[i] = std::isfinite(pa.phase[i]);
    for (std::size_t i = 0; i < n; ++i) {
        if (!pa.jump_after[i]) continue;
        const std::size_t lo = i > 1 ? i - 2 : 0;
        const std::size_t hi = std::min(n - 1, i + 3);
        for (std::size_t k = lo; k <= hi; ++k) usable[k] = false;
    }

    std::size_t start = 0;
    while (start < n) {
        if (!usable[start]) { ++start; continue; }
        std::size_t end = start;
        while (end + 1 < n && usable[end + 1]) ++end;
        const std::size_t len = end - start + 1;
        if (len >= 5) {
            std::vector<double> seg(pa.phase.begin() + static_cast<long>(start),
                                    pa.phase.begin() + static_cast<long>(end + 1));
            std::vector<double> pts(f.grid.points().begin() + static_cast<long>(start),
                                    f.grid.points().begin() + static_cast<long>(end + 1));
            const std::vector<double> dphi = derivative(seg, Grid(std::move(pts)));
            for (std::size_t k = 0; k < len; ++k) tau[start + k] = -dphi[k];
        }
        start = end + 1;
    }
    return tau;
}

// Dispersion metric: integral of |d(tau_g)/dw| weighted by |f|^2.
// Regions where the delay is undefined (spectral zeros) carry negligible
// weight |f|^2 ~ 0 and are skipped.
inline double dispersion_metric(const Sampled& f, const PhaseOptions& opt = {}) {
    if (!f.grid.is_uniform())
        throw parameter_error("dispersion metric requires a uniform grid");
    const std::vector<double> tau = group_delay(f, opt);
    const std::size_t n = f.size();

    double total = 0.0;
    std::size_t start = 0;
    while (start < n) {
        if (!std::isfinite(tau[start])) { ++start; continue; }
        std::size_t end = start;
        while (end + 1 < n && std::isfinite(tau[end + 1])) ++end;
        const std::size_t len = end - start + 1;
        if (len >= 5) {
            std::vector<double> seg(tau.begin() + static_cast<long>(start),
                                    tau.begin() + static_cast<long>(end + 1));
            std::vector<double> pts(f.grid.points().begin() + static_cast<long>(start),
                                    f.grid.points().begin() + static_cast<long>(end + 1));
            Grid sub(std::move(pts));
            const std::vector<double> dtau = derivative(seg, sub);
            std::vector<double> integrand(len);
            for (std::size_t k = 0; k < len; ++k) {
                const double m = std::abs(f.values[start + k]);
                integrand[k] = std::abs(dtau[k]) * m * m;
            }
            total += integrate(integrand, sub);
        }
        start = end + 1;
    }
    return total;
}

} // namespace pdk
