#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pdk/core/errors.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/network/transfer.hpp"
#include "pdk/povm/detector.hpp"

namespace pdk {

struct DesignOptions {
    double magnitude_floor = 1e-3; // minimum usable |T| inside the target support
    double support_floor = 1e-8;   // relative |f|^2 level defining the target support
};

namespace detail {

// Parabolic refinement of a sampled minimum of |T|^2: near a transmission
// zero the intensity is quadratic, so the vertex lands on the zero.
inline double refine_zero(const Grid& grid, const std::vector<double>& t2, std::size_t i) {
    if (i == 0 || i + 1 >= grid.size()) return grid[i];
    const double y0 = t2[i - 1], y1 = t2[i], y2 = t2[i + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom <= 0.0) return grid[i];
    double shift = 0.5 * (y0 - y2) / denom;
    if (shift > 1.0) shift = 1.0;
    if (shift < -1.0) shift = -1.0;
    return grid[i] + shift * (grid[i + 1] - grid[i]);
}

} // namespace detail

// Choose the trigger spectrum that makes the detector project exactly onto
// the target input spectrum f at the given detection time:
//   Psi(w) = conj(f(w)) e^{i w T} / T(w),  renormalized.
// The compensation 1/T(w) fails where the filter has a transmission zero
// inside the target support (a photonic band gap); that raises an
// infeasibility error naming the zero's frequency.
inline SpectralFunction mode_matched_design(const SpectralFunction& target,
                                            const TransferResult& filter,
                                            double detection_time,
                                            const DesignOptions& opt = {}) {
    detail::require_same_grid(target.grid, filter.grid, "target spectrum and filter");
    const std::size_t n = target.size();
    if (n < 3) throw parameter_error("design needs at least three grid points");

    std::vector<double> density(n), t2(n);
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        density[i] = std::norm(target.values[i]);
        t2[i] = std::norm(filter.T[i]);
        peak = std::max(peak, density[i]);
    }
    if (peak <= 0.0) throw parameter_error("target spectrum is identically zero");

    // Scan the support for a transmission dead zone.
    const double floor2 = opt.magnitude_floor * opt.magnitude_floor;
    bool gap = false;
    std::size_t gap_index = 0;
    double gap_t2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (density[i] < opt.support_floor * peak) continue;
        if (t2[i] < floor2 && (!gap || t2[i] < gap_t2)) {
            gap = true;
            gap_index = i;
            gap_t2 = t2[i];
        }
    }
    if (gap) {
        const double omega_zero = detail::refine_zero(target.grid, t2, gap_index);
        throw infeasible_error("transmission vanishes inside the target support near omega = " +
                                   std::to_string(omega_zero) +
                                   "; the lost band cannot be compensated",
                               omega_zero);
    }

    SpectralFunction design;
    design.grid = target.grid;
    design.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (density[i] < opt.support_floor * peak) {
            design.values[i] = Complex(0.0, 0.0);
            continue;
        }
        const double w = target.grid[i];
        design.values[i] = std::conj(target.values[i]) *
                           std::exp(Complex(0.0, w * detection_time)) / filter.T[i];
    }
    const double norm = detail::squared_norm(design);
    if (norm <= 0.0) throw numeric_error("designed trigger spectrum has zero mass");
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& v : design.values) v *= scale;
    return design;
}

} // namespace pdk
