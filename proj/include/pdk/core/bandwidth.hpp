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

struct BandwidthOptions {
    bool tail_correction = true;
    // Ceiling on the estimated *uncorrected* residual relative to the total;
    // exceeding it raises a numeric (coverage) error.
    double tail_residual_tol = 1e-6;
};

struct BandwidthResult {
    double value = 0.0;      // effective bandwidth: (1/pi) integral of |T|^2
    double core = 0.0;       // on-grid part of the integral (before 1/pi)
    double tail_left = 0.0;  // extrapolated wing contributions (before 1/pi)
    double tail_right = 0.0;
    double residual_rel = 0.0; // estimated remaining relative error of the wings
};

namespace detail {

// Model the wing beyond the outermost sample as C/w^2 + D/w^3 (the generic
// far-field decay of a passive resonant response), fitted to the outermost two
// samples.  Returns {tail integral from the edge to infinity, residual scale}.
// x values are distances from w = 0 and must be positive and increasing.
inline std::pair<double, double> wing_integral(double x_prev, double y_prev,
                                               double x_edge, double y_edge) {
    if (y_edge <= 0.0) return {0.0, 0.0};
    if (!(x_edge > 0.0) || !(x_prev > 0.0) || !(x_edge > x_prev))
        return {0.0, std::numeric_limits<double>::infinity()};
    const double u_prev = y_prev * x_prev * x_prev;
    const double u_edge = y_edge * x_edge * x_edge;
    const double d_inv = 1.0 / x_prev - 1.0 / x_edge;
    const double D = (u_prev - u_edge) / d_inv;
    const double C = u_edge - D / x_edge;
    const double one_term = y_edge * x_edge;                   // pure C/w^2 model
    double two_term = C / x_edge + D / (2.0 * x_edge * x_edge);
    double residual = std::abs(two_term - one_term);
    if (two_term < 0.0) {
        residual += -two_term;
        two_term = 0.0;
    }
    return {two_term, residual};
}

} // namespace detail

// Effective bandwidth (1/pi) integral |T(w)|^2 dw over the whole axis.
//
// The on-grid part uses the trapezoid rule with one Richardson refinement on
// uniform grids.  Beyond the grid, both wings are extrapolated with a two-term
// asymptotic model; the difference between the one- and two-term wing models
// estimates the remaining error, and the call fails with a numeric error when
// that estimate exceeds tail_residual_tol relative to the total.
inline BandwidthResult spectral_bandwidth(const SpectralFunction& T,
                                          const BandwidthOptions& opt = {}) {
    const std::size_t n = T.size();
    if (n < 4) throw parameter_error("bandwidth needs at least four samples");

    std::vector<double> y(n);
    double y_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::abs(T.values[i]);
        y[i] = m * m;
        y_max = std::max(y_max, y[i]);
    }

    BandwidthResult res;
    res.core = integrate(y, T.grid);

    double residual = 0.0;
    if (opt.tail_correction && y_max > 0.0) {
        const double negligible = 1e-14 * y_max;
        // Right wing: positive distances from the origin.
        if (y[n - 1] > negligible) {
            const auto [tail, err] =
                detail::wing_integral(T.grid[n - 2], y[n - 2], T.grid[n - 1], y[n - 1]);
            res.tail_right = tail;
            residual += err;
        }
        // Left wing: mirror to positive axis.
        if (y[0] > negligible) {
            const auto [tail, err] =
                detail::wing_integral(-T.grid[1], y[1], -T.grid[0], y[0]);
            res.tail_left = tail;
            residual += err;
        }
    }

    const double total = res.core + res.tail_left + res.tail_right;
    if (total <= 0.0) throw numeric_error("bandwidth integrand is identically zero");
    res.residual_rel = residual / total;
    if (!std::isfinite(res.residual_rel) || res.residual_rel > opt.tail_residual_tol)
        throw numeric_error("spectral grid does not cover the response: wing residual " +
                            std::to_string(res.residual_rel) + " exceeds tolerance");
    res.value = total / kPi;
    return res;
}

} // namespace pdk
