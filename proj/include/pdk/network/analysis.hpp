#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "pdk/core/errors.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/network/transfer.hpp"

namespace pdk {

struct TransmissionPeak {
    double omega = 0.0;
    double t_squared = 0.0;
};

struct PeakSearchOptions {
    double threshold = 1.0 - 1e-6; // |T|^2 at or above this counts as perfect
    int refine_iterations = 80;    // golden-section steps per bracketed maximum
};

namespace detail {

// Golden-section maximisation of fn on [lo, hi].
inline TransmissionPeak refine_maximum(const std::function<double(double)>& fn, double lo,
                                       double hi, int iterations) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    for (int it = 0; it < iterations && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = fn(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = fn(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, fn(xm)};
}

} // namespace detail

// Locate perfect-transmission frequencies by bracketing every local maximum of
// the sampled |T|^2 and refining it against the supplied evaluator
// (t2_of(w) = |T(w)|^2).  Returns the refined maxima whose height reaches the
// threshold.
inline std::vector<TransmissionPeak> find_perfect_transmission(
    const TransferResult& result, const std::function<double(double)>& t2_of,
    const PeakSearchOptions& opt = {}) {
    std::vector<TransmissionPeak> peaks;
    const std::size_t n = result.grid.size();
    if (n < 3) return peaks;
    std::vector<double> t2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::abs(result.T[i]);
        t2[i] = m * m;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (t2[i] >= t2[i - 1] && t2[i] > t2[i + 1]) {
            const TransmissionPeak p =
                detail::refine_maximum(t2_of, result.grid[i - 1], result.grid[i + 1],
                                       opt.refine_iterations);
            if (p.t_squared >= opt.threshold) peaks.push_back(p);
        }
    }
    return peaks;
}

// Grid-only variant: refines each bracketed maximum with a parabola through
// the three samples (no evaluator available, so heights are estimates).
inline std::vector<TransmissionPeak> find_perfect_transmission(
    const TransferResult& result, const PeakSearchOptions& opt = {}) {
    std::vector<TransmissionPeak> peaks;
    const std::size_t n = result.grid.size();
    if (n < 3) return peaks;
    std::vector<double> t2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::abs(result.T[i]);
        t2[i] = m * m;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (t2[i] >= t2[i - 1] && t2[i] > t2[i + 1]) {
            const double ym = t2[i - 1], y0 = t2[i], yp = t2[i + 1];
            const double denom = ym - 2.0 * y0 + yp;
            double shift = 0.0, height = y0;
            if (denom < 0.0) {
                shift = 0.5 * (ym - yp) / denom;
                height = y0 - 0.25 * (ym - yp) * shift;
            }
            if (height >= opt.threshold) {
                const double h = result.grid[i + 1] - result.grid[i];
                peaks.push_back({result.grid[i] + shift * h, height});
            }
        }
    }
    return peaks;
}

struct TwoStateDesign {
    double omega_star = 0.0; // operating frequency with |T| = 1
    double g12 = 0.0;        // required coupling rate
};

// For a two-state chain (rates gamma and Gamma, detunings w1, w2), choose the
// coupling and operating frequency so the chain is perfectly transmitting:
//   gamma (w* - w2) = Gamma (w* - w1)   ->  w* = (Gamma w1 - gamma w2)/(Gamma - gamma)
//   g12^2 = (w* - w1)(w* - w2) + gamma Gamma / 4
// Equal rates leave no finite operating frequency unless the states are
// degenerate.
inline TwoStateDesign design_two_state_series(double omega1, double omega2, double gamma,
                                              double Gamma) {
    if (gamma <= 0.0 || Gamma <= 0.0)
        throw parameter_error("decay rates must be positive");
    if (gamma == Gamma) {
        if (omega1 == omega2)
            return {omega1, 0.5 * std::sqrt(gamma * Gamma)};
        throw infeasible_error(
            "equal input and output rates admit no finite perfect-transmission "
            "frequency for detuned states");
    }
    const double w_star = (Gamma * omega1 - gamma * omega2) / (Gamma - gamma);
    const double d = omega1 - omega2;
    const double g2 = 0.25 * gamma * Gamma +
                      gamma * Gamma * d * d / ((Gamma - gamma) * (Gamma - gamma));
    if (g2 < 0.0)
        throw infeasible_error("no real coupling satisfies the perfect-transmission "
                               "conditions", w_star);
    return {w_star, std::sqrt(g2)};
}

// Closed-form effective bandwidth of a parallel arrangement: each resonance
// contributes 2 gamma_i Gamma_i / (gamma_i + Gamma_i) independently.
inline double parallel_bandwidth(const std::vector<DiscreteState>& states) {
    double acc = 0.0;
    for (const auto& s : states) {
        if (s.gamma_in + s.gamma_out > 0.0)
            acc += 2.0 * s.gamma_in * s.gamma_out / (s.gamma_in + s.gamma_out);
    }
    return acc;
}

} // namespace pdk
