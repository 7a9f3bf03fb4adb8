#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pdk/core/errors.hpp"
#include "pdk/core/fourier.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/core/uncertainty.hpp"
#include "pdk/povm/detector.hpp"

namespace pdk {

// Probability of reading k excitations out of n present, each seen
// independently with efficiency eta.
inline double binomial_readout(long long n, long long k, double eta) {
    if (n < 0 || k < 0 || k > n)
        throw parameter_error("readout counts must satisfy 0 <= k <= n");
    if (eta < 0.0 || eta > 1.0) throw parameter_error("efficiency must lie in [0, 1]");
    if (eta == 1.0) return k == n ? 1.0 : 0.0;
    if (eta == 0.0) return k == 0 ? 1.0 : 0.0;
    const auto nd = static_cast<double>(n), kd = static_cast<double>(k);
    const double log_choose =
        std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
    return std::exp(log_choose + kd * std::log(eta) + (nd - kd) * std::log1p(-eta));
}

// Click outcome of the three-stage detector: a dark-count weight w0 (click
// with no input photon), a detection weight wT multiplying the projected
// spectral state, and that state itself.  In hot, strongly reflecting
// corners of parameter space the raw sums can exceed unit weight; within the
// intended low-noise operating regime both weights stay in [0, 1].
struct POVMElement {
    double w0 = 0.0;
    double wT = 0.0;
    SpectralFunction state;
};

struct AssembleOptions {
    double tail_tolerance = 1e-12; // stop when the rigorous remainder bound is this small
    long long max_photons = 100000;
};

// Total click probability for n excitations in the readout register.
namespace detail {

class ClickWeight {
public:
    ClickWeight(const ClickSet& clicks, double eta) : clicks_(&clicks), eta_(eta) {}

    // Advance to n (called with consecutive n starting at 0) and return B(n).
    double advance(long long n) {
        if (clicks_->threshold()) {
            // B(n) = P(Bin(n, eta) >= k_min) grows by eta * pmf(n-1, k_min - 1).
            if (n > 0) {
                const long long k = clicks_->k_min - 1;
                if (k <= n - 1) cumulative_ += eta_ * binomial_readout(n - 1, k, eta_);
            }
            return cumulative_;
        }
        double b = 0.0;
        for (long long k : clicks_->values)
            if (k <= n) b += binomial_readout(n, k, eta_);
        return b;
    }

private:
    const ClickSet* clicks_;
    double eta_;
    double cumulative_ = 0.0;
};

} // namespace detail

// Sum the photon-number ladder of the detector model:
//   w0 = sum_n B(n) sum_{m=0..n/G} P(n-Gm) P'(m) rho^(2m)
//   wT = tau^2 * W * sum_n B(n) sum_{m>=1} m P(n-Gm) P'(m-1) rho^(2(m-1))
// where B(n) is the click probability for n readout excitations, P / P' are
// the geometric photon-number laws of the readout and trigger thermal modes,
// and W is the finite-window subnormalization.  The n-sum stops once an
// exact geometric remainder bound drops below tail_tolerance relative to the
// accumulated total (or below tail_tolerance * 1e-20 absolute, whichever is
// larger, so that negligibly small weights still converge).
inline POVMElement assemble_povm(const DetectorSpec& spec, const AssembleOptions& opt = {}) {
    spec.validate();
    const long long G = spec.gain;
    const double nb = spec.n_bar_readout;
    const double nbp = spec.n_bar_trigger;
    const double q = nb / (1.0 + nb);
    const double qp = nbp / (1.0 + nbp);
    const double r2 = spec.rho * spec.rho;
    const double t2 = spec.tau * spec.tau;
    const double x = r2 * qp;            // geometric ratio of the m-sums
    const double inv1p = 1.0 / (1.0 + nbp);

    std::vector<double> P{1.0 / (1.0 + nb)}; // readout thermal pmf, extended on demand
    std::vector<double> Pp{inv1p};           // trigger thermal pmf
    detail::ClickWeight click(spec.clicks, spec.eta);

    double w0 = 0.0;
    double wT_raw = 0.0; // without the tau^2 * W prefactor
    double dropped = 0.0;

    // Upper bounds on the full m-sums, used by the remainder estimate.
    const double u0_all = inv1p / (1.0 - x);
    const double uT_all = inv1p / ((1.0 - x) * (1.0 - x));

    long long n = 0;
    for (; n <= opt.max_photons; ++n) {
        while (static_cast<long long>(P.size()) <= n) P.push_back(P.back() * q);
        const long long m_max = n / G;
        while (static_cast<long long>(Pp.size()) <= m_max) Pp.push_back(Pp.back() * qp);

        const double B = click.advance(n);
        if (B > 0.0) {
            double s0 = 0.0, sT = 0.0;
            double rho_pow = 1.0;      // rho^(2m), with 0^0 = 1
            double rho_pow_prev = 1.0; // rho^(2(m-1)) for m >= 1
            // With x = 0 only m <= 1 can contribute.
            const long long m_stop = (x == 0.0) ? std::min(m_max, 1LL) : m_max;
            for (long long m = 0; m <= m_stop; ++m) {
                const double p_read = P[static_cast<std::size_t>(n - G * m)];
                s0 += p_read * Pp[static_cast<std::size_t>(m)] * rho_pow;
                if (m >= 1)
                    sT += static_cast<double>(m) * p_read *
                          Pp[static_cast<std::size_t>(m - 1)] * rho_pow_prev;
                // Remaining m-terms are geometrically small; account and stop.
                if (x > 0.0 && m >= 2) {
                    const double md = static_cast<double>(m);
                    const double rem0 = inv1p * std::pow(x, md + 1.0) / (1.0 - x);
                    const double remT = inv1p * std::pow(x, md) * ((md + 1.0) - md * x) /
                                        ((1.0 - x) * (1.0 - x));
                    if (rem0 + remT < 1e-40) {
                        dropped += B * (rem0 + remT);
                        break;
                    }
                }
                rho_pow_prev = rho_pow;
                rho_pow *= r2;
            }
            w0 += B * s0;
            wT_raw += B * sT;
        }

        // Rigorous bound on everything not yet accumulated: split future terms
        // at m* = n/(2G); low m carry the readout tail q^(n - G m*), high m the
        // trigger-mode tail in x.
        const long long m_star = n / (2 * G);
        const double read_tail = (q == 0.0 && n - G * m_star >= 0)
                                     ? 0.0
                                     : std::pow(q, static_cast<double>(n - G * m_star + 1));
        const double ms = static_cast<double>(m_star);
        const double m_tail0 = inv1p * std::pow(x, ms + 1.0) / (1.0 - x);
        const double m_tailT =
            inv1p * std::pow(x, ms) * ((ms + 1.0) - ms * x) / ((1.0 - x) * (1.0 - x));
        const double bound = read_tail * (u0_all + uT_all) + m_tail0 + m_tailT + dropped;
        const double total = w0 + t2 * spec.window_weight * wT_raw;
        // The weights are probability-scale quantities, so demanding a purely
        // relative remainder is meaningless (and unreachable, because `dropped`
        // never shrinks) once the true total is astronomically small: below a
        // 1e-20 total the guarantee degrades gracefully to an absolute
        // remainder of tail_tolerance * 1e-20.
        if (n >= G && std::isfinite(bound) && bound <= opt.tail_tolerance * std::max(total, 1e-20))
            break;
        if (n == opt.max_photons)
            throw numeric_error("photon-number sums did not converge (remainder bound " +
                                std::to_string(bound) + " after " + std::to_string(n) +
                                " terms)");
    }

    POVMElement element;
    element.w0 = w0;
    element.wT = t2 * spec.window_weight * wT_raw;
    element.state = spec.state;
    return element;
}

// Purity Tr[Pi^2] / Tr[Pi]^2 of the two-term element (vacuum block plus one
// pure single-photon projector; the blocks are orthogonal).
inline double povm_purity(const POVMElement& element) {
    const double trace = element.w0 + element.wT;
    if (trace <= 0.0) throw parameter_error("element has zero trace");
    return (element.w0 * element.w0 + element.wT * element.wT) / (trace * trace);
}

// Input density operator on vacuum + single-photon spectra: a vacuum weight
// and weighted normalized spectral amplitudes.
struct InputDensity {
    double vacuum_weight = 0.0;
    std::vector<std::pair<double, SpectralFunction>> photons;
};

// Born rule: P = w0 <vac|rho|vac> + wT <S|rho|S> for the element state S.
inline double born_probability(const POVMElement& element, const InputDensity& input) {
    double trace = input.vacuum_weight;
    for (const auto& [weight, f] : input.photons) trace += weight;
    if (std::abs(trace - 1.0) > 1e-6)
        throw parameter_error("input density must have unit trace");

    double p = element.w0 * input.vacuum_weight;
    for (const auto& [weight, f] : input.photons) {
        if (weight == 0.0) continue;
        detail::require_same_grid(element.state.grid, f.grid, "element state and input photon");
        std::vector<Complex> prod(f.size());
        for (std::size_t i = 0; i < f.size(); ++i)
            prod[i] = std::conj(element.state.values[i]) * f.values[i];
        p += element.wT * weight * std::norm(integrate(prod, f.grid));
    }
    return p;
}

// Bayes retrodiction: posterior P(i|click) = w_i P(i) / sum_j w_j P(j).
inline std::vector<double> bayes_retrodict(const std::vector<double>& weights,
                                           const std::vector<double>& priors) {
    if (weights.size() != priors.size())
        throw parameter_error("weights and priors must have equal length");
    double prior_sum = 0.0;
    for (double p : priors) {
        if (p < 0.0) throw parameter_error("priors must be non-negative");
        prior_sum += p;
    }
    if (std::abs(prior_sum - 1.0) > 1e-8) throw parameter_error("priors must sum to one");
    double evidence = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw parameter_error("weights must be non-negative");
        evidence += weights[i] * priors[i];
    }
    if (evidence <= 0.0) throw parameter_error("outcome has zero probability under the prior");
    std::vector<double> posterior(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        posterior[i] = weights[i] * priors[i] / evidence;
    return posterior;
}

// Entropic time-frequency widths of the projected state: bin |amplitude|^2
// with the given bin sizes in each conjugate domain, DeltaX = 2^H * deltaX.
struct UncertaintyReport {
    double delta_t = 0.0;
    double delta_omega = 0.0;
    double bin_t = 0.0;
    double bin_omega = 0.0;
    double entropy_t_bits = 0.0;
    double entropy_omega_bits = 0.0;
    double product = 0.0; // delta_t * delta_omega
};

inline UncertaintyReport entropic_uncertainty(const SpectralFunction& state, double bin_t,
                                              double bin_omega) {
    const double norm = detail::squared_norm(state);
    if (std::abs(norm - 1.0) > 1e-6)
        throw parameter_error("state must be L2-normalized");

    UncertaintyReport report;
    report.bin_t = bin_t;
    report.bin_omega = bin_omega;

    const EntropicWidth freq = entropic_width(state, bin_omega);
    report.delta_omega = freq.delta;
    report.entropy_omega_bits = freq.entropy_bits;

    const std::size_t n = state.size();
    const double dw = state.grid.step();
    const double dt = kTwoPi / (dw * static_cast<double>(n));
    const double t_start = -0.5 * dt * static_cast<double>(n - 1);
    const TemporalFunction in_time = inverse_fourier_transform(state, t_start);
    const EntropicWidth time = entropic_width(in_time, bin_t);
    report.delta_t = time.delta;
    report.entropy_t_bits = time.entropy_bits;

    report.product = report.delta_t * report.delta_omega;
    return report;
}

} // namespace pdk
