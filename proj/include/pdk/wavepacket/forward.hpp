#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"
#include "pdk/wavepacket/types.hpp"

namespace pdk {

// Retrodicted detection amplitude of an emitter driven by the schedule:
//
//   psi*(t) = sqrt(kappa(t)) * exp( - int_t^T [ i delta(t') + kappa(t')/2 ] dt' )
//
// and total detection weight W = 1 - exp(-int kappa).  The identity
// int |psi*|^2 dt = W holds exactly (the integrand is a perfect derivative);
// numerically it is preserved to the accuracy of the corrected cumulative
// quadrature.
inline RetrodictiveAmplitude forward_amplitude(const CouplingSchedule& sched) {
    sched.validate();
    const std::size_t n = sched.grid.size();

    const std::vector<double> K = cumulative_from_right(sched.kappa, sched.grid);
    const std::vector<double> P = cumulative_from_right(sched.delta, sched.grid);

    RetrodictiveAmplitude out;
    std::vector<Complex> psi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::sqrt(sched.kappa[i]) * std::exp(-0.5 * K[i]);
        psi[i] = mag * Complex(std::cos(P[i]), -std::sin(P[i]));
    }
    out.psi_star = TemporalFunction(sched.grid, std::move(psi));
    out.weight = -std::expm1(-K.front());
    return out;
}

// Probability that a photon prepared in the (unit-norm) temporal mode f is
// registered by the detection the schedule describes:
//   P = | int f(t) psi*(t) dt |^2  =  W |<u|f>|^2,
// where u = conj(psi*)/sqrt(W) is the retrodicted mode.
inline double detection_probability(const TemporalFunction& f,
                                    const RetrodictiveAmplitude& amp) {
    if (f.size() != amp.psi_star.size())
        throw parameter_error("mode and amplitude must share a grid");
    std::vector<Complex> prod(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        prod[i] = f.values[i] * amp.psi_star.values[i];
    const Complex c = integrate(prod, f.grid);
    return std::norm(c);
}

} // namespace pdk
