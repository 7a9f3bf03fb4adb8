#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pdk/core/constants.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/wavepacket/types.hpp"

namespace pdk {

// Solve for the schedule whose detection projects onto the target wavepacket
// by the detection time T (the last grid point):
//
//   kappa(t) = A(t)^2 / ( 1 - int_t^T A^2 dt' ),    delta(t) = -d(phase)/dt.
//
// The retrodictive propagator carries exp(-i int_t^T delta), so the absorbed
// temporal mode is conj(psi*); cancelling the target's instantaneous phase
// there requires the opposite detuning sign.  The round trip is then exact:
// conj(psi*(t)) e^{i phase(T)} = target(t).
//
// The denominator is the probability not yet emitted; it reaches zero only if
// the target carries unit mass strictly inside the window, which is reported
// as infeasible.  Where it merely falls below the numerical guard, kappa is
// capped and a warning is attached (the schedule need not be normalizable).
inline ScheduleDesign inverse_design(const TargetWavepacket& target) {
    target.validate();
    const std::size_t n = target.grid.size();
    if (!target.grid.is_uniform())
        throw parameter_error("inverse design requires a uniform time grid");
    if (n < 5) throw parameter_error("inverse design needs at least five samples");

    std::vector<double> a2(n);
    for (std::size_t i = 0; i < n; ++i) a2[i] = target.amplitude[i] * target.amplitude[i];
    const std::vector<double> tail = cumulative_from_right(a2, target.grid);

    ScheduleDesign out;
    out.weight = tail.front();

    bool capped = false;
    std::vector<double> kappa(n);
    for (std::size_t i = 0; i < n; ++i) {
        double den = 1.0 - tail[i];
        if (den < kDenominatorGuard) {
            den = kDenominatorGuard;
            if (a2[i] > 0.0) capped = true;
        }
        kappa[i] = a2[i] / den;
    }
    if (capped)
        out.warnings.push_back("emission rate capped where the remaining-probability "
                               "denominator fell below the numerical guard");

    out.schedule.grid = target.grid;
    out.schedule.kappa = std::move(kappa);
    out.schedule.delta = derivative(target.phase, target.grid);
    for (double& d : out.schedule.delta) d = -d;
    return out;
}

} // namespace pdk
