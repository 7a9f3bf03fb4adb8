#pragma once

#include <string>
#include <vector>

#include "pdk/core/errors.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"

namespace pdk {

// Time-dependent emitter controls on a uniform grid whose last point is the
// detection time.
struct CouplingSchedule {
    Grid grid;
    std::vector<double> kappa; // instantaneous emission rate, >= 0
    std::vector<double> delta; // instantaneous detuning

    void validate() const {
        if (kappa.size() != grid.size() || delta.size() != grid.size())
            throw parameter_error("schedule arrays must match the grid");
        for (const double k : kappa)
            if (k < 0.0) throw parameter_error("emission rate must be non-negative");
    }

    double detection_time() const { return grid.back(); }
};

// Desired temporal wavepacket: non-negative amplitude and a phase, sampled on
// a window that ends at the detection time.  The amplitude is normalized over
// the full line, so the window mass integral |A|^2 may be below one; it can
// never exceed one.
struct TargetWavepacket {
    Grid grid;
    std::vector<double> amplitude;
    std::vector<double> phase;

    void validate() const {
        if (amplitude.size() != grid.size() || phase.size() != grid.size())
            throw parameter_error("target arrays must match the grid");
        for (const double a : amplitude)
            if (a < 0.0) throw parameter_error("target amplitude must be non-negative");
        if (window_mass() > 1.0 + 1e-9)
            throw infeasible_error("target probability mass inside the window exceeds one: "
                                   "the wavepacket extends past the detection time");
    }

    double window_mass() const {
        std::vector<double> a2(amplitude.size());
        for (std::size_t i = 0; i < amplitude.size(); ++i)
            a2[i] = amplitude[i] * amplitude[i];
        return integrate(a2, grid);
    }

    TemporalFunction to_function() const {
        std::vector<Complex> v(amplitude.size());
        for (std::size_t i = 0; i < amplitude.size(); ++i)
            v[i] = amplitude[i] * Complex(std::cos(phase[i]), std::sin(phase[i]));
        return TemporalFunction(grid, std::move(v));
    }
};

// Output of the forward model: the retrodicted detection amplitude and the
// total weight W = 1 - exp(-int kappa).
struct RetrodictiveAmplitude {
    TemporalFunction psi_star;
    double weight = 0.0;
};

// Output of the inverse design.
struct ScheduleDesign {
    CouplingSchedule schedule;
    double weight = 0.0; // window mass of the target = designed weight
    std::vector<std::string> warnings;
};

} // namespace pdk
