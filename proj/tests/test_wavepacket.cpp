#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "pdk/core/constants.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/wavepacket/forward.hpp"
#include "pdk/wavepacket/inverse.hpp"
#include "pdk/wavepacket/targets.hpp"

using namespace pdk;
using Catch::Approx;

namespace {

double normal_cdf(double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); }

// L2 distance between the mode the designed schedule absorbs and the target.
double round_trip_l2(const TargetWavepacket& target) {
    const ScheduleDesign design = inverse_design(target);
    const RetrodictiveAmplitude amp = forward_amplitude(design.schedule);
    const double phi_T = target.phase.back();
    const std::size_t n = target.grid.size();
    std::vector<double> diff2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Complex absorbed = std::conj(amp.psi_star.values[i]) *
                                 Complex(std::cos(phi_T), std::sin(phi_T));
        const Complex want = target.amplitude[i] *
                             Complex(std::cos(target.phase[i]), std::sin(target.phase[i]));
        diff2[i] = std::norm(absorbed - want);
    }
    return std::sqrt(integrate(diff2, target.grid));
}

} // namespace

TEST_CASE("gaussian capture schedule") {
    const double sigma = 1.0, t0 = 0.0, T = 2.0;
    const Grid g = Grid::uniform(-8.0, T, 10001);
    const TargetWavepacket target = gaussian_target(sigma, t0, 0.0, g);
    const ScheduleDesign design = inverse_design(target);

    SECTION("emission rate matches the error-function closed form") {
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double ref = gaussian_reference_kappa(sigma, t0, T, g[i]);
            worst = std::max(worst, std::abs(design.schedule.kappa[i] - ref) / ref);
        }
        REQUIRE(worst < 1e-8);
        REQUIRE(design.warnings.empty());
    }

    SECTION("design weight is the window mass") {
        REQUIRE(design.weight == Approx(normal_cdf(2.0)).margin(1e-10));
        REQUIRE(design.weight ==
                Approx(gaussian_window_weight(sigma, t0, T)).margin(1e-10));
    }

    SECTION("forward model reproduces the weight and its norm identity") {
        const RetrodictiveAmplitude amp = forward_amplitude(design.schedule);
        REQUIRE(amp.weight == Approx(design.weight).margin(1e-10));
        std::vector<double> dens(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            dens[i] = std::norm(amp.psi_star.values[i]);
        REQUIRE(integrate(dens, g) == Approx(amp.weight).margin(1e-10));
    }

    SECTION("the designed schedule detects the target with probability W^2") {
        const RetrodictiveAmplitude amp = forward_amplitude(design.schedule);
        const double p = detection_probability(target.to_function(), amp);
        REQUIRE(p == Approx(design.weight * design.weight).margin(1e-10));
    }

    SECTION("a window seven widths past the centre captures almost everything") {
        const Grid wide = Grid::uniform(-8.0, 7.0, 15001);
        const ScheduleDesign d7 = inverse_design(gaussian_target(sigma, t0, 0.0, wide));
        REQUIRE(d7.weight >= 1.0 - 1e-9);
    }
}

TEST_CASE("carrier and chirp handling") {
    const double sigma = 1.0, t0 = -2.0, omega0 = 0.8;
    const Grid g = Grid::uniform(-10.0, 1.0, 11001);

    SECTION("a linear phase designs a constant opposite detuning") {
        const ScheduleDesign design = inverse_design(gaussian_target(sigma, t0, omega0, g));
        for (std::size_t i = 0; i < g.size(); i += 500)
            REQUIRE(design.schedule.delta[i] == Approx(-omega0).margin(1e-10));
    }

    SECTION("chirped complex target is absorbed exactly") {
        TargetWavepacket target = gaussian_target(sigma, t0, 0.0, g);
        for (std::size_t i = 0; i < g.size(); ++i)
            target.phase[i] = 0.8 * g[i] + 0.3 * g[i] * g[i];
        REQUIRE(round_trip_l2(target) < 1e-8);
    }

    SECTION("plain gaussian round trip is exact to quadrature accuracy") {
        REQUIRE(round_trip_l2(gaussian_target(sigma, t0, 0.0, g)) < 1e-10);
    }
}

TEST_CASE("infeasible and degenerate targets") {
    const Grid g = Grid::uniform(-8.0, 2.0, 4001);

    SECTION("super-unity window mass is infeasible") {
        TargetWavepacket target = gaussian_target(1.0, 0.0, 0.0, g);
        for (double& a : target.amplitude) a *= 1.01;
        REQUIRE_THROWS_AS(inverse_design(target), infeasible_error);
        REQUIRE_THROWS_WITH(inverse_design(target),
                            Catch::Matchers::ContainsSubstring("extends past the detection time"));
    }

    SECTION("unit mass strictly inside the window caps the initial rate") {
        TargetWavepacket target = gaussian_target(1.0, 0.0, 0.0, g);
        const double scale = 1.0 / std::sqrt(target.window_mass());
        for (double& a : target.amplitude) a *= scale;
        const ScheduleDesign design = inverse_design(target);
        REQUIRE_FALSE(design.warnings.empty());
        REQUIRE(design.weight == Approx(1.0).margin(1e-9));
    }

    SECTION("schedule validation") {
        CouplingSchedule s;
        s.grid = g;
        s.kappa.assign(g.size(), 1.0);
        s.delta.assign(g.size(), 0.0);
        REQUIRE_NOTHROW(s.validate());
        s.kappa[7] = -0.5;
        REQUIRE_THROWS_AS(s.validate(), parameter_error);
        s.kappa.assign(3, 1.0);
        REQUIRE_THROWS_AS(s.validate(), parameter_error);
    }

    SECTION("mode and amplitude grids must agree") {
        const ScheduleDesign design = inverse_design(gaussian_target(1.0, 0.0, 0.0, g));
        const RetrodictiveAmplitude amp = forward_amplitude(design.schedule);
        const Grid other = Grid::uniform(-8.0, 2.0, 101);
        const TemporalFunction f(other, std::vector<Complex>(101, Complex(0.1, 0.0)));
        REQUIRE_THROWS_AS(detection_probability(f, amp), parameter_error);
    }
}

TEST_CASE("orthogonal pulse construction") {
    const double sigma = 1.0, t0 = -4.0;
    const Grid g = Grid::uniform(-12.0, 4.0, 8001);
    const TargetWavepacket pulse = build_orthogonal_pulse(sigma, t0, 1, 0.4, 0.4, g);
    const TargetWavepacket base = gaussian_target(sigma, t0, 0.0, g);

    SECTION("unit mass on the construction grid") {
        REQUIRE(pulse.window_mass() == Approx(1.0).margin(1e-12));
    }

    SECTION("exactly orthogonal to the base gaussian") {
        std::vector<Complex> prod(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            prod[i] = pulse.amplitude[i] *
                      Complex(std::cos(pulse.phase[i]), std::sin(pulse.phase[i])) *
                      base.amplitude[i];
        REQUIRE(std::abs(integrate(prod, g)) < 1e-8);
    }

    SECTION("without smoothing the phase is an exact pi step") {
        const TargetWavepacket hard = build_orthogonal_pulse(sigma, t0, 1, 0.4, 0.0, g);
        for (std::size_t i = 0; i < g.size(); i += 100) {
            if (g[i] > t0) REQUIRE(hard.phase[i] == kPi);
            else REQUIRE(hard.phase[i] == 0.0);
        }
    }

    SECTION("a detector designed for the pulse ignores the base mode") {
        const ScheduleDesign design = inverse_design(pulse);
        const RetrodictiveAmplitude amp = forward_amplitude(design.schedule);
        const double p_pulse = detection_probability(pulse.to_function(), amp);
        const double p_base = detection_probability(base.to_function(), amp);
        REQUIRE(p_pulse == Approx(1.0).margin(1e-6));
        REQUIRE(p_base < 1e-8);
    }

    SECTION("construction guards") {
        REQUIRE_THROWS_AS(build_orthogonal_pulse(sigma, t0, 2, 0.4, 0.4, g), parameter_error);
        REQUIRE_THROWS_AS(build_orthogonal_pulse(sigma, t0, 1, 0.2, 0.4, g), parameter_error);
        REQUIRE_THROWS_AS(build_orthogonal_pulse(-1.0, t0, 1, 0.4, 0.4, g), parameter_error);
    }
}

TEST_CASE("polynomial ramp schedule") {
    const double kappa0 = 0.3, sigma = 1.0;
    const Grid g = Grid::uniform(0.0, 5.0, 5001);
    const CouplingSchedule sched = polynomial_schedule(kappa0, 2, sigma, g);
    const RetrodictiveAmplitude amp = forward_amplitude(sched);
    // integral of kappa0 ((T-t)/sigma)^2 over [0, T] = kappa0 T^3 / (3 sigma^2)
    const double total = kappa0 * 125.0 / 3.0;
    REQUIRE(amp.weight == Approx(-std::expm1(-total)).margin(1e-12));
    REQUIRE_THROWS_AS(polynomial_schedule(-0.1, 2, sigma, g), parameter_error);
    REQUIRE_THROWS_AS(polynomial_schedule(0.1, -1, sigma, g), parameter_error);
}
