#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pdk/core/constants.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/parallel.hpp"
#include "pdk/core/rng.hpp"
#include "pdk/povm/assemble.hpp"
#include "pdk/povm/detector.hpp"

namespace pdk {

// One fluctuating detector parameter.  Distributions are centered on the
// base value: `width` is the full width of a uniform window or the standard
// deviation of a normal; `offsets`/`probabilities` define a discrete law.
struct ParameterFluctuation {
    std::string parameter;    // eta | detection_time | n_bar_readout | n_bar_trigger
    std::string distribution; // uniform | normal | discrete
    double width = 0.0;
    std::vector<double> offsets;
    std::vector<double> probabilities;

    void validate() const {
        if (parameter != "eta" && parameter != "detection_time" &&
            parameter != "n_bar_readout" && parameter != "n_bar_trigger")
            throw spec_error("unknown fluctuation parameter '" + parameter + "'");
        if (distribution == "uniform" || distribution == "normal") {
            if (width < 0.0) throw parameter_error("fluctuation width must be non-negative");
            return;
        }
        if (distribution == "discrete") {
            if (offsets.empty() || offsets.size() != probabilities.size())
                throw parameter_error("discrete fluctuation needs matching offsets and probabilities");
            double sum = 0.0;
            for (double p : probabilities) {
                if (p < 0.0) throw parameter_error("probabilities must be non-negative");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-8)
                throw parameter_error("discrete probabilities must sum to one");
            return;
        }
        throw spec_error("unknown fluctuation distribution '" + distribution + "'");
    }
};

struct FluctuationSpec {
    std::vector<ParameterFluctuation> parameters;
    std::size_t samples = 256;
    bool strict = false; // invalid sampled spec: throw instead of skip-and-count
};

// Classical mixture of click elements over the sampled parameter sets.  The
// single-photon block is eigendecomposed into orthonormal projected states
// with weights summing to the averaged wT (minus any floored eigenvalues).
struct MixedElement {
    double w0 = 0.0;
    double wT = 0.0;
    std::vector<double> weights;          // photon-block eigenvalues, descending
    std::vector<SpectralFunction> states; // matching orthonormal states
    double purity = 1.0;
    std::size_t valid_samples = 0;
    std::size_t skipped_samples = 0;
};

inline MixedElement fluctuate_povm(const DetectorSpec& base, const FluctuationSpec& fluct,
                                   std::uint64_t seed, const AssembleOptions& opt = {}) {
    base.validate();
    if (fluct.samples < 1) throw parameter_error("need at least one fluctuation sample");
    bool fluctuates_time = false;
    for (const auto& p : fluct.parameters) {
        p.validate();
        if (p.parameter == "detection_time") fluctuates_time = true;
    }
    if (fluctuates_time && base.state.size() == 0)
        throw parameter_error("detection-time fluctuations require a projected state");

    // Draw all parameter sets serially so results are independent of the
    // thread count.
    Rng rng(seed);
    std::vector<DetectorSpec> specs;
    std::vector<double> time_shifts;
    std::size_t skipped = 0;
    for (std::size_t s = 0; s < fluct.samples; ++s) {
        DetectorSpec spec = base;
        for (const auto& p : fluct.parameters) {
            double delta = 0.0;
            if (p.distribution == "uniform") {
                delta = p.width * (rng.uniform01() - 0.5);
            } else if (p.distribution == "normal") {
                delta = p.width * rng.normal();
            } else {
                const double u = rng.uniform01();
                double cum = 0.0;
                std::size_t pick = p.offsets.size() - 1;
                for (std::size_t i = 0; i < p.offsets.size(); ++i) {
                    cum += p.probabilities[i];
                    if (u < cum) {
                        pick = i;
                        break;
                    }
                }
                delta = p.offsets[pick];
            }
            if (p.parameter == "eta") spec.eta += delta;
            else if (p.parameter == "detection_time") spec.detection_time += delta;
            else if (p.parameter == "n_bar_readout") spec.n_bar_readout += delta;
            else if (p.parameter == "n_bar_trigger") spec.n_bar_trigger += delta;
        }
        try {
            spec.validate();
        } catch (const error& e) {
            if (fluct.strict)
                throw parameter_error(std::string("sampled detector spec invalid: ") + e.what());
            ++skipped;
            continue;
        }
        time_shifts.push_back(spec.detection_time - base.detection_time);
        specs.push_back(std::move(spec));
    }
    if (specs.empty()) throw parameter_error("all fluctuation samples were invalid");

    const std::size_t S = specs.size();
    std::vector<double> w0s(S), wTs(S);
    parallel_for(S, [&](std::size_t s) {
        const POVMElement e = assemble_povm(specs[s], opt);
        w0s[s] = e.w0;
        wTs[s] = e.wT;
    });

    MixedElement mixed;
    mixed.valid_samples = S;
    mixed.skipped_samples = skipped;
    for (std::size_t s = 0; s < S; ++s) {
        mixed.w0 += w0s[s];
        mixed.wT += wTs[s];
    }
    mixed.w0 /= static_cast<double>(S);
    mixed.wT /= static_cast<double>(S);

    const double trace = mixed.w0 + mixed.wT;
    if (trace <= 0.0) throw parameter_error("mixed element has zero trace");

    if (!fluctuates_time) {
        // All sampled states coincide: the photon block stays pure.
        mixed.weights = {mixed.wT};
        mixed.states = {base.state};
        mixed.purity = (mixed.w0 * mixed.w0 + mixed.wT * mixed.wT) / (trace * trace);
        return mixed;
    }

    // Photon block sum_s p_s |S_s><S_s| with p_s = wT_s / S and
    // S_s(w) = S_base(w) e^{i w dT_s}: build the weighted Gram matrix
    // C_{ss'} = sqrt(p_s p_s') int |S_base|^2 e^{i w (dT_s' - dT_s)} dw.
    const std::size_t n = base.state.size();
    std::vector<double> density(n);
    for (std::size_t i = 0; i < n; ++i) density[i] = std::norm(base.state.values[i]);

    Eigen::MatrixXcd C(S, S);
    parallel_for(S, [&](std::size_t s) {
        for (std::size_t t = s; t < S; ++t) {
            const double dT = time_shifts[t] - time_shifts[s];
            Complex g(1.0, 0.0);
            if (dT != 0.0) {
                std::vector<Complex> prod(n);
                for (std::size_t i = 0; i < n; ++i)
                    prod[i] = density[i] * std::exp(Complex(0.0, base.state.grid[i] * dT));
                g = integrate(prod, base.state.grid);
            }
            const double scale =
                std::sqrt(wTs[s] * wTs[t]) / static_cast<double>(S);
            C(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = scale * g;
            C(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) =
                std::conj(scale * g);
        }
    });

    double frobenius2 = 0.0;
    for (Eigen::Index i = 0; i < C.rows(); ++i)
        for (Eigen::Index j = 0; j < C.cols(); ++j) frobenius2 += std::norm(C(i, j));
    mixed.purity = (mixed.w0 * mixed.w0 + frobenius2) / (trace * trace);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(C);
    if (solver.info() != Eigen::Success)
        throw numeric_error("Gram-matrix eigendecomposition failed");

    for (Eigen::Index k = static_cast<Eigen::Index>(S); k-- > 0;) {
        const double lambda = solver.eigenvalues()(k);
        if (lambda <= kEigenvalueFloor) break; // ascending order: the rest are smaller
        SpectralFunction state;
        state.grid = base.state.grid;
        state.values.assign(n, Complex(0.0, 0.0));
        for (std::size_t s = 0; s < S; ++s) {
            const Complex coeff = std::sqrt(wTs[s] / static_cast<double>(S)) *
                                  solver.eigenvectors()(static_cast<Eigen::Index>(s), k) /
                                  std::sqrt(lambda);
            if (coeff == Complex(0.0, 0.0)) continue;
            for (std::size_t i = 0; i < n; ++i)
                state.values[i] += coeff * base.state.values[i] *
                                   std::exp(Complex(0.0, base.state.grid[i] * time_shifts[s]));
        }
        mixed.weights.push_back(lambda);
        mixed.states.push_back(std::move(state));
    }
    return mixed;
}

} // namespace pdk
