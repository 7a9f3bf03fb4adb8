#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pdk/core/errors.hpp"

namespace pdk {

// One discrete state of a quantum network and its decay rates into the three
// continua.
struct DiscreteState {
    double omega = 0.0;     // resonance frequency        [rad/time]
    double gamma_in = 0.0;  // decay to the input channel  [1/time]
    double gamma_out = 0.0; // decay to the output channel [1/time]
    double mu = 0.0;        // decay to the side channel   [1/time]
};

// Direct coherent coupling between two discrete states.
struct StateCoupling {
    std::size_t i = 0;
    std::size_t j = 0;
    double g = 0.0; // coupling rate [1/time]
};

enum class Topology { simple, parallel, series, hybrid, general };

inline const char* to_string(Topology t) {
    switch (t) {
        case Topology::simple: return "simple";
        case Topology::parallel: return "parallel";
        case Topology::series: return "series";
        case Topology::hybrid: return "hybrid";
        case Topology::general: return "general";
    }
    return "general";
}

inline Topology topology_from_string(const std::string& s) {
    if (s == "simple") return Topology::simple;
    if (s == "parallel") return Topology::parallel;
    if (s == "series") return Topology::series;
    if (s == "hybrid") return Topology::hybrid;
    if (s == "general") return Topology::general;
    throw spec_error("unknown topology '" + s + "'");
}

// Full microscopic description of a network of discrete states coupled to an
// input continuum, an output continuum and an optional side (monitor) channel.
struct NetworkSpec {
    Topology topology = Topology::general;
    std::vector<DiscreteState> states;
    std::vector<StateCoupling> couplings;
    // Hybrid topology only: ordered groups of state indices, input side first.
    std::vector<std::vector<std::size_t>> manifolds;

    bool has_side_channel() const {
        for (const auto& s : states)
            if (s.mu > 0.0) return true;
        return false;
    }

    void validate() const {
        if (states.empty()) throw spec_error("network has no discrete states");
        for (const auto& s : states) {
            if (s.gamma_in < 0.0 || s.gamma_out < 0.0 || s.mu < 0.0)
                throw spec_error("decay rates must be non-negative");
        }
        for (const auto& c : couplings) {
            if (c.i >= states.size() || c.j >= states.size())
                throw spec_error("coupling references a state out of range");
            if (c.i == c.j) throw spec_error("coupling must link two distinct states");
        }
        switch (topology) {
            case Topology::simple:
                if (states.size() != 1) throw spec_error("simple topology needs one state");
                if (!couplings.empty())
                    throw spec_error("simple topology has no couplings");
                break;
            case Topology::parallel:
                if (!couplings.empty())
                    throw spec_error("parallel topology has no couplings");
                break;
            case Topology::series: {
                if (couplings.size() + 1 != states.size())
                    throw spec_error("series topology needs a chain of couplings");
                for (std::size_t n = 0; n < couplings.size(); ++n) {
                    const auto& c = couplings[n];
                    const bool chain = (c.i == n && c.j == n + 1) || (c.j == n && c.i == n + 1);
                    if (!chain) throw spec_error("series couplings must chain adjacent states");
                }
                for (std::size_t n = 0; n < states.size(); ++n) {
                    if (n != 0 && states[n].gamma_in > 0.0)
                        throw spec_error("series topology: only the first state enters the input channel");
                    if (n + 1 != states.size() && states[n].gamma_out > 0.0)
                        throw spec_error("series topology: only the last state enters the output channel");
                }
                break;
            }
            case Topology::hybrid: {
                if (manifolds.empty()) throw spec_error("hybrid topology needs manifolds");
                std::vector<bool> seen(states.size(), false);
                for (const auto& m : manifolds) {
                    if (m.empty()) throw spec_error("hybrid manifold is empty");
                    for (const std::size_t idx : m) {
                        if (idx >= states.size())
                            throw spec_error("manifold references a state out of range");
                        if (seen[idx]) throw spec_error("state assigned to two manifolds");
                        seen[idx] = true;
                    }
                }
                for (std::size_t i = 0; i < states.size(); ++i)
                    if (!seen[i]) throw spec_error("state not assigned to any manifold");
                break;
            }
            case Topology::general:
                break;
        }
    }
};

// Resonance of a parallel arrangement: frequency plus input-channel rate.
struct ResonantMode {
    double omega = 0.0;
    double gamma = 0.0;
};

} // namespace pdk
