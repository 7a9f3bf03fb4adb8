#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pdk/core/errors.hpp"

namespace pdk {

// Deterministic random source.  The mt19937_64 engine is bit-exact across
// conforming implementations; the distribution transforms below are written
// out explicitly (the std:: distribution algorithms are implementation
// defined) so identical seeds give identical streams everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    bool bernoulli(double p) {
        return uniform01() < p;
    }

    // Standard normal via the polar (Marsaglia) method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double normal(double mean, double sigma) {
        return mean + sigma * normal();
    }

    // Photon number drawn from a Bose-Einstein (geometric) distribution with
    // mean occupation n_bar:  P(n) = n_bar^n / (1 + n_bar)^(n+1).
    // Sampled by inversion: N = floor( log(1-u) / log(q) ), q = n_bar/(1+n_bar).
    long thermal(double n_bar) {
        if (n_bar < 0.0) throw parameter_error("thermal occupation must be >= 0");
        if (n_bar == 0.0) return 0;
        const double q = n_bar / (1.0 + n_bar);
        const double u = uniform01();
        return static_cast<long>(std::floor(std::log1p(-u) / std::log(q)));
    }

    // Derive an independent stream for a sub-task (fixed-order parallel work).
    Rng fork(std::uint64_t stream) {
        // SplitMix64 mix of (raw seed material, stream index).
        std::uint64_t z = engine_() + 0x9E3779B97F4A7C15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace pdk
