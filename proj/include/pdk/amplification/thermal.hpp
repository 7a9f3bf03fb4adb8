#pragma once

#include <cmath>

#include "pdk/core/errors.hpp"

namespace pdk {

// Mean occupation of a bosonic mode at frequency omega in contact with a bath
// of temperature kT (energies in the same units, hbar = 1):
//   n_bar = 1 / (exp(omega / kT) - 1).
inline double thermal_occupation(double omega, double kT) {
    if (omega <= 0.0) throw parameter_error("mode frequency must be positive");
    if (kT < 0.0) throw parameter_error("temperature must be non-negative");
    if (kT == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / kT);
}

// Photon-number variance of a thermal state with mean occupation n_bar.
inline double thermal_variance(double n_bar) {
    if (n_bar < 0.0) throw parameter_error("occupation must be non-negative");
    return n_bar * (n_bar + 1.0);
}

// Geometric photon-number distribution of a thermal state,
//   P(N) = n_bar^N / (1 + n_bar)^(N + 1),
// with the exact tail sum_{j > J} P(j) = q^(J+1) where q = n_bar/(1+n_bar).
class ThermalDistribution {
public:
    explicit ThermalDistribution(double n_bar) : n_bar_(n_bar) {
        if (n_bar < 0.0) throw parameter_error("occupation must be non-negative");
        q_ = n_bar / (1.0 + n_bar);
    }

    double mean() const { return n_bar_; }
    double ratio() const { return q_; }

    double pmf(long long k) const {
        if (k < 0) return 0.0;
        if (n_bar_ == 0.0) return k == 0 ? 1.0 : 0.0;
        return std::exp(static_cast<double>(k) * std::log(q_) - std::log1p(n_bar_));
    }

    // sum_{j > J} P(j), exact.
    double tail(long long J) const {
        if (J < 0) return 1.0;
        if (n_bar_ == 0.0) return 0.0;
        return std::exp(static_cast<double>(J + 1) * std::log(q_));
    }

private:
    double n_bar_ = 0.0;
    double q_ = 0.0;
};

} // namespace pdk
