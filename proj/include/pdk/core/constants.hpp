#pragma once

namespace pdk {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Magnitude floor below which a spectral phase (and hence a group delay) is
// treated as undefined.
inline constexpr double kPhaseFloor = 1e-8;

// Default truncation tolerance for infinite photon-number sums.
inline constexpr double kSeriesTol = 1e-12;

// Guard for denominators in the inverse coupling design.
inline constexpr double kDenominatorGuard = 1e-12;

// Eigenvalue floor when decomposing mixed detector elements.
inline constexpr double kEigenvalueFloor = 1e-12;

} // namespace pdk
