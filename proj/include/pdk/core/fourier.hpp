#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "pdk/core/constants.hpp"
#include "pdk/core/errors.hpp"
#include "pdk/core/sampled.hpp"

namespace pdk {

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 transform, sign = -1 forward / +1 inverse (no scaling).
inline void fft_radix2(std::vector<Complex>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / static_cast<double>(len);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

// Plain O(N^2) transform for sizes that are not a power of two.
inline std::vector<Complex> dft_direct(const std::vector<Complex>& a, int sign) {
    const std::size_t n = a.size();
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sign * kTwoPi * static_cast<double>(j) *
                               static_cast<double>(k) / static_cast<double>(n);
            acc += a[j] * Complex(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

inline std::vector<Complex> dft(std::vector<Complex> a, int sign) {
    if (is_pow2(a.size())) {
        fft_radix2(a, sign);
        return a;
    }
    return dft_direct(a, sign);
}

} // namespace detail

// Continuous-transform conventions:
//   F(w) = (1/sqrt(2 pi)) Integral f(t) exp(-i w t) dt
//   f(t) = (1/sqrt(2 pi)) Integral F(w) exp(+i w t) dw
// so a pure delay t0 appears as the spectral factor exp(-i w t0).
//
// fourier_transform maps N uniform time samples to N frequency samples on the
// conjugate grid w_k = (k - N/2) * 2 pi / (N dt).  The discrete pair is exactly
// unitary: Parseval holds to rounding and inverse_fourier_transform returns the
// original samples bit-for-bit up to floating-point error.
inline SpectralFunction fourier_transform(const TemporalFunction& f) {
    if (!f.grid.is_uniform())
        throw parameter_error("fourier transform requires a uniform time grid");
    const std::size_t n = f.size();
    const double dt = f.grid.step();
    const double dw = kTwoPi / (static_cast<double>(n) * dt);
    const std::size_t c = n / 2;
    const double t0 = f.grid.front();

    std::vector<Complex> work(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = kTwoPi * static_cast<double>(j) * static_cast<double>(c) /
                           static_cast<double>(n);
        work[j] = f.values[j] * Complex(std::cos(ang), std::sin(ang));
    }
    work = detail::dft(std::move(work), -1);

    std::vector<double> wpts(n);
    std::vector<Complex> out(n);
    const double scale = dt / std::sqrt(kTwoPi);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (static_cast<double>(k) - static_cast<double>(c)) * dw;
        wpts[k] = w;
        const double ang = -w * t0;
        out[k] = work[k] * Complex(std::cos(ang), std::sin(ang)) * scale;
    }
    return SpectralFunction(Grid(std::move(wpts)), std::move(out));
}

// Inverse map onto a time grid of the same size starting at t_start.
inline TemporalFunction inverse_fourier_transform(const SpectralFunction& F, double t_start) {
    if (!F.grid.is_uniform())
        throw parameter_error("inverse fourier transform requires a uniform frequency grid");
    const std::size_t n = F.size();
    const double dw = F.grid.step();
    const double dt = kTwoPi / (static_cast<double>(n) * dw);
    const double w0 = F.grid.front();

    std::vector<Complex> work(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = F.grid[k] * t_start;
        work[k] = F.values[k] * Complex(std::cos(ang), std::sin(ang));
    }
    work = detail::dft(std::move(work), +1);

    std::vector<double> tpts(n);
    std::vector<Complex> out(n);
    const double scale = dw / std::sqrt(kTwoPi);
    for (std::size_t j = 0; j < n; ++j) {
        const double tj = t_start + dt * static_cast<double>(j);
        tpts[j] = tj;
        const double ang = w0 * (tj - t_start);
        out[j] = work[j] * Complex(std::cos(ang), std::sin(ang)) * scale;
    }
    return TemporalFunction(Grid(std::move(tpts)), std::move(out));
}

} // namespace pdk
