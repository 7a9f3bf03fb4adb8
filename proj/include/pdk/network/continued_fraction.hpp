#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pdk/core/errors.hpp"
#include "pdk/core/sampled.hpp"

namespace pdk {

// Complex number carried with a separate power-of-two exponent so that long
// products and three-term recursions never overflow.
struct ScaledComplex {
    Complex v{1.0, 0.0};
    int exp2 = 0;

    void normalize() {
        const double m = std::abs(v);
        if (m == 0.0 || !std::isfinite(m)) return;
        int e = 0;
        std::frexp(m, &e);
        if (e > 256 || e < -256) {
            v = Complex(std::ldexp(v.real(), -e), std::ldexp(v.imag(), -e));
            exp2 += e;
        }
    }
};

// ratio = a / b restoring the tracked exponents.
inline Complex scaled_ratio(const ScaledComplex& a, const ScaledComplex& b) {
    const Complex r = a.v / b.v;
    return Complex(std::ldexp(r.real(), a.exp2 - b.exp2),
                   std::ldexp(r.imag(), a.exp2 - b.exp2));
}

// Evaluate the continued fraction
//   b0 + a1/(b1 + a2/(b2 + ... + aN/bN))
// bottom-up convergents (Wallis-Euler three-term recursion) with power-of-two
// rescaling:  A(-1)=1, A(0)=b0, B(-1)=0, B(0)=1,
//             A(n) = b(n) A(n-1) + a(n) A(n-2)   (same for B),
// value = A(N)/B(N).
inline Complex continued_fraction(const std::vector<Complex>& b,
                                  const std::vector<Complex>& a) {
    if (b.empty() || a.size() + 1 != b.size())
        throw parameter_error("continued fraction needs N+1 b-coefficients and N a-coefficients");
    ScaledComplex A_prev{Complex(1.0, 0.0), 0}, A{b[0], 0};
    ScaledComplex B_prev{Complex(0.0, 0.0), 0}, B{Complex(1.0, 0.0), 0};
    for (std::size_t n = 1; n < b.size(); ++n) {
        // Align exponents of the two history terms before combining.
        const int sh_a = A_prev.exp2 - A.exp2;
        ScaledComplex A_next;
        A_next.v = b[n] * A.v + a[n - 1] * Complex(std::ldexp(A_prev.v.real(), sh_a),
                                                   std::ldexp(A_prev.v.imag(), sh_a));
        A_next.exp2 = A.exp2;
        const int sh_b = B_prev.exp2 - B.exp2;
        ScaledComplex B_next;
        B_next.v = b[n] * B.v + a[n - 1] * Complex(std::ldexp(B_prev.v.real(), sh_b),
                                                   std::ldexp(B_prev.v.imag(), sh_b));
        B_next.exp2 = B.exp2;
        A_prev = A; A = A_next; A.normalize();
        B_prev = B; B = B_next; B.normalize();
    }
    return scaled_ratio(A, B);
}

// Continuant (determinant) of a complex tridiagonal matrix with diagonal d and
// symmetric off-diagonal entries -i*g:  K(n) = d(n) K(n-1) + g(n-1)^2 K(n-2).
// Returned with its power-of-two exponent.
inline ScaledComplex continuant(const std::vector<Complex>& d, const std::vector<double>& g,
                                std::size_t first, std::size_t last) {
    ScaledComplex Km1{Complex(1.0, 0.0), 0}; // K over the empty range
    if (first > last) return Km1;
    ScaledComplex K{d[first], 0};
    for (std::size_t n = first + 1; n <= last; ++n) {
        const int sh = Km1.exp2 - K.exp2;
        ScaledComplex next;
        next.v = d[n] * K.v + (g[n - 1] * g[n - 1]) *
                                  Complex(std::ldexp(Km1.v.real(), sh),
                                          std::ldexp(Km1.v.imag(), sh));
        next.exp2 = K.exp2;
        Km1 = K;
        K = next;
        K.normalize();
    }
    return K;
}

} // namespace pdk
