#pragma once

#include <cstddef>
#include <vector>

#include "pdk/core/errors.hpp"
#include "pdk/core/sampled.hpp"

namespace pdk {

// Composite trapezoid on an arbitrary strictly increasing grid.
template <typename T>
T trapezoid(const std::vector<T>& y, const Grid& g) {
    if (y.size() != g.size()) throw parameter_error("value/grid size mismatch");
    T acc{};
    for (std::size_t i = 0; i + 1 < y.size(); ++i)
        acc += (y[i] + y[i + 1]) * (0.5 * (g[i + 1] - g[i]));
    return acc;
}

// Trapezoid with one Richardson step (equivalent to Simpson) when the grid is
// uniform with an even interval count; otherwise plain trapezoid.
template <typename T>
T integrate(const std::vector<T>& y, const Grid& g) {
    const T t_h = trapezoid(y, g);
    if (!g.is_uniform() || g.size() % 2 == 0) return t_h;
    T t_2h{};
    const double h2 = 2.0 * g.step();
    for (std::size_t i = 0; i + 2 < y.size(); i += 2)
        t_2h += (y[i] + y[i + 2]) * (0.5 * h2);
    return t_h + (t_h - t_2h) * (1.0 / 3.0);
}

// First derivative on a uniform grid with fourth-order stencils
// (five-point central in the interior, one-sided at the edges).
template <typename T>
std::vector<T> derivative(const std::vector<T>& y, const Grid& g) {
    if (y.size() != g.size()) throw parameter_error("value/grid size mismatch");
    if (!g.is_uniform()) throw parameter_error("derivative requires a uniform grid");
    const std::size_t n = y.size();
    if (n < 5) throw parameter_error("derivative requires at least five samples");
    const double d = 1.0 / (12.0 * g.step());
    std::vector<T> out(n);
    out[0] = (y[0] * -25.0 + y[1] * 48.0 + y[2] * -36.0 + y[3] * 16.0 + y[4] * -3.0) * d;
    out[1] = (y[0] * -3.0 + y[1] * -10.0 + y[2] * 18.0 + y[3] * -6.0 + y[4] * 1.0) * d;
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (y[i - 2] - y[i + 2] + (y[i + 1] - y[i - 1]) * 8.0) * d;
    out[n - 2] = (y[n - 5] * -1.0 + y[n - 4] * 6.0 + y[n - 3] * -18.0 + y[n - 2] * 10.0 +
                  y[n - 1] * 3.0) * d;
    out[n - 1] = (y[n - 5] * 3.0 + y[n - 4] * -16.0 + y[n - 3] * 36.0 + y[n - 2] * -48.0 +
                  y[n - 1] * 25.0) * d;
    return out;
}

// Cumulative right-tail integral  C[i] = integral from x_i to x_end of y.
// On uniform grids an Euler-Maclaurin endpoint correction (h^2/12 times the
// derivative difference, with fourth-order stencils) lifts the accuracy from
// O(h^2) to O(h^4); non-uniform grids fall back to plain trapezoid sums.
template <typename T>
std::vector<T> cumulative_from_right(const std::vector<T>& y, const Grid& g) {
    if (y.size() != g.size()) throw parameter_error("value/grid size mismatch");
    const std::size_t n = y.size();
    std::vector<T> c(n);
    c[n - 1] = T{};
    for (std::size_t k = n - 1; k-- > 0;)
        c[k] = c[k + 1] + (y[k] + y[k + 1]) * (0.5 * (g[k + 1] - g[k]));
    if (g.is_uniform() && n >= 5) {
        const std::vector<T> dy = derivative(y, g);
        const double corr = g.step() * g.step() / 12.0;
        for (std::size_t k = 0; k + 1 < n; ++k)
            c[k] -= (dy[n - 1] - dy[k]) * corr;
    }
    return c;
}

// Cumulative left integral  C[i] = integral from x_0 to x_i of y, with the
// same correction scheme.
template <typename T>
std::vector<T> cumulative_from_left(const std::vector<T>& y, const Grid& g) {
    if (y.size() != g.size()) throw parameter_error("value/grid size mismatch");
    const std::size_t n = y.size();
    std::vector<T> c(n);
    c[0] = T{};
    for (std::size_t k = 1; k < n; ++k)
        c[k] = c[k - 1] + (y[k - 1] + y[k]) * (0.5 * (g[k] - g[k - 1]));
    if (g.is_uniform() && n >= 5) {
        const std::vector<T> dy = derivative(y, g);
        const double corr = g.step() * g.step() / 12.0;
        for (std::size_t k = 1; k < n; ++k)
            c[k] -= (dy[k] - dy[0]) * corr;
    }
    return c;
}

} // namespace pdk
