#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pdk/core/errors.hpp"
#include "pdk/core/quadrature.hpp"
#include "pdk/core/sampled.hpp"

namespace pdk {

struct EntropicOptions {
    double coverage_tol = 1e-8; // max tolerated probability density at the grid edges
};

struct EntropicWidth {
    double delta = 0.0;        // coarse-grained width: bin_width * 2^entropy
    double entropy_bits = 0.0; // Shannon entropy of the binned distribution
    double bin_width = 0.0;
    std::size_t bins = 0;
    double edge_fraction = 0.0; // probability mass of the outermost samples
};

// Entropic width of the probability distribution |f|^2 over its axis,
// coarse-grained into bins of width bin_width:
//   delta = bin_width * 2^H,  H = -sum p_b log2 p_b.
//
// The grid must cover the distribution: if the outermost samples still carry
// probability density above coverage_tol (relative), the binning cannot see
// the full distribution and a numeric error is raised.
inline EntropicWidth entropic_width(const Sampled& f, double bin_width,
                                    const EntropicOptions& opt = {}) {
    if (!f.grid.is_uniform())
        throw parameter_error("entropic width requires a uniform grid");
    const double h = f.grid.step();
    if (bin_width < h * (1.0 - 1e-9))
        throw parameter_error("bin width must be at least the grid step");

    const std::size_t n = f.size();
    std::vector<double> density(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::abs(f.values[i]);
        density[i] = m * m;
    }
    const double total = trapezoid(density, f.grid);
    if (total <= 0.0) throw parameter_error("distribution has zero mass");

    const double edge = 0.5 * h * (density.front() + density.back()) / total;
    EntropicWidth out;
    out.edge_fraction = edge;
    if (edge > opt.coverage_tol)
        throw numeric_error("grid does not cover the distribution: edge mass fraction " +
                            std::to_string(edge) + " exceeds tolerance");

    const double lo = f.grid.front();
    const double span = f.grid.back() - lo;
    const std::size_t bins = static_cast<std::size_t>(std::ceil(span / bin_width - 1e-12));
    std::vector<double> p(bins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h; // trapezoid end weights
        std::size_t b = static_cast<std::size_t>((f.grid[i] - lo) / bin_width);
        if (b >= bins) b = bins - 1;
        p[b] += density[i] * w / total;
    }

    double H = 0.0;
    for (const double pb : p)
        if (pb > 0.0) H -= pb * std::log2(pb);

    out.entropy_bits = H;
    out.bin_width = bin_width;
    out.bins = bins;
    out.delta = bin_width * std::exp2(H);
    return out;
}

} // namespace pdk
