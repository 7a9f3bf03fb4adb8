#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "pdk/core/errors.hpp"

namespace pdk {

using Complex = std::complex<double>;

// Strictly increasing sample axis (frequency or time).
class Grid {
public:
    Grid() = default;

    explicit Grid(std::vector<double> points) : pts_(std::move(points)) {
        if (pts_.size() < 2) throw parameter_error("grid needs at least two points");
        for (std::size_t i = 1; i < pts_.size(); ++i) {
            if (!(pts_[i] > pts_[i - 1]))
                throw parameter_error("grid points must be strictly increasing");
        }
        const double h0 = pts_[1] - pts_[0];
        uniform_ = true;
        for (std::size_t i = 1; i + 1 < pts_.size(); ++i) {
            const double h = pts_[i + 1] - pts_[i];
            if (std::abs(h - h0) > 1e-9 * std::max(std::abs(h0), std::abs(h))) {
                uniform_ = false;
                break;
            }
        }
        step_ = uniform_ ? (pts_.back() - pts_.front()) / static_cast<double>(pts_.size() - 1)
                         : 0.0;
    }

    static Grid uniform(double lo, double hi, std::size_t n) {
        if (n < 2) throw parameter_error("grid needs at least two points");
        if (!(hi > lo)) throw parameter_error("grid upper bound must exceed lower bound");
        std::vector<double> p(n);
        const double h = (hi - lo) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) p[i] = lo + h * static_cast<double>(i);
        p.back() = hi;
        return Grid(std::move(p));
    }

    std::size_t size() const noexcept { return pts_.size(); }
    double operator[](std::size_t i) const { return pts_[i]; }
    double front() const { return pts_.front(); }
    double back() const { return pts_.back(); }
    bool is_uniform() const noexcept { return uniform_; }
    double step() const {
        if (!uniform_) throw parameter_error("step() requires a uniform grid");
        return step_;
    }
    const std::vector<double>& points() const noexcept { return pts_; }

private:
    std::vector<double> pts_;
    bool uniform_ = false;
    double step_ = 0.0;
};

// Complex-valued samples over a grid.  Used for both spectral functions
// (axis = angular frequency) and temporal functions (axis = time).
struct Sampled {
    Grid grid;
    std::vector<Complex> values;

    Sampled() = default;
    Sampled(Grid g, std::vector<Complex> v) : grid(std::move(g)), values(std::move(v)) {
        if (grid.size() != values.size())
            throw parameter_error("sample count must match grid size");
    }

    std::size_t size() const noexcept { return values.size(); }
};

using SpectralFunction = Sampled;
using TemporalFunction = Sampled;

// Linear interpolation of a sampled function onto a new axis.  Points outside
// the original span evaluate to zero.
inline Sampled resample(const Sampled& f, const Grid& target) {
    std::vector<Complex> out(target.size(), Complex(0.0, 0.0));
    std::size_t j = 0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        const double x = target[i];
        if (x < f.grid.front() || x > f.grid.back()) continue;
        while (j + 2 < f.grid.size() && f.grid[j + 1] < x) ++j;
        while (j > 0 && f.grid[j] > x) --j;
        const double x0 = f.grid[j], x1 = f.grid[j + 1];
        const double w = (x - x0) / (x1 - x0);
        out[i] = f.values[j] * (1.0 - w) + f.values[j + 1] * w;
    }
    return Sampled(target, std::move(out));
}

} // namespace pdk
