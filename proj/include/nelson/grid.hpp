#ifndef NELSON_GRID_HPP
#define NELSON_GRID_HPP

#include <cmath>
#include <cstddef>

#include "nelson/errors.hpp"

namespace nelson {

/// Uniform 1D grid. Lengths are in units of 1/k0 throughout.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n_points = 0;
    double dx = 0.0; // (x_max - x_min) / (n_points - 1)

    static Grid1D from_extent(double x_min, double x_max, std::size_t n_points) {
        if (!(x_min < x_max)) throw ConfigError("grid: x_min must be < x_max");
        if (n_points < 3) throw ConfigError("grid: need at least 3 points");
        Grid1D g;
        g.x_min = x_min;
        g.x_max = x_max;
        g.n_points = n_points;
        g.dx = (x_max - x_min) / static_cast<double>(n_points - 1);
        return g;
    }

    /// Nearest point count for a target spacing, spacing recomputed exactly.
    static Grid1D from_spacing(double x_min, double x_max, double dx_target) {
        if (!(dx_target > 0.0)) throw ConfigError("grid: dx must be > 0");
        const auto n = static_cast<std::size_t>(std::llround((x_max - x_min) / dx_target)) + 1;
        return from_extent(x_min, x_max, n);
    }

    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }

    bool contains(double x) const { return x >= x_min && x <= x_max; }

    /// Index of the cell [x_i, x_{i+1}] containing x, clamped to valid cells.
    std::size_t cell_left(double x) const {
        if (x <= x_min) return 0;
        auto i = static_cast<std::size_t>((x - x_min) / dx);
        if (i > n_points - 2) i = n_points - 2;
        return i;
    }
};

/// Closed-interval membership |x| <= d/2 with a tiny slack so that grid
/// points meant to sit exactly on the edge are not lost to accumulated
/// floating-point error in x_min + i*dx.
inline bool inside_closed_interval(double x, double half_width) {
    const double slack = 1e-9 * (half_width > 1.0 ? half_width : 1.0);
    return std::fabs(x) <= half_width + slack;
}

} // namespace nelson

#endif
