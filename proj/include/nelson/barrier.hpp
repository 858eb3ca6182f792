#ifndef NELSON_BARRIER_HPP
#define NELSON_BARRIER_HPP

#include <cmath>

#include "nelson/errors.hpp"
#include "nelson/grid.hpp"

namespace nelson {

/// Rectangular barrier of height v0 on [-d/2, +d/2], zero elsewhere,
/// plus the particle constants it is defined against.
struct BarrierSpec {
    double v0 = 1.0;   // barrier height (energy)
    double d = 2.0;    // barrier width (length, 1/k0)
    double m = 1.0;    // particle mass
    double hbar = 1.0;

    void validate() const {
        if (!(v0 > 0.0)) throw ConfigError("barrier: v0 must be > 0");
        if (!(d > 0.0)) throw ConfigError("barrier: d must be > 0");
        if (!(m > 0.0)) throw ConfigError("barrier: m must be > 0");
        if (!(hbar > 0.0)) throw ConfigError("barrier: hbar must be > 0");
    }

    bool inside(double x) const { return inside_closed_interval(x, 0.5 * d); }

    /// Evanescent wavenumber sqrt(2m(v0 - e0))/hbar for sub-barrier energy.
    double kappa(double e0) const {
        if (!(e0 < v0)) throw DomainError("kappa: requires e0 < v0");
        return std::sqrt(2.0 * m * (v0 - e0)) / hbar;
    }
};

/// Initial Gaussian packet parameters: position mean, momentum mean and
/// position spread. The kinetic energy p^2/2m is derived, never stored.
struct PacketSpec {
    double x_mean = -500.0;
    double p_mean = 1.0;   // hbar*k0; k0 = 1 in natural units
    double delta_x = 50.0;

    void validate() const {
        if (!(delta_x > 0.0)) throw ConfigError("packet: delta_x must be > 0");
    }

    double e0(double m) const { return p_mean * p_mean / (2.0 * m); }
};

/// Plane-wave transmission probability through the rectangular barrier at
/// energy e (0 < e < v0). Used as an analytic oracle and to size ensembles.
inline double plane_wave_transmission(const BarrierSpec& b, double e) {
    if (!(e > 0.0)) throw DomainError("transmission: energy must be > 0");
    if (e >= b.v0) {
        // above-barrier: sinh -> sin, with the k' -> 0 limit handled
        const double kp = std::sqrt(2.0 * b.m * (e - b.v0)) / b.hbar;
        if (kp * b.d < 1e-8) {
            const double lim = b.m * b.v0 * b.v0 * b.d * b.d / (2.0 * e * b.hbar * b.hbar);
            return 1.0 / (1.0 + lim);
        }
        const double s = std::sin(kp * b.d);
        return 1.0 / (1.0 + b.v0 * b.v0 * s * s / (4.0 * e * (e - b.v0)));
    }
    const double kap = b.kappa(e);
    const double sh = std::sinh(kap * b.d);
    return 1.0 / (1.0 + b.v0 * b.v0 * sh * sh / (4.0 * e * (b.v0 - e)));
}

} // namespace nelson

#endif
