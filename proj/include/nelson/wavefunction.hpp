#ifndef NELSON_WAVEFUNCTION_HPP
#define NELSON_WAVEFUNCTION_HPP

#include <complex>
#include <vector>

#include "nelson/barrier.hpp"
#include "nelson/grid.hpp"

namespace nelson {

using cdouble = std::complex<double>;

/// Potential samples on a grid.
struct PotentialField {
    Grid1D grid;
    std::vector<double> v;
};

/// Complex wavefunction samples on a grid at one instant.
/// Invariants: discrete norm sum |psi_i|^2 dx == 1 (solver tolerance),
/// psi == 0 at both walls (hard-wall box).
struct WaveState {
    Grid1D grid;
    std::vector<cdouble> psi;
    double t = 0.0; // units 1/k0^2

    double norm() const;
    double mean_x() const;
    double var_x() const;
    double mean_p(double hbar) const;
    /// Discrete <H> with the same 3-point stencil the propagator uses.
    double energy(const PotentialField& pot, double m, double hbar) const;
};

/// Barrier sampled on the grid: v0 for |x_i| <= d/2 (closed interval),
/// zero elsewhere. A point exactly on the edge takes v0.
PotentialField rect_potential(const BarrierSpec& barrier, const Grid1D& grid);

/// Gaussian packet sampled on the grid, walls forced to zero, then
/// renormalized so the discrete norm is exactly 1. Throws ConfigError if
/// the box truncates more than 1e-10 of the packet's mass.
WaveState init_gaussian(const PacketSpec& packet, const Grid1D& grid, double hbar = 1.0);

/// Rectangle-rule sum of |psi|^2 dx over grid points with a <= x_i <= b.
/// Clamps to the grid overlap; empty overlap gives 0.
double probability_in_region(const WaveState& state, double a, double b);

} // namespace nelson

#endif
