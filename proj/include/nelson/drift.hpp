#ifndef NELSON_DRIFT_HPP
#define NELSON_DRIFT_HPP

#include <cstdint>
#include <vector>

#include "nelson/wavefunction.hpp"

namespace nelson {

/// Osmotic (u) and current (v) velocities at one point.
struct DriftSample {
    double u = 0.0;
    double v = 0.0;
    double total() const { return u + v; }
};

constexpr double kDensityFloorRel = 1e-12;

/// |psi_i|^2 floored at kDensityFloorRel * max_j |psi_j|^2. The floor keeps
/// log-derivative denominators finite across wavefunction nodes.
double regularized_density(const WaveState& state, std::size_t i);

/// Grid-sampled drift velocities extracted from a wavefunction snapshot:
///
///   u = (hbar/m) Re d/dx ln psi,   v = (hbar/m) Im d/dx ln psi
///
/// evaluated as central differences of psi against the regularized density,
/// which avoids the branch cuts of the complex logarithm. Each component is
/// clipped to +-cap at the nodes; linear interpolation serves values at
/// arbitrary x. Values are frozen in time until the next rebuild (one PDE
/// step). Read-only after build, safe for concurrent samplers.
class DriftTable {
public:
    DriftTable() = default;

    void build(const WaveState& state, double m, double hbar, double cap);

    /// Interpolated total drift u+v; flags whether a capped node influenced
    /// the interpolation (diagnostic counter at the call site).
    double total_at(double x, bool& cap_touched) const;

    DriftSample sample_at(double x) const;

    const Grid1D& grid() const { return grid_; }
    double cap() const { return cap_; }

private:
    Grid1D grid_;
    double cap_ = 0.0;
    std::vector<double> u_;
    std::vector<double> v_;
    std::vector<double> total_;
    std::vector<std::uint8_t> capped_;
};

/// Drift velocities at x from a wavefunction snapshot (out-of-domain x is an
/// error). Equals DriftTable::sample_at on a table built from the same state.
DriftSample drift_at(const WaveState& state, double x, double m, double hbar, double cap);

} // namespace nelson

#endif
