#include "nelson/wavefunction.hpp"

#include <cmath>
#include <numbers>

namespace nelson {

double WaveState::norm() const {
    double s = 0.0;
    for (const auto& a : psi) s += std::norm(a);
    return s * grid.dx;
}

double WaveState::mean_x() const {
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) s += grid.x(i) * std::norm(psi[i]);
    return s * grid.dx / norm();
}

double WaveState::var_x() const {
    const double mu = mean_x();
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double dxi = grid.x(i) - mu;
        s += dxi * dxi * std::norm(psi[i]);
    }
    return s * grid.dx / norm();
}

double WaveState::mean_p(double hbar) const {
    // <p> = Re sum conj(psi) (-i hbar d/dx psi) dx, central differences
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        const cdouble dpsi = (psi[i + 1] - psi[i - 1]) / (2.0 * grid.dx);
        s += std::imag(std::conj(psi[i]) * dpsi); // Re[conj * (-i) d] = Im[conj * d]
    }
    return hbar * s * grid.dx / norm();
}

double WaveState::energy(const PotentialField& pot, double m, double hbar) const {
    const double kin = hbar * hbar / (2.0 * m * grid.dx * grid.dx);
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        const cdouble lap = psi[i + 1] - 2.0 * psi[i] + psi[i - 1];
        s += std::real(std::conj(psi[i]) * (-kin * lap + pot.v[i] * psi[i]));
    }
    return s * grid.dx / norm();
}

PotentialField rect_potential(const BarrierSpec& barrier, const Grid1D& grid) {
    barrier.validate();
    if (-0.5 * barrier.d < grid.x_min || 0.5 * barrier.d > grid.x_max)
        throw ConfigError("rect_potential: barrier wider than the grid");
    PotentialField f;
    f.grid = grid;
    f.v.resize(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i)
        f.v[i] = barrier.inside(grid.x(i)) ? barrier.v0 : 0.0;
    return f;
}

WaveState init_gaussian(const PacketSpec& packet, const Grid1D& grid, double hbar) {
    packet.validate();
    WaveState s;
    s.grid = grid;
    s.psi.resize(grid.n_points);
    s.t = 0.0;

    const double var4 = 4.0 * packet.delta_x * packet.delta_x;
    const double amp = std::pow(2.0 * std::numbers::pi * packet.delta_x * packet.delta_x, -0.25);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double dxi = grid.x(i) - packet.x_mean;
        s.psi[i] = amp * std::exp(cdouble(-dxi * dxi / var4, packet.p_mean * dxi / hbar));
    }
    s.psi.front() = 0.0;
    s.psi.back() = 0.0;

    // Rectangle-rule mass of the sampled continuum-normalized packet; any
    // deficit is tail mass truncated by the box.
    const double raw = s.norm();
    if (std::fabs(1.0 - raw) > 1e-10)
        throw ConfigError("init_gaussian: packet tail truncated by boundary (mass defect " +
                          std::to_string(std::fabs(1.0 - raw)) + ")");
    const double rescale = 1.0 / std::sqrt(raw);
    for (auto& a : s.psi) a *= rescale;
    return s;
}

double probability_in_region(const WaveState& state, double a, double b) {
    double s = 0.0;
    const Grid1D& g = state.grid;
    for (std::size_t i = 0; i < g.n_points; ++i) {
        const double x = g.x(i);
        if (x >= a && x <= b) s += std::norm(state.psi[i]);
    }
    return s * g.dx;
}

} // namespace nelson
