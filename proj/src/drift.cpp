#include "nelson/drift.hpp"

#include <algorithm>
#include <cmath>

namespace nelson {

namespace {

double peak_density(const WaveState& state) {
    double peak = 0.0;
    for (const auto& a : state.psi) peak = std::max(peak, std::norm(a));
    return peak;
}

inline double clip(double value, double cap) {
    return std::clamp(value, -cap, cap);
}

// Node drift components from differences of psi against the regularized
// density (one-sided at the walls, where psi = 0 makes them vanish anyway):
//   dln(psi)/dx ~= (psi[i+1] - psi[i-1]) conj(psi[i]) / (2 dx rho_reg_i)
inline DriftSample node_drift(const WaveState& state, std::size_t i, double floor_abs,
                              double scale) {
    const auto n = state.psi.size();
    const cdouble d = (i == 0)       ? (state.psi[1] - state.psi[0])
                      : (i == n - 1) ? (state.psi[n - 1] - state.psi[n - 2])
                                     : 0.5 * (state.psi[i + 1] - state.psi[i - 1]);
    const double rho = std::max(std::norm(state.psi[i]), floor_abs);
    const cdouble g = d * std::conj(state.psi[i]) / rho;
    return {scale * std::real(g), scale * std::imag(g)};
}

inline DriftSample clipped_node_drift(const WaveState& state, std::size_t i, double floor_abs,
                                      double scale, double cap) {
    const DriftSample s = node_drift(state, i, floor_abs, scale);
    return {clip(s.u, cap), clip(s.v, cap)};
}

} // namespace

double regularized_density(const WaveState& state, std::size_t i) {
    return std::max(std::norm(state.psi.at(i)), kDensityFloorRel * peak_density(state));
}

void DriftTable::build(const WaveState& state, double m, double hbar, double cap) {
    grid_ = state.grid;
    cap_ = cap;
    const std::size_t n = grid_.n_points;
    u_.resize(n);
    v_.resize(n);
    total_.resize(n);
    capped_.assign(n, 0);

    const double floor_abs = kDensityFloorRel * peak_density(state);
    const double scale = hbar / (m * grid_.dx);
    for (std::size_t i = 0; i < n; ++i) {
        const DriftSample s = node_drift(state, i, floor_abs, scale);
        const double u = clip(s.u, cap);
        const double v = clip(s.v, cap);
        capped_[i] = (u != s.u || v != s.v) ? 1 : 0;
        u_[i] = u;
        v_[i] = v;
        total_[i] = u + v;
    }
}

double DriftTable::total_at(double x, bool& cap_touched) const {
    const std::size_t i = grid_.cell_left(x);
    const double w = (x - grid_.x(i)) / grid_.dx;
    cap_touched = (capped_[i] | capped_[i + 1]) != 0;
    return total_[i] + w * (total_[i + 1] - total_[i]);
}

DriftSample DriftTable::sample_at(double x) const {
    const std::size_t i = grid_.cell_left(x);
    const double w = (x - grid_.x(i)) / grid_.dx;
    return {u_[i] + w * (u_[i + 1] - u_[i]), v_[i] + w * (v_[i + 1] - v_[i])};
}

DriftSample drift_at(const WaveState& state, double x, double m, double hbar, double cap) {
    if (!state.grid.contains(x)) throw DomainError("drift_at: x outside the grid");
    const std::size_t i = state.grid.cell_left(x);
    const double w = (x - state.grid.x(i)) / state.grid.dx;
    const double floor_abs = kDensityFloorRel * peak_density(state);
    const double scale = hbar / (m * state.grid.dx);
    const DriftSample a = clipped_node_drift(state, i, floor_abs, scale, cap);
    const DriftSample b = clipped_node_drift(state, i + 1, floor_abs, scale, cap);
    return {a.u + w * (b.u - a.u), a.v + w * (b.v - a.v)};
}

} // namespace nelson
