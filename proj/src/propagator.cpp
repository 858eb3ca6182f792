#include "nelson/propagator.hpp"

#include <cmath>
#include <string>

namespace nelson {

CrankNicolson::CrankNicolson(const PotentialField& potential, double dt, double m, double hbar)
    : grid_(potential.grid), v_(potential.v), dt_(dt), m_(m), hbar_(hbar) {
    if (!(dt > 0.0)) throw ConfigError("propagator: dt must be > 0");
    const std::size_t ni = grid_.n_points - 2; // interior unknowns
    const double k2 = hbar_ * hbar_ / (2.0 * m_ * grid_.dx * grid_.dx);
    const cdouble ia(0.0, dt_ / (2.0 * hbar_));

    off_ = ia * (-k2);
    diag_.resize(ni);
    for (std::size_t j = 0; j < ni; ++j)
        diag_[j] = 1.0 + ia * (2.0 * k2 + v_[j + 1]);

    // LU of the constant tridiagonal system
    low_.assign(ni, cdouble(0.0));
    inv_den_.resize(ni);
    cdouble den = diag_[0];
    inv_den_[0] = 1.0 / den;
    for (std::size_t j = 1; j < ni; ++j) {
        low_[j] = off_ * inv_den_[j - 1];
        den = diag_[j] - low_[j] * off_;
        if (!std::isfinite(std::abs(den)) || std::abs(den) < 1e-300)
            throw NumericError("propagator: singular pivot at row " + std::to_string(j));
        inv_den_[j] = 1.0 / den;
    }
    rhs_.resize(ni);
}

void CrankNicolson::step(WaveState& state) {
    if (state.psi.size() != grid_.n_points)
        throw ConfigError("propagator: state grid mismatch");
    const std::size_t ni = grid_.n_points - 2;
    const double k2 = hbar_ * hbar_ / (2.0 * m_ * grid_.dx * grid_.dx);
    const cdouble ia(0.0, dt_ / (2.0 * hbar_));
    auto& p = state.psi;

    // rhs = (I - i a H) psi, walls pinned at zero
    for (std::size_t j = 0; j < ni; ++j) {
        const std::size_t i = j + 1;
        const cdouble hpsi = -k2 * (p[i + 1] + p[i - 1]) + (2.0 * k2 + v_[i]) * p[i];
        rhs_[j] = p[i] - ia * hpsi;
    }

    // forward substitution
    for (std::size_t j = 1; j < ni; ++j) rhs_[j] -= low_[j] * rhs_[j - 1];
    // back substitution
    p[ni] = rhs_[ni - 1] * inv_den_[ni - 1];
    for (std::size_t j = ni - 1; j-- > 0;) p[j + 1] = (rhs_[j] - off_ * p[j + 2]) * inv_den_[j];

    p.front() = 0.0;
    p.back() = 0.0;
    ++steps_done_;
    state.t += dt_;
}

} // namespace nelson
