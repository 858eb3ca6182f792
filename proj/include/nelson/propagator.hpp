#ifndef NELSON_PROPAGATOR_HPP
#define NELSON_PROPAGATOR_HPP

#include <vector>

#include "nelson/wavefunction.hpp"

namespace nelson {

/// Crank-Nicolson propagator for the time-dependent Schrodinger equation
/// with hard-wall (Dirichlet) boundaries:
///
///   (I + i dt H / 2hbar) psi(t+dt) = (I - i dt H / 2hbar) psi(t)
///
/// Unconditionally stable, unitary up to roundoff, second order in dt.
/// The potential is static, so the tridiagonal LU factorization is done
/// once at construction; each step is a forward/backward substitution.
class CrankNicolson {
public:
    CrankNicolson(const PotentialField& potential, double dt, double m, double hbar);

    /// Advance one step of dt; t is advanced accordingly.
    void step(WaveState& state);

    double dt() const { return dt_; }

private:
    Grid1D grid_;
    std::vector<double> v_;
    double dt_;
    double m_;
    double hbar_;

    cdouble off_;                  // constant off-diagonal of the implicit matrix
    std::vector<cdouble> diag_;    // diagonal of the implicit matrix (interior)
    std::vector<cdouble> low_;     // LU multipliers
    std::vector<cdouble> inv_den_; // reciprocal pivots
    std::vector<cdouble> rhs_;     // step scratch
    std::size_t steps_done_ = 0;
};

} // namespace nelson

#endif
