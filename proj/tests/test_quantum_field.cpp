#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nelson/wavefunction.hpp"

using namespace nelson;

TEST_SUITE("quantum-field") {

TEST_CASE("grid spacing is exact and uniform") {
    const Grid1D g = Grid1D::from_spacing(-1000.0, 1000.0, 0.05);
    CHECK(g.n_points == 40001);
    CHECK(g.dx == doctest::Approx((g.x_max - g.x_min) / double(g.n_points - 1)).epsilon(0));
    CHECK(g.x(0) == g.x_min);
    CHECK(g.x(g.n_points - 1) == doctest::Approx(g.x_max).epsilon(1e-15));
    CHECK_THROWS_AS(Grid1D::from_extent(1.0, -1.0, 10), ConfigError);
    CHECK_THROWS_AS(Grid1D::from_extent(-1.0, 1.0, 2), ConfigError);
}

TEST_CASE("rect_potential: region values and the closed edge") {
    // grid chosen so +-d/2 sit exactly on grid points
    const Grid1D g = Grid1D::from_extent(-8.0, 8.0, 33); // dx = 0.5
    const BarrierSpec b{1.0, 4.0, 1.0, 1.0};
    const PotentialField f = rect_potential(b, g);

    auto at = [&](double x) { return f.v[static_cast<std::size_t>(std::lround((x - g.x_min) / g.dx))]; };
    CHECK(at(0.0) == 1.0);    // region II
    CHECK(at(-6.0) == 0.0);   // region I
    CHECK(at(6.0) == 0.0);    // region III
    CHECK(at(2.0) == 1.0);    // x = +d/2 exactly: closed interval
    CHECK(at(-2.0) == 1.0);   // x = -d/2 exactly
    CHECK(at(2.5) == 0.0);

    const BarrierSpec too_wide{1.0, 100.0, 1.0, 1.0};
    CHECK_THROWS_AS(rect_potential(too_wide, g), ConfigError);
}

TEST_CASE("init_gaussian: discrete norm, moments, boundary behavior") {
    const Grid1D g = Grid1D::from_spacing(-1000.0, 1000.0, 0.1);
    const PacketSpec p{-500.0, 1.0, 50.0};
    const WaveState s = init_gaussian(p, g);

    CHECK(std::fabs(s.norm() - 1.0) <= 1e-12);
    CHECK(s.psi.front() == cdouble(0.0));
    CHECK(s.psi.back() == cdouble(0.0));
    CHECK(std::fabs(s.mean_x() - (-500.0)) <= g.dx);

    // position variance against direct quadrature of the sampled density
    const double var = s.var_x();
    CHECK(var == doctest::Approx(50.0 * 50.0).epsilon(1e-3));

    // momentum expectation from the phase gradient
    CHECK(s.mean_p(1.0) == doctest::Approx(1.0).epsilon(1e-6));

    // packet rammed against the wall loses tail mass -> config error
    const PacketSpec bad{-950.0, 1.0, 50.0};
    CHECK_THROWS_AS(init_gaussian(bad, g), ConfigError);
}

TEST_CASE("probability_in_region: normalization, clamping, split masses") {
    const Grid1D g = Grid1D::from_spacing(-1000.0, 1000.0, 0.1);
    const WaveState s = init_gaussian({-500.0, 1.0, 50.0}, g);

    CHECK(probability_in_region(s, g.x_min, g.x_max) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(probability_in_region(s, 200.0, 100.0) == 0.0); // empty overlap
    CHECK(probability_in_region(s, 2000.0, 3000.0) == 0.0);

    // region I for the default packet holds essentially all the mass
    CHECK(probability_in_region(s, g.x_min, -1.0) == doctest::Approx(1.0).epsilon(1e-8));

    const double left = probability_in_region(s, g.x_min, -500.0);
    CHECK(left == doctest::Approx(0.5).epsilon(1e-2)); // split at the center
}

TEST_CASE("energy expectation of the free packet matches e0 + localization term") {
    const Grid1D g = Grid1D::from_spacing(-300.0, 300.0, 0.05);
    const PacketSpec p{0.0, 1.0, 10.0};
    const WaveState s = init_gaussian(p, g);
    PotentialField zero;
    zero.grid = g;
    zero.v.assign(g.n_points, 0.0);
    // <H> = p^2/2m + hbar^2/(8 m dx^2) for the minimum-uncertainty packet
    const double expect = 0.5 + 1.0 / (8.0 * 10.0 * 10.0);
    CHECK(s.energy(zero, 1.0, 1.0) == doctest::Approx(expect).epsilon(1e-4));
}

} // TEST_SUITE
