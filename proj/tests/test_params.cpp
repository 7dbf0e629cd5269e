#include "wstark/config.hpp"
#include "wstark/errors.hpp"
#include "wstark/params.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wstark;

TEST_CASE("lattice parameters are validated and delta is omega - f") {
    const auto p = LatticeParams::make(4.5, 0.5, 0.1, 0.52);
    CHECK(p.delta() == 0.52 - 0.5);
    CHECK(p.bloch_frequency() == 0.5);
    CHECK(LatticeParams::reduced_mass() == doctest::Approx(std::numbers::pi * std::numbers::pi / 2));
    CHECK_THROWS_AS(LatticeParams::make(0.0, 0.5, 0.0, 0.5), ConfigError);
    CHECK_THROWS_AS(LatticeParams::make(4.5, -0.5, 0.0, 0.5), ConfigError);
    CHECK_THROWS_AS(LatticeParams::make(4.5, 0.5, -0.1, 0.5), ConfigError);
    CHECK_THROWS_AS(LatticeParams::make(4.5, 0.5, 0.1, 0.0), ConfigError);
    CHECK_THROWS_AS(LatticeParams::make(NAN, 0.5, 0.1, 0.5), ConfigError);
    CHECK_NOTHROW(LatticeParams::benchmark(0.0, 0.0, 0.0, 1.0));
}

TEST_CASE("strong drives raise a smooth-modulation warning") {
    CHECK(LatticeParams::make(4.5, 0.5, 0.1, 0.5).validity_warnings().empty());
    CHECK_FALSE(LatticeParams::make(4.5, 0.5, 2.0, 0.5).validity_warnings().empty());
}

TEST_CASE("potential examples") {
    const auto s = LatticeParams::make(4.5, 0.5, 0.0, 0.5);
    CHECK(potential_eval(s, 0.0, 0.0) == doctest::Approx(4.5));
    CHECK(potential_eval(s, 1.0, 123.0) == doctest::Approx(5.0));
    const auto d = LatticeParams::make(4.5, 0.5, 0.1, 0.5);
    CHECK(potential_eval(d, 2.0, std::numbers::pi / (2 * 0.5)) == doctest::Approx(5.3));
}

TEST_CASE("potential tilt periodicity and evenness about well centers") {
    const auto p = LatticeParams::make(4.5, 0.5, 0.0, 0.5);
    for (double x = -3.7; x < 3.0; x += 0.31) {
        CHECK(potential_eval(p, x + 1, 0) - potential_eval(p, x, 0) == doctest::Approx(0.5).epsilon(1e-13));
        const double c = site_center(2), u = x / 7;
        const double even = (potential_eval(p, c + u, 0) - p.f() * (c + u)) - (potential_eval(p, c - u, 0) - p.f() * (c - u));
        CHECK(std::abs(even) < 1e-12);
    }
}

TEST_CASE("lattice parameters load from config") {
    const auto c = KeyValueConfig::parse("[lattice]\nv0 = 4.5\nf = 0.5\n");
    const auto p = LatticeParams::from_config(c);
    CHECK(p.f0() == 0.0);
    CHECK(p.omega() == 0.5);
    CHECK(p.delta() == 0.0);
}

TEST_CASE("grid invariants") {
    const Grid g(-2.0, 2.0, 5);
    CHECK(g.spacing() == 1.0);
    CHECK(g.x(4) == 2.0);
    CHECK_THROWS_AS(Grid(1.0, 0.0, 10), ConfigError);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 1), ConfigError);
    const Grid d = Grid::standard_default();
    CHECK(d.samples_per_step() == 64);
    CHECK(d.refined().samples_per_step() == 128);
    CHECK(d.is_bulk_site(12));
    CHECK(d.is_bulk_site(-12));
    CHECK_FALSE(d.is_bulk_site(-22));
    CHECK(Grid::commensurate(-1.0, 1.0, 10).n_points() == 21);
}
