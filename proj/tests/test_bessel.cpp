#include "wstark/bessel.hpp"
#include "wstark/params.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace wstark;

namespace {

/// Power series in long double, adequate for |x| <= 10 and small orders.
long double series_j(int n, long double x) {
    const int m = std::abs(n);
    long double term = 1.0L;
    for (int k = 1; k <= m; ++k) term *= x / (2.0L * k);
    long double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -(x * x / 4.0L) / (static_cast<long double>(k) * (k + m));
        sum += term;
        if (std::abs(term) < 1e-30L * std::abs(sum)) break;
    }
    return (n < 0 && (m % 2)) ? -sum : sum;
}

}  // namespace

TEST_CASE("Bessel special values") {
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
    CHECK(bessel_j(-7, 0.0) == 0.0);
    CHECK(std::abs(bessel_j(1, kFirstZeroJ1)) < 1e-14);
}

TEST_CASE("first zero of J1 found by bisection agrees with the series oracle") {
    double a = 3.5, b = 4.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        (bessel_j(1, a) * bessel_j(1, m) <= 0 ? b : a) = m;
    }
    CHECK(std::abs(a - kFirstZeroJ1) < 1e-12);
    CHECK(std::abs(static_cast<double>(series_j(1, static_cast<long double>(a)))) < 1e-12);
}

TEST_CASE("Bessel matches the long double power series for |x| <= 10") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-10, 10);
    std::uniform_int_distribution<int> un(-12, 12);
    for (int s = 0; s < 400; ++s) {
        const double x = ux(rng);
        const int n = un(rng);
        const double ref = static_cast<double>(series_j(n, x));
        CHECK(std::abs(bessel_j(n, x) - ref) <= 1e-12 * std::abs(ref) + 1e-15);
    }
}

TEST_CASE("Bessel matches Boost over large arguments and orders") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-1000, 1000);
    std::uniform_int_distribution<int> un(-300, 300);
    for (int s = 0; s < 300; ++s) {
        const double x = ux(rng);
        const int n = un(rng);
        const double ref = boost::math::cyl_bessel_j(n, x);
        CHECK(std::abs(bessel_j(n, x) - ref) <= 1e-12 * std::max(std::abs(ref), 5e-3));
    }
}

TEST_CASE("negative orders and reflection") {
    for (double x : {0.3, 2.0, -5.5, 17.0}) {
        for (int n = 0; n <= 9; ++n) {
            CHECK(bessel_j(-n, x) == doctest::Approx((n % 2 ? -1.0 : 1.0) * bessel_j(n, x)).epsilon(1e-13));
        }
    }
}

TEST_CASE("Bessel band agrees with single evaluations") {
    const BesselBand band(40, 7.3);
    CHECK(band.n_max() == 40);
    for (int n = -40; n <= 40; ++n) CHECK(band[n] == doctest::Approx(bessel_j(n, 7.3)).epsilon(1e-13).scale(1e-20));
    CHECK(band[41] == 0.0);
    CHECK_THROWS(BesselBand(-1, 1.0));
    CHECK_THROWS(bessel_j(0, INFINITY));
}

TEST_CASE("truncation rule leaves a negligible tail") {
    CHECK(bessel_cutoff(0.0) == 20);
    CHECK(bessel_cutoff(3.2) == 24);
    for (double x : {1.0, 10.0, 50.0, 300.0}) {
        const int c = bessel_cutoff(x);
        CHECK(c >= std::ceil(x) + 20);
        CHECK(std::abs(bessel_j(c, x)) < 1e-16);
    }
}

TEST_CASE("generator identity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int s = 0; s < 50; ++s) {
        const double z = 10 * u(rng), wt = std::numbers::pi * u(rng);
        const int c = bessel_cutoff(z);
        const BesselBand b(c, z);
        std::complex<double> sum{};
        for (int l = -c; l <= c; ++l) sum += b[l] * std::pow(std::complex<double>(0, -1), l) * std::polar(1.0, l * wt);
        CHECK(std::abs(sum - std::polar(1.0, -z * std::cos(wt))) < 1e-10);
    }
}

TEST_CASE("recurrence, sum and normalization identities") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int s = 0; s < 50; ++s) {
        const double q = u(rng);
        const int c = bessel_cutoff(q);
        const BesselBand b(c + 6, q);
        for (int l = -6; l <= 6; ++l) {
            const double lhs = l * b[l], rhs = 0.5 * q * (b[l + 1] + b[l - 1]);
            CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(std::abs(lhs), 1.0));
        }
        for (int k = -5; k <= 5; ++k) {
            double acc = 0;
            for (int l = -c; l <= c; ++l) acc += b[l] * b[l + k];
            CHECK(std::abs(acc - (k == 0 ? 1.0 : 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("polar vectors fold negative radii") {
    const PolarVector v(-2.0, 0.3);
    CHECK(v.radius() == 2.0);
    CHECK(std::abs(v.to_complex() - std::polar(-2.0, 0.3)) < 1e-15);
    const auto w = PolarVector::from_complex({0.0, -3.0});
    CHECK(w.radius() == doctest::Approx(3.0));
    CHECK(w.angle() == doctest::Approx(-std::numbers::pi / 2));
}

TEST_CASE("addition theorem examples") {
    const PolarVector v(1.7, 0.4), zero(0.0, 0.0);
    CHECK(std::abs(addition_theorem_rhs(0, v, v) - 1.0) < 1e-15);
    CHECK(std::abs(addition_theorem_rhs(1, zero, PolarVector(2.5, 0.0)) - bessel_j(1, 2.5)) < 1e-15);
    CHECK(std::abs(addition_theorem_lhs(0, v, v, 40) - 1.0) < 1e-12);

    // r0 = (2 W/d)(1 - cos d t) at -pi/2, r1 = (2 W/d) sin d t at 0 give Q and Theta = d t / 2.
    const double w = 0.03, d = 0.011, t = 171.0;
    const PolarVector r0(2 * w / d * (1 - std::cos(d * t)), -std::numbers::pi / 2);
    const PolarVector r1(2 * w / d * std::sin(d * t), 0.0);
    const auto diff = PolarVector::from_complex(r1.to_complex() - r0.to_complex());
    CHECK(diff.radius() == doctest::Approx(std::abs(4 * w / d * std::sin(d * t / 2))).epsilon(1e-12));
    const double theta = std::sin(d * t / 2) >= 0 ? d * t / 2 : d * t / 2 - std::numbers::pi;
    CHECK(std::abs(std::remainder(diff.angle() - theta, 2 * std::numbers::pi)) < 1e-12);
}

TEST_CASE("addition theorem holds on a lattice of vectors") {
    for (double r0 : {0.0, 1.0, 2.5, 4.0, 5.0}) {
        for (double r1 : {0.0, 0.5, 2.0, 3.5, 5.0}) {
            const PolarVector v0(r0, 0.7 * r0 - 1.0), v1(r1, -0.4 * r1 + 2.0);
            for (int q = -5; q <= 5; ++q)
                CHECK(std::abs(addition_theorem_lhs(q, v0, v1, 40) - addition_theorem_rhs(q, v0, v1)) < 1e-10);
        }
    }
    // r1 = 0 collapses the sum to a single term.
    const PolarVector v0(3.0, 0.8), none(0.0, 0.0);
    for (int q = -3; q <= 3; ++q) {
        const auto single = bessel_j(-q, 3.0) * std::polar(1.0, q * 0.8);
        CHECK(std::abs(addition_theorem_lhs(q, v0, none, 30) - single) < 1e-13);
    }
    CHECK_THROWS_AS(addition_theorem_lhs(0, PolarVector(30.0, 0.0), v0, 10), std::invalid_argument);
}
