#include "support.hpp"

#include "wstark/errors.hpp"
#include "wstark/ws_basis.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace wstark;
using testing::preset_basis;

namespace {

/// Lowest two bands of v0 cos(2 pi x) at quasi-momentum q from a plane-wave expansion.
std::pair<double, double> mathieu_levels(double v0, double q) {
    const int m = 15;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * m + 1, 2 * m + 1);
    for (int j = -m; j <= m; ++j) {
        const double k = q + 2 * std::numbers::pi * j;
        h(j + m, j + m) = k * k / (2 * kReducedMass);
        if (j < m) h(j + m, j + m + 1) = h(j + m + 1, j + m) = v0 / 2;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

}  // namespace

TEST_CASE("preset matrix elements are close to the quoted values") {
    const auto& b = preset_basis();
    CHECK(b.x1() == doctest::Approx(5e-2).epsilon(0.2));
    CHECK(std::abs(b.x2()) == doctest::Approx(8e-4).epsilon(0.3));
    CHECK(b.x1() > 0);
    CHECK(std::abs(b.x_p(3)) < std::abs(b.x2()));
    CHECK(std::abs(b.x2()) < b.x1());
    CHECK(std::abs(b.x0() - 0.5) < 0.05);
}

TEST_CASE("ladder, translation and orthonormality invariants") {
    const auto& b = preset_basis();
    const auto& d = b.diagnostics();
    CHECK(b.sites().size() >= 10);
    CHECK(d.ladder_residual < 1e-4 * b.f());
    CHECK(d.translation_residual < 1e-4);
    CHECK(d.ortho_residual < 1e-8);
    CHECK(d.diagonal_residual < 1e-4);
    CHECK(d.offdiagonal_residual < 1e-4);
    for (int n = b.sites().n_lo; n < b.sites().n_hi; ++n) CHECK(b.energy(n + 1) - b.energy(n) == doctest::Approx(0.5).epsilon(1e-6));
    for (const auto& s : d.sites) {
        CHECK(std::abs(s.centroid - site_center(s.site)) < 0.5);
        CHECK(s.participation < 3.0);
    }
    CHECK(d.next_band_gap > 1.0);
}

TEST_CASE("matrix elements do not depend on the pair of sites") {
    const auto& b = preset_basis();
    for (int n : {-8, -3, 0, 4, 9}) {
        CHECK(matrix_element_x(b, n, n) - b.x0() == doctest::Approx(n).epsilon(1e-8));
        CHECK(matrix_element_x(b, n, n + 1) == doctest::Approx(b.x1()).epsilon(1e-4));
        CHECK(matrix_element_x(b, n, n - 1) == doctest::Approx(b.x1()).epsilon(1e-4));
        CHECK(matrix_element_x(b, n, n + 2) == doctest::Approx(b.x2()).epsilon(1e-3));
        CHECK(matrix_element_x(b, n, n + 1) == doctest::Approx(matrix_element_x(b, n + 1, n)).epsilon(1e-14));
        const double x2nn = matrix_element_x2(b, n, n);
        CHECK(std::abs(x2nn - (b.x0_sq() + 2 * n * b.x0() + n * n)) < 1e-4);
        CHECK(std::abs(matrix_element_x2(b, n, n + 1) - (b.x1_sq() + 2 * n * b.x1())) < 1e-4);
    }
    CHECK(std::abs(b.x1_sq()) < 10 * std::abs(b.x1() * b.x0()));
    CHECK(std::abs(b.x1_sq()) > 0.1 * std::abs(b.x1() * b.x0()));
}

TEST_CASE("grid halving changes the matrix elements very little") {
    const auto& b = preset_basis();
    const auto fine = solve_ws_basis(LatticeParams::standard_preset(), b.grid().refined(), b.sites());
    CHECK(std::abs(fine.x0() - b.x0()) < 1e-6);
    CHECK(std::abs(fine.x1_sq() - b.x1_sq()) < 1e-6);
    CHECK(std::abs(fine.x1() / b.x1() - 1) < 1e-2);
    CHECK(std::abs(fine.x2() / b.x2() - 1) < 1e-2);
}

TEST_CASE("second-order stencil converges to the same elements") {
    BasisOptions o;
    o.stencil_order = 2;
    const auto g = Grid::commensurate(-24, 24, 128);
    const auto b2 = solve_ws_basis(LatticeParams::standard_preset(), g, {-12, 12}, o);
    CHECK(b2.x1() == doctest::Approx(preset_basis().x1()).epsilon(1e-3));
}

TEST_CASE("basis construction is deterministic") {
    const auto g = Grid::standard_default();
    const auto a = solve_ws_basis(LatticeParams::standard_preset(), g, {-4, 4});
    const auto b = solve_ws_basis(LatticeParams::standard_preset(), g, {-4, 4});
    CHECK(a.energies() == b.energies());
    for (int n = -4; n <= 4; ++n) {
        const auto sa = a.state(n), sb = b.state(n);
        CHECK(std::equal(sa.begin(), sa.end(), sb.begin()));
    }
    CHECK(a.x1() == b.x1());
}

TEST_CASE("smaller tilt increases X1") {
    const auto g = Grid::standard_default();
    double prev = 0;
    for (double f : {0.7, 0.5, 0.35}) {
        const auto b = solve_ws_basis(LatticeParams::make(4.5, f, 0, 0.5), g, {-3, 3});
        CHECK(b.x1() > prev);
        prev = b.x1();
    }
}

TEST_CASE("Hamiltonian is symmetric and rejects coarse grids") {
    const auto p = LatticeParams::standard_preset();
    const auto h = build_hamiltonian(p, Grid(-20, 20, 2048));
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j) CHECK(h(i, j) == h(j, i));
    CHECK_THROWS_AS(build_hamiltonian(p, Grid(-20, 20, 200)), ConfigError);
    CHECK_THROWS_AS(solve_ws_basis(p, Grid::standard_default(), {-22, 0}), ConfigError);
}

TEST_CASE("free particle reproduces the box spectrum") {
    // Walls one spacing outside the grid; pi^2 k^2 / (2 m L^2) = k^2 / L^2 with m = pi^2 / 2.
    const Grid g(-5, 5, 401);
    const double length = g.x_max() - g.x_min() + 2 * g.spacing();
    for (int order : {2, 4}) {
        BasisOptions o;
        o.stencil_order = order;
        const auto values = eigenvalues_in_range(build_hamiltonian(LatticeParams::benchmark(0, 0, 0, 1), g, o), -1.0, 0.5);
        REQUIRE(values.size() >= 6);
        for (int k = 1; k <= 6; ++k) {
            const double e = values[static_cast<std::size_t>(k - 1)];
            if (order == 2) {
                // Exact eigenvalues of the three-point Dirichlet Laplacian.
                const double c = 1.0 / (2 * kReducedMass * g.spacing() * g.spacing());
                CHECK(e == doctest::Approx(2 * c * (1 - std::cos(k * std::numbers::pi * g.spacing() / length))).epsilon(1e-10));
            } else {
                // Five-point stencil with zero ghost values: the effective wall moves slightly inward.
                CHECK(e == doctest::Approx(k * k / (length * length)).epsilon(1e-3));
            }
        }
    }
}

TEST_CASE("untilted lattice: lowest band matches the plane-wave band structure") {
    const Grid g(-20, 20, 2561);
    const auto h = build_hamiltonian(LatticeParams::benchmark(4.5, 0, 0, 1), g);
    double bottom = 1e9, top = -1e9, second = 1e9;
    for (int i = 0; i <= 64; ++i) {
        const auto [e0, e1] = mathieu_levels(4.5, std::numbers::pi * i / 64);
        bottom = std::min(bottom, e0);
        top = std::max(top, e0);
        second = std::min(second, e1);
    }
    const auto values = eigenvalues_in_range(h, bottom - 1.0, second - 1e-3);
    CHECK(values.size() >= 36);
    for (double e : values) {
        CHECK(e >= bottom - 1e-5);
        CHECK(e <= top + 1e-5);
    }
    CHECK(top - bottom < 0.1 * (second - top));
}
