#include "support.hpp"

#include "wstark/errors.hpp"
#include "wstark/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace wstark;
using testing::preset_basis;

namespace {

constexpr double kPi = std::numbers::pi;

double final_error(const Trajectory& traj, double omega1, double delta) {
    const auto& last = traj.samples.back();
    const auto ref = propagate_exact(traj.samples.front(), last.time, omega1, delta);
    double m = 0;
    for (int n = last.n_lo; n <= last.n_hi(); ++n) m = std::max(m, std::abs(last.at(n) - ref.at(n)));
    return m;
}

AmplitudeState centred(int half_width) {
    return AmplitudeState::single_site(0, {-half_width, half_width});
}

WaveFunction gaussian(const Grid& g, double centre, double sigma, double k = 0.0) {
    WaveFunction psi(static_cast<std::size_t>(g.n_points()));
    for (int i = 0; i < g.n_points(); ++i) {
        const double x = g.x(i) - centre;
        psi[static_cast<std::size_t>(i)] = std::exp(-x * x / (4 * sigma * sigma)) * std::polar(1.0, k * x);
    }
    const double n = std::sqrt(wave_norm(psi, g));
    for (auto& v : psi) v /= n;
    return psi;
}

double wave_variance(const WaveFunction& psi, const Grid& g) {
    const double m = wave_mean_position(psi, g);
    double s = 0;
    for (int i = 0; i < g.n_points(); ++i) s += std::norm(psi[static_cast<std::size_t>(i)]) * std::pow(g.x(i) - m, 2);
    return s * g.spacing();
}

}  // namespace

TEST_CASE("RK4 reproduces the exact nearest-neighbour propagator") {
    OdeConfig c;
    c.h = 0.05;
    c.coupling = NearestNeighbor{0.05, 0.2};
    c.t_end = 2 * kPi / 0.2;
    const auto traj = integrate_amplitudes(centred(15), c);
    CHECK(final_error(traj, 0.05, 0.2) < 1e-8);
    CHECK(traj.norm_drift < 1e-9);
    CHECK(traj.samples.back().time == c.t_end);
    CHECK(traj.steps == static_cast<long>(std::ceil(c.t_end / c.h - 1e-9)));
}

TEST_CASE("DOPRI5 reproduces the exact propagator at its sample times") {
    OdeConfig c;
    c.integrator = Integrator::Dopri5;
    c.h = 0.1;
    c.coupling = NearestNeighbor{0.03, -0.05};
    c.t_end = 300;
    c.sample_interval = 25;
    const auto traj = integrate_amplitudes(AmplitudeState(-1, {0.6, cplx(0, 0.8)}, 0).grown({-30, 30}), c);
    CHECK(traj.samples.size() == 13);
    for (const auto& s : traj.samples) CHECK(std::abs(s.time - 25 * std::round(s.time / 25)) < 1e-12);
    CHECK(final_error(traj, 0.03, -0.05) < 1e-9);
}

TEST_CASE("RK4 converges at fourth order") {
    for (double delta : {0.0, 0.7}) {
        auto err = [delta](double h) {
            OdeConfig c;
            c.h = h;
            c.coupling = NearestNeighbor{0.5, delta};
            c.t_end = 20;
            return final_error(integrate_amplitudes(centred(60), c), 0.5, delta);
        };
        CHECK(std::log2(err(0.1) / err(0.05)) == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("uncoupled amplitudes are constant") {
    OdeConfig c;
    c.coupling = NearestNeighbor{0.0, 0.3};
    c.t_end = 50;
    c.stride = 100;
    const auto d0 = AmplitudeState(0, {0.6, 0.8}, 0).grown({-3, 4});
    const auto traj = integrate_amplitudes(d0, c);
    for (const auto& s : traj.samples)
        for (int n = -3; n <= 4; ++n) CHECK(s.at(n) == d0.at(n));
}

TEST_CASE("next-nearest coupling preserves site parity") {
    OdeConfig c;
    c.h = 0.1;
    c.coupling = NextNearest{0.05};
    c.t_end = 200;
    const auto traj = integrate_amplitudes(centred(120), c);
    const auto& last = traj.samples.back();
    double odd = 0, even = 0;
    for (int n = last.n_lo; n <= last.n_hi(); ++n) (n % 2 ? odd : even) += std::norm(last.at(n));
    CHECK(odd == 0.0);
    CHECK(even == doctest::Approx(1.0).epsilon(1e-10));
    // Even sites follow the nearest-neighbour law with doubled index spacing.
    const auto ref = propagate_exact(AmplitudeState::single_site(0, {0, 0}), 200, 0.05, 0.0);
    for (int m = -5; m <= 5; ++m) CHECK(std::abs(last.at(2 * m) - ref.at(m)) < 1e-8);
}

TEST_CASE("full-harmonic coupling: exponential and Bessel forms agree") {
    const auto& b = preset_basis();
    const auto p = LatticeParams::standard_preset(0.1, 0.53);
    auto full = FullHarmonics::from_basis(b, p, 2);
    const CouplingRhs direct(full);
    full.l_max = 20;
    const CouplingRhs expanded(full);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<cplx> d(21), a, e;
    for (auto& v : d) v = {u(rng), u(rng)};
    for (double t : {0.0, 1.3, 77.7, 1234.5}) {
        direct(t, d, a);
        expanded(t, d, e);
        for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(a[i] - e[i]) < 1e-12);
    }
    CHECK_THROWS_AS(FullHarmonics::from_basis(b, p, 0), ConfigError);
    CHECK(model_name(full) == "full-harmonics");
}

TEST_CASE("ODE configuration errors") {
    OdeConfig c;
    c.coupling = NearestNeighbor{1.0, 0.0};
    c.h = 0.6;
    c.t_end = 1;
    CHECK_THROWS_AS(integrate_amplitudes(centred(3), c), ConfigError);
    c.h = 0.1;
    c.stride = 0;
    CHECK_THROWS_AS(integrate_amplitudes(centred(3), c), ConfigError);
    c.stride = 1;
    c.t_end = -1;
    CHECK_THROWS_AS(integrate_amplitudes(centred(3), c), ConfigError);
    c.t_end = 30;
    CHECK_THROWS_AS(integrate_amplitudes(centred(3), c), WindowOverflowError);
}

TEST_CASE("trajectory comparison") {
    const auto d0 = AmplitudeState(0, {0.6, cplx(0, 0.8)}, 0).grown({-20, 20});
    std::vector<double> times;
    for (int i = 0; i <= 10; ++i) times.push_back(30.0 * i);
    const auto a = exact_trajectory(d0, times, 0.02, 0.01);
    CHECK(compare_trajectories(a, a, Gauge::Fixed).max_amplitude == 0.0);

    auto rotated = a;
    for (std::size_t i = 0; i < rotated.samples.size(); ++i)
        for (auto& v : rotated.samples[i].amplitudes) v *= std::polar(1.0, 0.3 * static_cast<double>(i));
    const auto fixed = compare_trajectories(a, rotated, Gauge::Fixed);
    const auto fitted = compare_trajectories(a, rotated, Gauge::FittedGlobalPhase);
    CHECK(fixed.max_amplitude > 0.1);
    CHECK(fixed.max_population < 1e-15);
    CHECK(fitted.max_amplitude < 1e-14);
    CHECK(fitted.samples == 11);

    const auto other = exact_trajectory(d0, times, 0.021, 0.01);
    CHECK(compare_trajectories(a, other, Gauge::FittedGlobalPhase).max_population > 1e-4);
    times.pop_back();
    CHECK_THROWS_AS(compare_trajectories(a, exact_trajectory(d0, times, 0.02, 0.01), Gauge::Fixed), ConfigError);
}

TEST_CASE("free Gaussian spreads at the analytic rate") {
    const auto p = LatticeParams::benchmark(0.0, 0.0, 0.0, 1.0);
    PdeConfig c;
    c.t_end = 10;
    c.sample_stride = 5000;
    const double sigma = 1.0, m = LatticeParams::reduced_mass();
    const auto traj = split_step_evolve(gaussian(c.grid, 0.0, sigma), p, c);
    const double tau = 2 * m * sigma * sigma;
    CHECK(std::abs(wave_variance(traj.final_state, c.grid) - sigma * sigma * (1 + std::pow(10 / tau, 2))) < 1e-6);
    CHECK(std::abs(wave_norm(traj.final_state, c.grid) - 1) < 1e-10);
    CHECK(traj.times.back() == 10.0);
}

TEST_CASE("a Wannier-Stark state is stationary without drive") {
    const auto& b = preset_basis();
    const auto p = LatticeParams::standard_preset();
    const auto psi0 = reconstruct_wavefunction(AmplitudeState::single_site(0, {0, 0}), b, p);
    PdeConfig c;
    c.t_end = 20;
    c.sample_stride = 10000;
    const double e0 = energy_expectation(psi0, p, c.grid, 0.0);
    const auto traj = split_step_evolve(psi0, p, c);
    const auto proj = project_onto_ws(traj.final_state, b, p, 20.0);
    CHECK(std::norm(proj.c.at(0)) > 1 - 1e-4);
    CHECK(!proj.breakdown);
    CHECK(std::abs(energy_expectation(traj.final_state, p, c.grid, 20.0) - e0) < 1e-6);
    CHECK(e0 == doctest::Approx(b.energy(0)).epsilon(1e-4));
}

TEST_CASE("projection onto the basis") {
    const auto& b = preset_basis();
    const auto p = LatticeParams::standard_preset(0.1, 0.5);
    const auto& g = b.grid();
    const auto s3 = b.state(3);
    WaveFunction psi(s3.begin(), s3.end());
    const auto one = project_onto_ws(psi, b, p, 0.0);
    CHECK(std::abs(std::norm(one.c.at(3)) - 1) < 1e-12);
    CHECK(one.leakage < 1e-12);

    WaveFunction mix(psi.size());
    const auto s0 = b.state(0), s1 = b.state(1);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = (s0[i] + s1[i]) / std::sqrt(2.0);
    const auto two = project_onto_ws(mix, b, p, 0.0);
    CHECK(std::norm(two.c.at(0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(two.c.at(1)) == doctest::Approx(0.5).epsilon(1e-12));

    for (double t : {0.0, 3.7, 41.0}) {
        AmplitudeState d(-1, {0.5, cplx(0.1, 0.6), cplx(-0.3, 0.2)}, t);
        d.normalize();
        const auto back = project_onto_ws(reconstruct_wavefunction(d, b, p), b, p, t);
        for (int n = -1; n <= 1; ++n) CHECK(std::abs(back.d.at(n) - d.at(n)) < 1e-12);
    }

    const auto wide = gaussian(g, 0.5, 4.0, 1.0);
    const auto bad = project_onto_ws(wide, b, p, 0.0, 1e-3);
    CHECK(bad.leakage > 1e-3);
    CHECK(bad.breakdown);
}

TEST_CASE("driven lattice stays in the lowest band") {
    const auto& b = preset_basis();
    const auto p = LatticeParams::standard_preset(0.1, 0.5);
    const auto psi0 = reconstruct_wavefunction(AmplitudeState::single_site(0, {0, 0}), b, p);
    PdeConfig c;
    c.t_end = 50;
    c.sample_stride = 100000;
    const auto traj = split_step_evolve(psi0, p, c);
    const auto proj = project_onto_ws(traj.final_state, b, p, 50.0);
    CHECK(proj.leakage < 1e-2);
    CHECK(!proj.breakdown);
}

TEST_CASE("split-step error is second order in the time step") {
    const auto p = LatticeParams::standard_preset(0.1, 0.5);
    const Grid g(-12, 12 - 1.0 / 32, 768);
    const auto psi0 = gaussian(g, 0.5, 0.3);
    auto final = [&](double dt) {
        PdeConfig c;
        c.grid = g;
        c.dt = dt;
        c.t_end = 2;
        c.sample_stride = 1 << 30;
        return split_step_evolve(psi0, p, c).final_state;
    };
    auto dist = [&](const WaveFunction& a, const WaveFunction& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
        return std::sqrt(s * g.spacing());
    };
    const auto ref = final(1e-4), a = final(2e-3), h = final(1e-3);
    CHECK(std::log2(dist(a, ref) / dist(h, ref)) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("PDE configuration and guard errors") {
    const auto p = LatticeParams::standard_preset();
    PdeConfig c;
    c.dt = 4 * kPi * c.grid.spacing() * c.grid.spacing();
    c.t_end = 1;
    const auto psi = gaussian(c.grid, 0.5, 1.0);
    CHECK_THROWS_AS(split_step_evolve(psi, p, c), ConfigError);
    c.dt = 5e-4;
    c.guard_fraction = 0.6;
    CHECK_THROWS_AS(split_step_evolve(psi, p, c), ConfigError);
    c.guard_fraction = 0.1;
    CHECK_THROWS_AS(split_step_evolve(gaussian(c.grid, 22.0, 0.5), p, c), IntegrationError);
}
