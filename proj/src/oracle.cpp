#include "wstark/oracle.hpp"

#include "wstark/errors.hpp"
#include "wstark/fft.hpp"
#include "wstark/ws_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wstark {

void OdeConfig::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("ODE step must be positive and finite");
    if (!std::isfinite(t_end)) throw ConfigError("ODE end time must be finite");
    if (stride < 1) throw ConfigError("sample stride must be at least 1");
    if (sample_interval < 0.0) throw ConfigError("sample interval must be nonnegative");
    if (integrator == Integrator::Dopri5 && (!(rtol > 0.0) || !(atol > 0.0)))
        throw ConfigError("adaptive tolerances must be positive");
    const double rate = characteristic_rate(coupling);
    if (integrator == Integrator::Rk4 && h * rate > step_bound) {
        std::ostringstream msg;
        msg << "ODE step " << h << " times the fastest rate " << rate << " exceeds the stability bound " << step_bound;
        throw ConfigError(msg.str());
    }
}

std::vector<double> Trajectory::times() const {
    std::vector<double> t;
    t.reserve(samples.size());
    for (const auto& s : samples) t.push_back(s.time);
    return t;
}

namespace {

void axpy(std::vector<cplx>& y, const std::vector<cplx>& x, double a, const std::vector<cplx>& base) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = base[i] + a * x[i];
}

void check_window(const AmplitudeState& s, double edge_tol) {
    if (s.edge_amplitude(1) > edge_tol) {
        std::ostringstream msg;
        msg << "ODE amplitude " << s.edge_amplitude(1) << " reached the window edge at t = " << s.time;
        throw WindowOverflowError(msg.str());
    }
}

Trajectory integrate_rk4(const AmplitudeState& d0, const OdeConfig& cfg, const CouplingRhs& rhs) {
    Trajectory traj;
    const double span = cfg.t_end - d0.time;
    const long steps = span == 0.0 ? 0 : static_cast<long>(std::ceil(span / cfg.h - 1e-9));
    const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    const double norm0 = d0.norm();

    std::vector<cplx> y = d0.amplitudes;
    std::vector<cplx> k1, k2, k3, k4, tmp(y.size());
    auto record = [&](double t) {
        traj.samples.emplace_back(d0.n_lo, y, t);
        traj.norm_drift = std::max(traj.norm_drift, std::abs(traj.samples.back().norm() - norm0));
        check_window(traj.samples.back(), cfg.edge_tol);
    };
    record(d0.time);
    for (long k = 0; k < steps; ++k) {
        const double t = d0.time + static_cast<double>(k) * h;
        rhs(t, y, k1);
        axpy(tmp, k1, 0.5 * h, y);
        rhs(t + 0.5 * h, tmp, k2);
        axpy(tmp, k2, 0.5 * h, y);
        rhs(t + 0.5 * h, tmp, k3);
        axpy(tmp, k3, h, y);
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if ((k + 1) % cfg.stride == 0 || k + 1 == steps) record(k + 1 == steps ? cfg.t_end : t + h);
    }
    traj.steps = steps;
    return traj;
}

// Dormand-Prince 5(4) with standard step-size control.
Trajectory integrate_dopri5(const AmplitudeState& d0, const OdeConfig& cfg, const CouplingRhs& rhs) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    Trajectory traj;
    const double norm0 = d0.norm();
    std::vector<cplx> y = d0.amplitudes;
    const std::size_t n = y.size();
    std::vector<cplx> k1, k2, k3, k4, k5, k6, k7, tmp(n), y5(n);
    auto record = [&](double t) {
        traj.samples.emplace_back(d0.n_lo, y, t);
        traj.norm_drift = std::max(traj.norm_drift, std::abs(traj.samples.back().norm() - norm0));
        check_window(traj.samples.back(), cfg.edge_tol);
    };

    std::vector<double> targets;
    if (cfg.sample_interval > 0.0)
        for (long j = 1; d0.time + static_cast<double>(j) * cfg.sample_interval < cfg.t_end - 1e-12; ++j)
            targets.push_back(d0.time + static_cast<double>(j) * cfg.sample_interval);
    targets.push_back(cfg.t_end);

    record(d0.time);
    double t = d0.time;
    double h = cfg.h;
    rhs(t, y, k1);
    for (double target : targets) {
        while (t < target) {
            const bool last = t + h >= target;
            const double step = last ? target - t : h;
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * a21 * k1[i];
            rhs(t + c2 * step, tmp, k2);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * (a31 * k1[i] + a32 * k2[i]);
            rhs(t + c3 * step, tmp, k3);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + step * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            rhs(t + c4 * step, tmp, k4);
            for (std::size_t i = 0; i < n; ++i)
                tmp[i] = y[i] + step * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            rhs(t + c5 * step, tmp, k5);
            for (std::size_t i = 0; i < n; ++i)
                tmp[i] = y[i] + step * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            rhs(t + step, tmp, k6);
            for (std::size_t i = 0; i < n; ++i)
                y5[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            rhs(t + step, y5, k7);
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const cplx e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double scale = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(e) / scale);
            }
            if (err <= 1.0) {
                t = last ? target : t + step;
                y.swap(y5);
                k1.swap(k7);
                ++traj.steps;
            }
            const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (!last || err > 1.0) h = step * factor;
            if (h < 1e-14 * std::max(1.0, std::abs(t))) throw IntegrationError("adaptive step size underflow");
        }
        record(target);
    }
    return traj;
}

}  // namespace

Trajectory integrate_amplitudes(const AmplitudeState& d0, const OdeConfig& cfg) {
    cfg.validate();
    if (cfg.t_end < d0.time) throw ConfigError("ODE end time precedes the initial state");
    if (d0.size() < 1) throw ConfigError("empty amplitude state");
    const CouplingRhs rhs(cfg.coupling);
    return cfg.integrator == Integrator::Rk4 ? integrate_rk4(d0, cfg, rhs) : integrate_dopri5(d0, cfg, rhs);
}

Trajectory exact_trajectory(const AmplitudeState& d0, const std::vector<double>& times, double omega1,
                            double delta) {
    Trajectory traj;
    const double norm0 = d0.norm();
    for (double t : times) {
        traj.samples.push_back(propagate_exact(d0, t, omega1, delta));
        traj.norm_drift = std::max(traj.norm_drift, std::abs(traj.samples.back().norm() - norm0));
    }
    return traj;
}

void PdeConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("PDE time step must be positive and finite");
    const double bound = std::numbers::pi * grid.spacing() * grid.spacing();
    if (dt >= bound) {
        std::ostringstream msg;
        msg << "PDE time step " << dt << " exceeds the kinetic phase bound pi h^2 = " << bound;
        throw ConfigError(msg.str());
    }
    if (!(t_end >= t_start)) throw ConfigError("PDE end time precedes the start time");
    if (sample_stride < 1) throw ConfigError("sample stride must be at least 1");
    if (absorbing_fraction < 0.0 || absorbing_fraction >= 0.5) throw ConfigError("absorbing fraction must be in [0, 0.5)");
    if (guard_fraction < 0.0 || guard_fraction >= 0.5) throw ConfigError("guard fraction must be in [0, 0.5)");
}

double wave_norm(std::span<const cplx> psi, const Grid& grid) {
    double s = 0.0;
    for (const auto& v : psi) s += std::norm(v);
    return s * grid.spacing();
}

double wave_mean_position(std::span<const cplx> psi, const Grid& grid) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < grid.n_points(); ++i) {
        const double p = std::norm(psi[static_cast<std::size_t>(i)]);
        num += p * grid.x(i);
        den += p;
    }
    return num / den;
}

namespace {

std::vector<double> wave_numbers(const Grid& grid) {
    const int n = grid.n_points();
    const double dk = 2.0 * std::numbers::pi / (n * grid.spacing());
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) k[static_cast<std::size_t>(j)] = dk * (j <= n / 2 ? j : j - n);
    return k;
}

double guard_probability(std::span<const cplx> psi, const Grid& grid, double fraction) {
    const double width = fraction * (grid.x_max() - grid.x_min());
    double s = 0.0;
    for (int i = 0; i < grid.n_points(); ++i) {
        const double x = grid.x(i);
        if (x < grid.x_min() + width || x > grid.x_max() - width) s += std::norm(psi[static_cast<std::size_t>(i)]);
    }
    return s * grid.spacing();
}

}  // namespace

double energy_expectation(std::span<const cplx> psi, const LatticeParams& params, const Grid& grid, double t) {
    const int n = grid.n_points();
    if (static_cast<int>(psi.size()) != n) throw ConfigError("wave function does not match the grid");
    FourierTransform fft(n);
    std::copy(psi.begin(), psi.end(), fft.data());
    fft.minus();
    const auto k = wave_numbers(grid);
    double kinetic = 0.0;
    for (int j = 0; j < n; ++j)
        kinetic += std::norm(fft.data()[j]) * k[static_cast<std::size_t>(j)] * k[static_cast<std::size_t>(j)];
    kinetic *= grid.spacing() / n / (2.0 * params.reduced_mass());
    double potential = 0.0;
    for (int i = 0; i < n; ++i) potential += std::norm(psi[static_cast<std::size_t>(i)]) * potential_eval(params, grid.x(i), t);
    return kinetic + potential * grid.spacing();
}

WaveTrajectory split_step_evolve(const WaveFunction& psi0, const LatticeParams& params, const PdeConfig& cfg,
                                 const WaveObserver& observer) {
    cfg.validate();
    const Grid& grid = cfg.grid;
    const int n = grid.n_points();
    if (static_cast<int>(psi0.size()) != n) throw ConfigError("initial wave function does not match the grid");

    const double span = cfg.t_end - cfg.t_start;
    const long steps = span == 0.0 ? 0 : static_cast<long>(std::ceil(span / cfg.dt - 1e-9));
    const double dt = steps > 0 ? span / static_cast<double>(steps) : 0.0;

    std::vector<cplx> static_half(static_cast<std::size_t>(n));
    std::vector<double> mask(static_cast<std::size_t>(n), 1.0);
    const double width = cfg.absorbing_fraction * (grid.x_max() - grid.x_min());
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double vs = params.v0() * std::cos(2.0 * std::numbers::pi * x) + params.f() * x;
        static_half[static_cast<std::size_t>(i)] = std::polar(1.0, -0.5 * dt * vs);
        if (width > 0.0) {
            const double depth = std::max(grid.x_min() + width - x, x - (grid.x_max() - width)) / width;
            if (depth > 0.0) mask[static_cast<std::size_t>(i)] = std::pow(std::cos(0.5 * std::numbers::pi * depth), 0.125);
        }
    }
    const auto k = wave_numbers(grid);
    std::vector<cplx> kinetic(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double kj = k[static_cast<std::size_t>(j)];
        kinetic[static_cast<std::size_t>(j)] = std::polar(1.0 / n, -dt * kj * kj / (2.0 * params.reduced_mass()));
    }

    FourierTransform fft(n);
    cplx* psi = fft.data();
    std::copy(psi0.begin(), psi0.end(), psi);

    WaveTrajectory out;
    auto sample = [&](double t) {
        const std::span<const cplx> view(psi, static_cast<std::size_t>(n));
        const double guard = guard_probability(view, grid, cfg.guard_fraction);
        if (guard > cfg.contamination_tol) {
            std::ostringstream msg;
            msg << "wave function reached the outer " << cfg.guard_fraction * 100 << "% of the box at t = " << t
                << " (probability " << guard << ", tolerance " << cfg.contamination_tol << ")";
            throw IntegrationError(msg.str());
        }
        out.times.push_back(t);
        out.norms.push_back(wave_norm(view, grid));
        out.mean_x.push_back(wave_mean_position(view, grid));
        if (cfg.keep_snapshots) out.snapshots.emplace_back(view.begin(), view.end());
        if (observer) observer(t, view);
    };

    auto half_potential = [&](double t_mid) {
        // exp(-i dt/2 [V_s(x) - f0 x sin(omega t_mid)]) with the drive ramp built incrementally.
        const double alpha = 0.5 * dt * params.f0() * std::sin(params.omega() * t_mid);
        cplx ramp = std::polar(1.0, alpha * grid.x_min());
        const cplx ratio = std::polar(1.0, alpha * grid.spacing());
        for (int i = 0; i < n; ++i) {
            psi[i] *= static_half[static_cast<std::size_t>(i)] * ramp;
            ramp *= ratio;
        }
    };

    sample(cfg.t_start);
    for (long s = 0; s < steps; ++s) {
        const double t_mid = cfg.t_start + (static_cast<double>(s) + 0.5) * dt;
        half_potential(t_mid);
        fft.minus();
        for (int j = 0; j < n; ++j) psi[j] *= kinetic[static_cast<std::size_t>(j)];
        fft.plus();
        half_potential(t_mid);
        if (width > 0.0)
            for (int i = 0; i < n; ++i) psi[i] *= mask[static_cast<std::size_t>(i)];
        if ((s + 1) % cfg.sample_stride == 0 || s + 1 == steps)
            sample(s + 1 == steps ? cfg.t_end : cfg.t_start + static_cast<double>(s + 1) * dt);
    }
    out.steps = steps;
    out.final_state.assign(psi, psi + n);
    return out;
}

Projection project_onto_ws(std::span<const cplx> psi, const WannierStarkBasis& basis, const LatticeParams& params,
                           double t, double leakage_threshold) {
    const Grid& grid = basis.grid();
    if (static_cast<int>(psi.size()) != grid.n_points()) throw ConfigError("wave function does not match the basis grid");
    const SiteWindow w = basis.sites();
    Projection out{AmplitudeState::zeros(w, t), AmplitudeState::zeros(w, t), 0.0, false};
    double captured = 0.0;
    for (int n = w.n_lo; n <= w.n_hi; ++n) {
        const auto phi = basis.state(n);
        cplx s{};
        for (int i = 0; i < grid.n_points(); ++i) s += phi[static_cast<std::size_t>(i)] * psi[static_cast<std::size_t>(i)];
        s *= grid.spacing();
        out.c[n] = s;
        captured += std::norm(s);
        const double phase = basis.ladder_origin() * t - phase_phi(n, t, params, basis.x0());
        out.d[n] = s * std::polar(1.0, phase);
    }
    out.leakage = 1.0 - captured;
    out.breakdown = out.leakage > leakage_threshold;
    return out;
}

WaveFunction reconstruct_wavefunction(const AmplitudeState& d, const WannierStarkBasis& basis,
                                      const LatticeParams& params) {
    const Grid& grid = basis.grid();
    WaveFunction psi(static_cast<std::size_t>(grid.n_points()));
    for (int n = d.n_lo; n <= d.n_hi(); ++n) {
        const cplx dn = d.at(n);
        if (dn == cplx{}) continue;
        if (!basis.sites().contains(n)) throw ConfigError("amplitude on site " + std::to_string(n) + " outside the basis window");
        const cplx c = dn * std::polar(1.0, phase_phi(n, d.time, params, basis.x0()) - basis.ladder_origin() * d.time);
        const auto phi = basis.state(n);
        for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += c * phi[i];
    }
    return psi;
}

ComparisonReport compare_trajectories(const Trajectory& a, const Trajectory& b, Gauge gauge,
                                      const SiteMatrixElements* x, const LatticeParams* params) {
    if (a.samples.size() != b.samples.size()) throw ConfigError("trajectories have different sample counts");
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double ta = a.samples[i].time, tb = b.samples[i].time;
        if (std::abs(ta - tb) > 1e-12 * std::max(1.0, std::abs(ta))) throw ConfigError("trajectories are sampled at different times");
    }
    if ((x == nullptr) != (params == nullptr)) throw ConfigError("matrix elements and parameters must be given together");

    ComparisonReport r;
    r.samples = a.samples.size();
    double sp = 0, sc = 0, sx = 0, sa = 0;
    long np = 0, nc = 0, na = 0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const auto& sa_ = a.samples[i];
        const auto& sb = b.samples[i];
        const int lo = std::min(sa_.n_lo, sb.n_lo);
        const int hi = std::max(sa_.n_hi(), sb.n_hi());
        cplx phase = 1.0;
        if (gauge == Gauge::FittedGlobalPhase) {
            cplx overlap{};
            for (int n = lo; n <= hi; ++n) overlap += std::conj(sb.at(n)) * sa_.at(n);
            if (std::abs(overlap) > 0.0) phase = overlap / std::abs(overlap);
        }
        for (int n = lo; n <= hi; ++n) {
            const double dp = std::abs(std::norm(sa_.at(n)) - std::norm(sb.at(n)));
            r.max_population = std::max(r.max_population, dp);
            sp += dp * dp;
            ++np;
            const double dc = std::abs(std::conj(sa_.at(n)) * sa_.at(n + 1) - std::conj(sb.at(n)) * sb.at(n + 1));
            r.max_coherence = std::max(r.max_coherence, dc);
            sc += dc * dc;
            ++nc;
            const double da = std::abs(sa_.at(n) - phase * sb.at(n));
            r.max_amplitude = std::max(r.max_amplitude, da);
            sa += da * da;
            ++na;
        }
        const double xa = x ? mean_position_direct(sa_, *x, *params) : sa_.moment(1) / sa_.norm();
        const double xb = x ? mean_position_direct(sb, *x, *params) : sb.moment(1) / sb.norm();
        r.max_mean_x = std::max(r.max_mean_x, std::abs(xa - xb));
        sx += (xa - xb) * (xa - xb);
    }
    if (np) r.rms_population = std::sqrt(sp / static_cast<double>(np));
    if (nc) r.rms_coherence = std::sqrt(sc / static_cast<double>(nc));
    if (na) r.rms_amplitude = std::sqrt(sa / static_cast<double>(na));
    if (r.samples) r.rms_mean_x = std::sqrt(sx / static_cast<double>(r.samples));
    return r;
}

}  // namespace wstark
