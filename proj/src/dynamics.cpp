#include "wstark/dynamics.hpp"

#include "wstark/bessel.hpp"
#include "wstark/errors.hpp"
#include "wstark/fft.hpp"
#include "wstark/ws_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wstark {

SiteMatrixElements SiteMatrixElements::from(const WannierStarkBasis& basis) {
    return {basis.x0(), basis.x1(), basis.x2(), basis.x0_sq(), basis.x1_sq()};
}

double phase_phi(int n, double t, const LatticeParams& params, double x00) {
    return -n * params.bloch_frequency() * t - params.drive_ratio() * (x00 + n) * std::cos(params.omega() * t);
}

double dressing_phase(double t, const LatticeParams& params) {
    return -params.bloch_frequency() * t - params.drive_ratio() * std::cos(params.omega() * t);
}

double rabi_frequency(int order, const LatticeParams& params, double x_p) {
    if (order != 1 && order != 2) throw ConfigError("Rabi frequency order must be 1 or 2");
    const double a = params.omega() * x_p * bessel_j(1, params.drive_ratio());
    const double b = rabi_frequency_harmonic_form(params, x_p);
    if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "Rabi frequency forms disagree: " << a << " vs " << b;
        throw Error(msg.str());
    }
    return a;
}

double rabi_frequency(int order, const LatticeParams& params, const WannierStarkBasis& basis) {
    if (basis.v0() != params.v0() || basis.f() != params.f())
        throw ConfigError("basis was built for different lattice parameters");
    return rabi_frequency(order, params, basis.x_p(order));
}

double rabi_frequency_harmonic_form(const LatticeParams& params, double x_p) {
    const double z = params.drive_ratio();
    return 0.5 * params.f0() * x_p * (bessel_j(0, z) + bessel_j(2, z));
}

double second_order_coupling_from_harmonics(const LatticeParams& params, double x2) {
    return 0.5 * params.omega() * x2 * bessel_j(1, 2.0 * params.drive_ratio());
}

double q_envelope(double t, double omega1, double delta) {
    if (delta == 0.0) return 2.0 * omega1 * t;
    return 4.0 * omega1 / delta * std::sin(0.5 * delta * t);
}

double group_velocity(double k0, double omega1) { return -2.0 * omega1 * std::cos(k0); }

namespace {

SiteWindow target_window(const AmplitudeState& d0, int cutoff, const PropagationOptions& options) {
    if (!options.auto_expand) return d0.window();
    const SiteWindow pop = d0.populated(options.populated_tol);
    return {std::min(d0.n_lo, pop.n_lo - cutoff), std::max(d0.n_hi(), pop.n_hi + cutoff)};
}

void check_edges(const AmplitudeState& d, const PropagationOptions& options) {
    const double edge = d.edge_amplitude(1);
    if (edge > options.edge_tol) {
        std::ostringstream msg;
        msg << "amplitude " << edge << " reached the edge of the site window [" << d.n_lo << ", " << d.n_hi()
            << "] (tolerance " << options.edge_tol << ")";
        throw WindowOverflowError(msg.str());
    }
}

}  // namespace

AmplitudeState propagate_exact(const AmplitudeState& d0, double t, double omega1, double delta,
                               const PropagationOptions& options) {
    if (d0.size() < 1) throw ConfigError("empty amplitude state");
    if (t == d0.time) return d0;
    const double q = q_envelope(t - d0.time, omega1, delta);
    const double theta = delta == 0.0 ? 0.0 : 0.5 * delta * (t + d0.time);
    const int cutoff = bessel_cutoff(q);
    const BesselBand jq(cutoff, q);

    std::vector<cplx> kernel(static_cast<std::size_t>(2 * cutoff + 1));
    for (int k = -cutoff; k <= cutoff; ++k)
        kernel[static_cast<std::size_t>(k + cutoff)] = jq[k] * std::polar(1.0, k * theta);

    AmplitudeState out = AmplitudeState::zeros(target_window(d0, cutoff, options), t);
    for (int n = out.n_lo; n <= out.n_hi(); ++n) {
        const int q_lo = std::max(-cutoff, d0.n_lo - n);
        const int q_hi = std::min(cutoff, d0.n_hi() - n);
        cplx s{};
        for (int k = q_lo; k <= q_hi; ++k) s += d0.amplitudes[static_cast<std::size_t>(n + k - d0.n_lo)] * kernel[static_cast<std::size_t>(k + cutoff)];
        out[n] = s;
    }
    check_edges(out, options);
    return out;
}

AmplitudeState propagate_kspace(const AmplitudeState& d0, double t, double omega1, double delta,
                                const PropagationOptions& options) {
    if (d0.size() < 1) throw ConfigError("empty amplitude state");
    if (t == d0.time) return d0;
    const double dt = t - d0.time;
    const int cutoff = bessel_cutoff(q_envelope(dt, omega1, delta));

    // Integrated phase i [a cos k - b sin k] of d'(k) = 2 i Omega_1 sin(delta s - k) d(k).
    double a = 0.0;
    double b = 2.0 * omega1 * dt;
    if (delta != 0.0) {
        const double s = std::sin(0.5 * delta * dt);
        const double mid = 0.5 * delta * (t + d0.time);
        a = 4.0 * omega1 / delta * std::sin(mid) * s;   // (2 Omega_1/delta)(cos delta t0 - cos delta t)
        b = 4.0 * omega1 / delta * std::cos(mid) * s;   // (2 Omega_1/delta)(sin delta t - sin delta t0)
    }

    AmplitudeState out = AmplitudeState::zeros(target_window(d0, cutoff, options), t);
    const int base = out.n_lo - cutoff;
    const int m = out.size() + 2 * cutoff;
    FourierTransform fft(m);
    cplx* buf = fft.data();
    for (int j = 0; j < m; ++j) buf[j] = d0.at(base + j);
    fft.plus();
    for (int j = 0; j < m; ++j) {
        const double k = 2.0 * std::numbers::pi * j / m;
        buf[j] *= std::polar(1.0 / m, a * std::cos(k) - b * std::sin(k));
    }
    fft.minus();
    for (int n = out.n_lo; n <= out.n_hi(); ++n) out[n] = buf[n - base];
    check_edges(out, options);
    return out;
}

AmplitudeState plane_wave_state(int n_sites, double k0, SiteWindow window, std::optional<int> first_site) {
    if (n_sites < 1) throw ConfigError("plane wave needs at least one site");
    if (n_sites > window.size()) throw ConfigError("plane wave does not fit in the site window");
    const int first = first_site.value_or(window.n_lo + (window.size() - n_sites) / 2);
    if (!window.contains(first) || !window.contains(first + n_sites - 1))
        throw ConfigError("plane wave extends outside the site window");
    AmplitudeState s = AmplitudeState::zeros(window);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n_sites));
    for (int n = first; n < first + n_sites; ++n) s[n] = std::polar(amp, k0 * n);
    return s;
}

double mean_position_direct(const AmplitudeState& d, const SiteMatrixElements& x, const LatticeParams& params) {
    const cplx phase = std::polar(1.0, dressing_phase(d.time, params));
    return x.x0 * d.norm() + d.moment(1) + 2.0 * std::real(x.x1 * phase * d.coherence(1));
}

double mean_square_position_direct(const AmplitudeState& d, const SiteMatrixElements& x,
                                   const LatticeParams& params) {
    const cplx phase = std::polar(1.0, dressing_phase(d.time, params));
    const double diag = x.x0_sq * d.norm() + 2.0 * x.x0 * d.moment(1) + d.moment(2);
    return diag + 2.0 * std::real((x.x1_sq * d.coherence(1) + 2.0 * x.x1 * d.weighted_coherence(1)) * phase);
}

ClosedFormObservables::ClosedFormObservables(const AmplitudeState& d0, const SiteMatrixElements& x,
                                             const LatticeParams& params, double omega1)
    : x_(x), params_(params), omega1_(omega1), t0_(d0.time) {
    norm_0_ = d0.norm();
    s1_0_ = d0.moment(1);
    s2_0_ = d0.moment(2);
    c1_ = d0.coherence(1);
    c2_ = d0.coherence(2);
    w1_ = d0.weighted_coherence(1);
    x_mean_0_ = mean_position_direct(d0, x, params);
    x2_mean_0_ = mean_square_position_direct(d0, x, params);
}

double ClosedFormObservables::mean_position(double t) const {
    const double q = this->q(t);
    const cplx e = std::polar(1.0, theta(t));
    const cplx drift = -0.5 * q * e + x_.x1 * (std::polar(1.0, dressing_phase(t, params_)) -
                                              std::polar(1.0, dressing_phase(t0_, params_)));
    return x_mean_0_ + 2.0 * std::real(drift * c1_);
}

double ClosedFormObservables::mean_square_position(double t) const {
    const double q = this->q(t);
    const cplx e = std::polar(1.0, theta(t));
    const double norm = norm_0_;
    const cplx p_half = w1_ + 0.5 * c1_;  // sum (p + 1/2) d_p^* d_{p+1}
    const double s1 = s1_0_ - q * std::real(e * c1_);
    const double s2 = s2_0_ - 2.0 * q * std::real(e * p_half) + 0.25 * q * q * (2.0 * norm + 2.0 * std::real(e * e * c2_));
    const cplx w1 = w1_ - 0.5 * q * (e * c2_ + std::conj(e) * norm);
    const cplx phase = std::polar(1.0, dressing_phase(t, params_));
    return x_.x0_sq * norm + 2.0 * x_.x0 * s1 + s2 + 2.0 * std::real((x_.x1_sq * c1_ + 2.0 * x_.x1 * w1) * phase);
}

double ClosedFormObservables::mean_square_position_literal(double t) const {
    const double q = this->q(t);
    const cplx em = std::polar(1.0, -theta(t));
    const cplx dphase = std::polar(1.0, dressing_phase(t, params_)) - std::polar(1.0, dressing_phase(t0_, params_));
    const cplx first = (x_.x0 + 0.5) * c1_ + w1_;  // sum (X0 + p + 1/2) d_p^* d_{p+1}
    const double cross = 2.0 * std::real(em * first + x_.x1_sq * dphase * c1_);
    const double spread = 0.25 * q * q * (2.0 * std::real(c2_ * em * em) + 2.0 * norm_0_);
    return x2_mean_0_ - q * cross + spread;
}

double mean_position(const AmplitudeState& d0, double t, const WannierStarkBasis& basis, const LatticeParams& params) {
    return ClosedFormObservables(d0, SiteMatrixElements::from(basis), params, rabi_frequency(1, params, basis))
        .mean_position(t);
}

double mean_square_position(const AmplitudeState& d0, double t, const WannierStarkBasis& basis,
                            const LatticeParams& params) {
    return ClosedFormObservables(d0, SiteMatrixElements::from(basis), params, rabi_frequency(1, params, basis))
        .mean_square_position(t);
}

double bloch_mean_position(cplx coherence, double x_bar, double t, double x1, const LatticeParams& params) {
    return x_bar + 2.0 * std::real(x1 * coherence * std::polar(1.0, -params.bloch_frequency() * t));
}

double bloch_mean_position(const AmplitudeState& c0, double t, const WannierStarkBasis& basis,
                           const LatticeParams& params) {
    const double x_bar = basis.x0() * c0.norm() + c0.moment(1);
    return bloch_mean_position(c0.coherence(1), x_bar, t, basis.x1(), params);
}

ObservableSeries exact_series(const AmplitudeState& d0, const std::vector<double>& times, double omega1,
                              const SiteMatrixElements& x, const LatticeParams& params, bool with_populations) {
    ObservableSeries out;
    out.times = times;
    const ClosedFormObservables closed(d0, x, params, omega1);
    std::vector<AmplitudeState> states;
    SiteWindow span = d0.window();
    for (double t : times) {
        out.mean_x.push_back(closed.mean_position(t));
        out.mean_x2.push_back(closed.mean_square_position(t));
        if (with_populations) {
            states.push_back(propagate_exact(d0, t, omega1, params.delta()));
            span.n_lo = std::min(span.n_lo, states.back().n_lo);
            span.n_hi = std::max(span.n_hi, states.back().n_hi());
        }
    }
    if (with_populations) {
        out.n_lo = span.n_lo;
        for (const auto& s : states) out.populations.push_back(s.grown(span).populations());
    }
    return out;
}

double fitted_slope(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2) throw ConfigError("slope fit needs two or more matching samples");
    const double n = static_cast<double>(t.size());
    double st = 0, sy = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
    }
    const double mt = st / n, my = sy / n;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        num += (t[i] - mt) * (y[i] - my);
        den += (t[i] - mt) * (t[i] - mt);
    }
    if (den == 0.0) throw ConfigError("slope fit needs distinct sample times");
    return num / den;
}

}  // namespace wstark
