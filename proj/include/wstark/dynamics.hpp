#pragma once

#include "wstark/amplitudes.hpp"
#include "wstark/params.hpp"

#include <optional>
#include <vector>

namespace wstark {

class WannierStarkBasis;

/// Matrix elements entering the observables, in the site-0 convention.
struct SiteMatrixElements {
    double x0 = 0.0;     ///< <phi_0|x|phi_0>
    double x1 = 0.0;     ///< <phi_0|x|phi_1>
    double x2 = 0.0;     ///< <phi_0|x|phi_2>
    double x0_sq = 0.0;  ///< <phi_0|x^2|phi_0>
    double x1_sq = 0.0;  ///< <phi_0|x^2|phi_1>

    static SiteMatrixElements from(const WannierStarkBasis& basis);
};

/// phi_n(t) = -n w_B t - (f0/omega)(x00 + n) cos(omega t).
double phase_phi(int n, double t, const LatticeParams& params, double x00);

/// phi(t) = phi_{n+1}(t) - phi_n(t) = -w_B t - (f0/omega) cos(omega t).
double dressing_phase(double t, const LatticeParams& params);

/// omega X_p J_1(f0/omega) for order p = 1 or 2. For order 1 the form
/// (f0 X_1 / 2)(J_0 + J_2)(f0/omega) is evaluated as well and the two must
/// agree to 1e-12 (Error otherwise).
double rabi_frequency(int order, const LatticeParams& params, const WannierStarkBasis& basis);
double rabi_frequency(int order, const LatticeParams& params, double x_p);

/// (f0 X_p / 2)(J_0 + J_2)(f0/omega).
double rabi_frequency_harmonic_form(const LatticeParams& params, double x_p);

/// Coupling of the n -> n +- 2 slow terms of the full harmonic expansion at
/// omega = 2 w_B: (omega/2) X_2 J_1(2 f0/omega).
double second_order_coupling_from_harmonics(const LatticeParams& params, double x2);

/// Q(t) = (4 Omega_1/delta) sin(delta t / 2), and 2 Omega_1 t at delta = 0.
double q_envelope(double t, double omega1, double delta);

struct PropagationOptions {
    /// Largest |d_n| tolerated on the outermost site of the result.
    double edge_tol = 1e-10;
    /// Grow the window to the populated sites +- (|Q| + 20) before propagating.
    bool auto_expand = true;
    /// Sites with |d_n| at or below this are treated as empty when expanding.
    double populated_tol = 1e-16;
};

/// Nearest-neighbour dynamics from d0.time to t:
///     d_n(t) = sum_q d_{n+q}(t0) J_q(Q) e^{i q Theta}
/// with Q = (4 Omega_1/delta) sin(delta (t - t0)/2), Theta = delta (t + t0)/2.
/// Throws WindowOverflowError when the edge amplitude exceeds edge_tol.
AmplitudeState propagate_exact(const AmplitudeState& d0, double t, double omega1, double delta,
                               const PropagationOptions& options = {});

/// Same evolution through the quasi-momentum representation d(k) = sum d_n e^{ink},
/// multiplied by the integrated phase of d'(k) = 2 i Omega_1 sin(delta t - k) d(k).
AmplitudeState propagate_kspace(const AmplitudeState& d0, double t, double omega1, double delta,
                                const PropagationOptions& options = {});

/// d_n = e^{i k0 n}/sqrt(N) on N contiguous sites starting at first_site
/// (default: centered in the window), zero elsewhere in the window.
AmplitudeState plane_wave_state(int n_sites, double k0, SiteWindow window,
                                std::optional<int> first_site = std::nullopt);

/// v_g = -2 Omega_1 cos(k0).
double group_velocity(double k0, double omega1);

/// <x> evaluated directly on amplitudes at time d.time (nearest-neighbour
/// truncation of the position operator).
double mean_position_direct(const AmplitudeState& d, const SiteMatrixElements& x, const LatticeParams& params);

/// <x^2> evaluated directly on amplitudes, using <phi_n|x^2|phi_n> =
/// X0^(2) + 2n X0 + n^2 and <phi_n|x^2|phi_{n+1}> = X1^(2) + 2n X1.
double mean_square_position_direct(const AmplitudeState& d, const SiteMatrixElements& x,
                                   const LatticeParams& params);

/// Closed-form observables of the nearest-neighbour dynamics started from d0.
/// The coherence sums of d0 are computed once at construction.
class ClosedFormObservables {
public:
    ClosedFormObservables(const AmplitudeState& d0, const SiteMatrixElements& x, const LatticeParams& params,
                          double omega1);

    double mean_position(double t) const;
    double mean_square_position(double t) const;

    /// <x^2> with the phase factors e^{-i delta t/2}, e^{-i delta t} attached to
    /// the coherence sums as in the commonly quoted form, with X1^(2) scaled by
    /// Q and without the 2 n X1 cross term. Kept for comparison only: it does
    /// not match the direct evaluation once Q and the coherences are nonzero.
    double mean_square_position_literal(double t) const;

    cplx coherence() const noexcept { return c1_; }
    double omega1() const noexcept { return omega1_; }

private:
    double q(double t) const { return q_envelope(t - t0_, omega1_, params_.delta()); }
    double theta(double t) const { return 0.5 * params_.delta() * (t + t0_); }

    SiteMatrixElements x_;
    LatticeParams params_;
    double omega1_;
    double t0_;
    double norm_0_ = 1.0;
    double s1_0_ = 0.0;  // sum n |d_n|^2
    double s2_0_ = 0.0;  // sum n^2 |d_n|^2
    cplx c1_{};          // sum d_n^* d_{n+1}
    cplx c2_{};          // sum d_n^* d_{n+2}
    cplx w1_{};          // sum n d_n^* d_{n+1}
    double x_mean_0_ = 0.0;
    double x2_mean_0_ = 0.0;
};

/// Closed form at time t for the state d0 (omega_1 from the basis).
double mean_position(const AmplitudeState& d0, double t, const WannierStarkBasis& basis, const LatticeParams& params);
double mean_square_position(const AmplitudeState& d0, double t, const WannierStarkBasis& basis,
                            const LatticeParams& params);

/// Static-lattice Bloch oscillation x_bar + X1 (C e^{-i w_B t} + c.c.).
double bloch_mean_position(cplx coherence, double x_bar, double t, double x1, const LatticeParams& params);
/// Same with x_bar and C = sum c_n^* c_{n+1} taken from c0.
double bloch_mean_position(const AmplitudeState& c0, double t, const WannierStarkBasis& basis,
                           const LatticeParams& params);

/// Sampled observables; populations[i][j] is |d_{n_lo + j}(times[i])|^2.
struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> mean_x;
    std::vector<double> mean_x2;
    int n_lo = 0;
    std::vector<std::vector<double>> populations;

    double variance(std::size_t i) const { return mean_x2[i] - mean_x[i] * mean_x[i]; }
};

/// Exact nearest-neighbour trajectory sampled at `times`. All population rows
/// share the window needed by the latest sample.
ObservableSeries exact_series(const AmplitudeState& d0, const std::vector<double>& times, double omega1,
                              const SiteMatrixElements& x, const LatticeParams& params, bool with_populations = true);

/// Least-squares slope of y against t.
double fitted_slope(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace wstark
