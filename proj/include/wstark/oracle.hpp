#pragma once

#include "wstark/amplitudes.hpp"
#include "wstark/coupling.hpp"
#include "wstark/dynamics.hpp"
#include "wstark/params.hpp"

#include <functional>
#include <span>
#include <vector>

namespace wstark {

class WannierStarkBasis;

enum class Integrator { Rk4, Dopri5 };

struct OdeConfig {
    double h = 0.01;  ///< fixed step (RK4), initial step (DOPRI5)
    Integrator integrator = Integrator::Rk4;
    CouplingModel coupling = NearestNeighbor{};
    double t_end = 0.0;
    int stride = 1;                ///< steps between stored samples (RK4)
    double sample_interval = 0.0;  ///< sample spacing for DOPRI5 (0: start and end only)
    double rtol = 1e-12;
    double atol = 1e-14;
    double step_bound = 1.0;  ///< admissible h * characteristic_rate
    double edge_tol = 1e-10;

    /// Throws ConfigError when the step or stride is invalid.
    void validate() const;
};

struct Trajectory {
    std::vector<AmplitudeState> samples;
    double norm_drift = 0.0;  ///< max |sum |d_n|^2 - initial| over the samples
    long steps = 0;

    std::vector<double> times() const;
};

/// Integrates the amplitude equations of cfg.coupling from d0.time to cfg.t_end
/// on the fixed window of d0. The last sample is always at t_end.
Trajectory integrate_amplitudes(const AmplitudeState& d0, const OdeConfig& cfg);

/// Exact nearest-neighbour trajectory at the given times.
Trajectory exact_trajectory(const AmplitudeState& d0, const std::vector<double>& times, double omega1,
                            double delta);

using WaveFunction = std::vector<cplx>;

struct PdeConfig {
    Grid grid = Grid::standard_default();
    double dt = 5e-4;
    double t_start = 0.0;
    double t_end = 0.0;
    int sample_stride = 100;
    /// Smooth absorbing mask over this fraction of the box at each end (0: off).
    double absorbing_fraction = 0.0;
    /// Probability allowed inside the outer guard region before aborting.
    double guard_fraction = 0.1;
    double contamination_tol = 1e-6;
    bool keep_snapshots = false;

    /// Throws ConfigError when dt exceeds the kinetic phase bound pi h^2.
    void validate() const;
};

struct WaveTrajectory {
    std::vector<double> times;
    std::vector<double> norms;
    std::vector<double> mean_x;
    std::vector<WaveFunction> snapshots;
    WaveFunction final_state;
    long steps = 0;
};

using WaveObserver = std::function<void(double t, std::span<const cplx> psi)>;

/// Strang splitting of i psi_t = [p^2/2m + V(x, t)] psi on the periodic box of
/// the grid, potential evaluated at the step midpoint. The observer sees every
/// sample, including t_start and t_end. Throws IntegrationError when the guard
/// region becomes populated.
WaveTrajectory split_step_evolve(const WaveFunction& psi0, const LatticeParams& params, const PdeConfig& cfg,
                                 const WaveObserver& observer = {});

/// <psi|H(t)|psi> with the spectral kinetic operator.
double energy_expectation(std::span<const cplx> psi, const LatticeParams& params, const Grid& grid, double t);

double wave_norm(std::span<const cplx> psi, const Grid& grid);
double wave_mean_position(std::span<const cplx> psi, const Grid& grid);

struct Projection {
    AmplitudeState c;  ///< <phi_n|psi>
    AmplitudeState d;  ///< dressed amplitudes
    double leakage = 0.0;  ///< 1 - sum |c_n|^2
    bool breakdown = false;  ///< leakage above the threshold
};

/// c_n by quadrature, then d_n = c_n e^{i E_0 t} e^{-i phi_n(t)} with E_0 the
/// ladder origin. Leakage above the threshold is flagged, not thrown.
Projection project_onto_ws(std::span<const cplx> psi, const WannierStarkBasis& basis, const LatticeParams& params,
                           double t, double leakage_threshold = 1e-2);

/// Inverse of project_onto_ws: psi = sum c_n phi_n with c_n from d (at d.time).
WaveFunction reconstruct_wavefunction(const AmplitudeState& d, const WannierStarkBasis& basis,
                                      const LatticeParams& params);

enum class Gauge { Fixed, FittedGlobalPhase };

struct ComparisonReport {
    double max_population = 0.0, rms_population = 0.0;
    double max_coherence = 0.0, rms_coherence = 0.0;
    double max_mean_x = 0.0, rms_mean_x = 0.0;
    double max_amplitude = 0.0, rms_amplitude = 0.0;
    std::size_t samples = 0;
};

/// Errors between two trajectories sampled at identical times (ConfigError
/// otherwise). With a fitted gauge each sample of b is rotated by the global
/// phase that best aligns it with a. The mean position uses x and params when
/// given, and the site moment sum n |d_n|^2 otherwise.
ComparisonReport compare_trajectories(const Trajectory& a, const Trajectory& b, Gauge gauge,
                                      const SiteMatrixElements* x = nullptr, const LatticeParams* params = nullptr);

}  // namespace wstark
