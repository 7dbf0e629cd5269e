#pragma once

#include "wstark/amplitudes.hpp"
#include "wstark/config.hpp"
#include "wstark/oracle.hpp"
#include "wstark/params.hpp"
#include "wstark/ws_basis.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wstark {

inline constexpr const char* kVersion = "1.0.0";

enum class Model { Exact, Ode, Pde };
enum class InitialKind { SingleSite, PlaneWave, Custom };

Model parse_model(const std::string& name);
std::string model_label(Model m);

struct InitialSpec {
    InitialKind kind = InitialKind::SingleSite;
    int site = 0;
    int n_sites = 1;
    double k0 = 0.0;
    std::optional<int> first_site;
    std::string file;
};

struct RunSpec {
    Model model = Model::Exact;
    std::optional<double> t_end;  ///< resolved from the dynamics when absent
    int samples = 200;
    double ode_step = 0.1;
    Integrator integrator = Integrator::Rk4;
    std::string coupling = "nearest";  ///< nearest | full
    int p_max = 2;
    double pde_dt = 5e-4;
    double absorbing_fraction = 0.0;
    double leakage_threshold = 1e-2;
    double edge_tol = 1e-10;  ///< exact and ode; pde gates |d_edge|^2 by the leakage threshold
    std::optional<double> norm_tol;  ///< default 1e-9, 1e-8 for pde

    double norm_tolerance() const { return norm_tol.value_or(model == Model::Pde ? 1e-8 : 1e-9); }
    long seed = 0;
};

/// Fully resolved scenario: lattice, grid, basis window, initial state, run
/// settings and output directory.
struct ScenarioConfig {
    LatticeParams lattice = LatticeParams::standard_preset();
    Grid grid = Grid::standard_default();
    std::optional<SiteWindow> window;
    BasisOptions basis_options;
    std::string cache_dir;
    InitialSpec initial;
    RunSpec run;
    std::string out_dir = "out";

    /// Reads the sections lattice, grid, basis, initial, run and output.
    /// Unknown keys are rejected.
    static ScenarioConfig from_config(const KeyValueConfig& cfg);
    KeyValueConfig to_config() const;

    SiteWindow basis_window() const;
};

/// v0 = 4.5, f = 0.5, with the drive f0 = 0.1, omega = 0.5.
KeyValueConfig standard_preset_config();

/// Shared, thread-safe basis store: memory first, then the cache directory,
/// then diagonalization (written back atomically).
class BasisStore {
public:
    BasisStore();

    std::shared_ptr<const WannierStarkBasis> get(const ScenarioConfig& cfg, bool* loaded_from_disk = nullptr);

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

struct BasisReport {
    std::shared_ptr<const WannierStarkBasis> basis;
    bool loaded = false;
    std::string text;
};

struct RunReport {
    bool ok = true;
    std::vector<std::string> failures;
    double omega1 = 0.0;
    double t_end = 0.0;
    double max_leakage = 0.0;
    double max_edge = 0.0;
    double norm_drift = 0.0;
    std::vector<std::string> files;
};

struct SweepReport {
    std::vector<std::string> rows;  ///< CSV rows, header excluded
    int failed = 0;
};

/// Builds or loads the basis, writes basis.bin (cache), basis_report.txt and
/// the manifest.
BasisReport cmd_basis(const ScenarioConfig& cfg, std::ostream& log, BasisStore* store = nullptr);

/// Writes populations.csv, observables.csv, plot scripts and the manifest;
/// comparison.csv against the exact propagator for ode and pde runs. Partial
/// outputs are removed when the run throws.
RunReport cmd_run(const ScenarioConfig& cfg, std::ostream& log, BasisStore* store = nullptr);

/// One summary row per value of the axis (f, v0, f0, omega or k0), computed by
/// a pool of `jobs` workers. Each point writes into <out>/point_<i>.
SweepReport cmd_sweep(const ScenarioConfig& cfg, const std::string& axis, const std::vector<double>& values,
                      int jobs, std::ostream& log);

inline constexpr const char* kSweepHeader =
    "index,axis,value,status,x1,x2,omega1,delta,vg_fitted,vg_predicted,breathing_period,error";

/// The initial amplitudes of `spec` over `window`.
AmplitudeState make_initial_state(const InitialSpec& spec, SiteWindow window);

/// Default horizon: two breathing periods off resonance, 20/|Omega_1| at
/// resonance, ten Bloch periods without drive.
double default_horizon(const LatticeParams& params, double omega1);

}  // namespace wstark
