#include "wstark/scenario.hpp"

#include "wstark/bessel.hpp"
#include "wstark/dynamics.hpp"
#include "wstark/errors.hpp"
#include "wstark/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace wstark {

namespace fs = std::filesystem;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"lattice", {"v0", "f", "f0", "omega"}},
        {"grid", {"x_min", "x_max", "n_points", "points_per_step"}},
        {"basis", {"n_lo", "n_hi", "stencil_order", "cache_dir"}},
        {"initial", {"kind", "site", "n_sites", "k0", "first_site", "file"}},
        {"run",
         {"model", "t_end", "samples", "ode_step", "integrator", "coupling", "p_max", "pde_dt", "absorbing_fraction",
          "leakage_threshold", "edge_tol", "norm_tol", "seed"}},
        {"output", {"directory"}},
        {"manifest", {}},
    };
    return keys;
}

void check_keys(const KeyValueConfig& cfg) {
    const auto& allowed = allowed_keys();
    for (const auto& section : cfg.sections()) {
        const auto it = allowed.find(section);
        if (it == allowed.end()) throw ConfigError("unknown config section [" + section + "]");
        if (section == "manifest") continue;
        for (const auto& key : cfg.keys(section))
            if (!it->second.count(key)) throw ConfigError("unknown config key " + section + "." + key);
    }
}

InitialKind parse_initial_kind(const std::string& s) {
    if (s == "single-site") return InitialKind::SingleSite;
    if (s == "plane-wave") return InitialKind::PlaneWave;
    if (s == "custom") return InitialKind::Custom;
    throw ConfigError("initial.kind must be single-site, plane-wave or custom (got '" + s + "')");
}

std::string initial_kind_label(InitialKind k) {
    switch (k) {
        case InitialKind::SingleSite: return "single-site";
        case InitialKind::PlaneWave: return "plane-wave";
        case InitialKind::Custom: return "custom";
    }
    return "single-site";
}

Integrator parse_integrator(const std::string& s) {
    if (s == "rk4") return Integrator::Rk4;
    if (s == "dopri5") return Integrator::Dopri5;
    throw ConfigError("run.integrator must be rk4 or dopri5 (got '" + s + "')");
}

std::vector<double> sample_times(double t_end, int samples) {
    std::vector<double> t(static_cast<std::size_t>(samples) + 1);
    for (int i = 0; i <= samples; ++i) t[static_cast<std::size_t>(i)] = t_end * i / samples;
    return t;
}

/// Files written by one command; removed again unless committed.
class OutputTransaction {
public:
    explicit OutputTransaction(const std::string& dir) : dir_(dir) {
        created_dir_ = !fs::exists(dir_);
        fs::create_directories(dir_);
    }
    ~OutputTransaction() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& f : files_) fs::remove(f, ec);
        if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
    }
    std::string path(const std::string& name) {
        const std::string p = (fs::path(dir_) / name).string();
        files_.push_back(p);
        return p;
    }
    void commit() { committed_ = true; }
    const std::vector<std::string>& files() const { return files_; }

private:
    std::string dir_;
    std::vector<std::string> files_;
    bool created_dir_ = false;
    bool committed_ = false;
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("write failed: " + path);
}

std::string populations_script() {
    return "set datafile separator ','\n"
           "set terminal pngcairo size 900,600\n"
           "set output 'populations.png'\n"
           "set xlabel 'site n'\n"
           "set ylabel 't'\n"
           "set cblabel '|d_n|^2'\n"
           "set view map\n"
           "plot 'populations.csv' matrix rowheaders columnheaders using 1:2:3 with image notitle\n";
}

std::string observables_script() {
    return "set datafile separator ','\n"
           "set terminal pngcairo size 900,600\n"
           "set output 'observables.png'\n"
           "set key autotitle columnhead\n"
           "set xlabel 't'\n"
           "set multiplot layout 2,1\n"
           "set ylabel '<x>'\n"
           "plot 'observables.csv' using 1:2 with lines\n"
           "set ylabel 'var x'\n"
           "plot 'observables.csv' using 1:4 with lines\n"
           "unset multiplot\n";
}

std::string comparison_script() {
    return "set datafile separator ','\n"
           "set terminal pngcairo size 900,600\n"
           "set output 'comparison.png'\n"
           "set key autotitle columnhead\n"
           "set xlabel 't'\n"
           "set ylabel '<x>'\n"
           "plot 'comparison.csv' using 1:2 with lines, '' using 1:3 with points pt 7 ps 0.5\n";
}

double max_q(double omega1, double delta, double t_end) {
    if (delta != 0.0 && std::abs(delta) * t_end >= std::numbers::pi) return std::abs(4.0 * omega1 / delta);
    return std::abs(q_envelope(t_end, omega1, delta));
}

std::string manifest_text(const ScenarioConfig& cfg, const std::string& command, const WannierStarkBasis& basis,
                          double omega1) {
    KeyValueConfig m = cfg.to_config();
    m.set("manifest.command", command);
    m.set("manifest.version", kVersion);
    m.set("manifest.x0", format_double(basis.x0()));
    m.set("manifest.x1", format_double(basis.x1()));
    m.set("manifest.x2", format_double(basis.x2()));
    m.set("manifest.omega1", format_double(omega1));
    m.set("manifest.delta", format_double(cfg.lattice.delta()));
    m.set("manifest.basis_key",
          hex_key(basis_cache_key(cfg.lattice.v0(), cfg.lattice.f(), cfg.grid, cfg.basis_window(), cfg.basis_options)));
    return m.to_string();
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

}  // namespace

Model parse_model(const std::string& name) {
    if (name == "exact") return Model::Exact;
    if (name == "ode") return Model::Ode;
    if (name == "pde") return Model::Pde;
    throw ConfigError("model must be exact, ode or pde (got '" + name + "')");
}

std::string model_label(Model m) {
    switch (m) {
        case Model::Exact: return "exact";
        case Model::Ode: return "ode";
        case Model::Pde: return "pde";
    }
    return "exact";
}

KeyValueConfig standard_preset_config() {
    KeyValueConfig c;
    c.set("lattice.v0", "4.5");
    c.set("lattice.f", "0.5");
    c.set("lattice.f0", "0.1");
    c.set("lattice.omega", "0.5");
    return c;
}

ScenarioConfig ScenarioConfig::from_config(const KeyValueConfig& cfg) {
    check_keys(cfg);
    ScenarioConfig s;
    s.lattice = LatticeParams::from_config(cfg);
    s.grid = Grid::from_config(cfg);
    if (cfg.has("basis.n_lo") || cfg.has("basis.n_hi")) {
        const SiteWindow def = default_window(s.grid);
        s.window = SiteWindow{static_cast<int>(cfg.get_int("basis.n_lo", def.n_lo)),
                              static_cast<int>(cfg.get_int("basis.n_hi", def.n_hi))};
        if (s.window->n_lo > s.window->n_hi) throw ConfigError("basis.n_lo exceeds basis.n_hi");
    }
    s.basis_options.stencil_order = static_cast<int>(cfg.get_int("basis.stencil_order", 4));
    if (s.basis_options.stencil_order != 2 && s.basis_options.stencil_order != 4)
        throw ConfigError("basis.stencil_order must be 2 or 4");
    s.out_dir = cfg.get_string("output.directory", "out");
    s.cache_dir = cfg.get_string("basis.cache_dir", "");

    s.initial.kind = parse_initial_kind(cfg.get_string("initial.kind", "single-site"));
    s.initial.site = static_cast<int>(cfg.get_int("initial.site", 0));
    s.initial.n_sites = static_cast<int>(cfg.get_int("initial.n_sites", s.initial.kind == InitialKind::PlaneWave ? 5 : 1));
    if (s.initial.n_sites < 1) throw ConfigError("initial.n_sites must be positive");
    s.initial.k0 = cfg.get_double("initial.k0", 0.0);
    if (cfg.has("initial.first_site")) s.initial.first_site = static_cast<int>(cfg.get_int("initial.first_site"));
    s.initial.file = cfg.get_string("initial.file", "");
    if (s.initial.kind == InitialKind::Custom && s.initial.file.empty())
        throw ConfigError("initial.kind = custom requires initial.file");

    RunSpec& r = s.run;
    r.model = parse_model(cfg.get_string("run.model", "exact"));
    if (cfg.has("run.t_end")) {
        r.t_end = cfg.get_double("run.t_end");
        if (!(*r.t_end > 0.0) || !std::isfinite(*r.t_end)) throw ConfigError("run.t_end must be positive");
    }
    r.samples = static_cast<int>(cfg.get_int("run.samples", 200));
    if (r.samples < 1) throw ConfigError("run.samples must be at least 1");
    r.ode_step = cfg.get_double("run.ode_step", 0.1);
    if (!(r.ode_step > 0.0)) throw ConfigError("run.ode_step must be positive");
    r.integrator = parse_integrator(cfg.get_string("run.integrator", "rk4"));
    r.coupling = cfg.get_string("run.coupling", "nearest");
    if (r.coupling != "nearest" && r.coupling != "full")
        throw ConfigError("run.coupling must be nearest or full (got '" + r.coupling + "')");
    r.p_max = static_cast<int>(cfg.get_int("run.p_max", 2));
    if (r.p_max < 1) throw ConfigError("run.p_max must be at least 1");
    r.pde_dt = cfg.get_double("run.pde_dt", 5e-4);
    r.absorbing_fraction = cfg.get_double("run.absorbing_fraction", 0.0);
    r.leakage_threshold = cfg.get_double("run.leakage_threshold", 1e-2);
    r.edge_tol = cfg.get_double("run.edge_tol", 1e-10);
    if (cfg.has("run.norm_tol")) r.norm_tol = cfg.get_double("run.norm_tol");
    r.seed = cfg.get_int("run.seed", 0);
    return s;
}

KeyValueConfig ScenarioConfig::to_config() const {
    KeyValueConfig c;
    c.set("lattice.v0", format_double(lattice.v0()));
    c.set("lattice.f", format_double(lattice.f()));
    c.set("lattice.f0", format_double(lattice.f0()));
    c.set("lattice.omega", format_double(lattice.omega()));
    c.set("grid.x_min", format_double(grid.x_min()));
    c.set("grid.x_max", format_double(grid.x_max()));
    c.set("grid.n_points", std::to_string(grid.n_points()));
    const SiteWindow w = basis_window();
    c.set("basis.n_lo", std::to_string(w.n_lo));
    c.set("basis.n_hi", std::to_string(w.n_hi));
    c.set("basis.stencil_order", std::to_string(basis_options.stencil_order));
    if (!cache_dir.empty()) c.set("basis.cache_dir", cache_dir);
    c.set("initial.kind", initial_kind_label(initial.kind));
    c.set("initial.site", std::to_string(initial.site));
    c.set("initial.n_sites", std::to_string(initial.n_sites));
    c.set("initial.k0", format_double(initial.k0));
    if (initial.first_site) c.set("initial.first_site", std::to_string(*initial.first_site));
    if (!initial.file.empty()) c.set("initial.file", initial.file);
    c.set("run.model", model_label(run.model));
    if (run.t_end) c.set("run.t_end", format_double(*run.t_end));
    c.set("run.samples", std::to_string(run.samples));
    c.set("run.ode_step", format_double(run.ode_step));
    c.set("run.integrator", run.integrator == Integrator::Rk4 ? "rk4" : "dopri5");
    c.set("run.coupling", run.coupling);
    c.set("run.p_max", std::to_string(run.p_max));
    c.set("run.pde_dt", format_double(run.pde_dt));
    c.set("run.absorbing_fraction", format_double(run.absorbing_fraction));
    c.set("run.leakage_threshold", format_double(run.leakage_threshold));
    c.set("run.edge_tol", format_double(run.edge_tol));
    c.set("run.norm_tol", format_double(run.norm_tolerance()));
    c.set("run.seed", std::to_string(run.seed));
    c.set("output.directory", out_dir);
    return c;
}

SiteWindow ScenarioConfig::basis_window() const { return window ? *window : default_window(grid); }

struct BasisStore::Impl {
    std::mutex mutex;
    std::map<std::uint64_t, std::shared_ptr<const WannierStarkBasis>> memory;
};

BasisStore::BasisStore() : impl_(std::make_shared<Impl>()) {}

std::shared_ptr<const WannierStarkBasis> BasisStore::get(const ScenarioConfig& cfg, bool* loaded_from_disk) {
    const SiteWindow window = cfg.basis_window();
    const std::uint64_t key = basis_cache_key(cfg.lattice.v0(), cfg.lattice.f(), cfg.grid, window, cfg.basis_options);
    if (loaded_from_disk) *loaded_from_disk = false;

    std::lock_guard lock(impl_->mutex);
    if (auto it = impl_->memory.find(key); it != impl_->memory.end()) return it->second;

    const std::string dir = cfg.cache_dir.empty() ? cfg.out_dir : cfg.cache_dir;
    const fs::path path = fs::path(dir) / ("basis-" + hex_key(key) + ".bin");
    std::shared_ptr<const WannierStarkBasis> basis;
    if (auto loaded = load_basis(path.string(), key)) {
        basis = std::make_shared<const WannierStarkBasis>(std::move(*loaded));
        if (loaded_from_disk) *loaded_from_disk = true;
    } else {
        basis = std::make_shared<const WannierStarkBasis>(
            solve_ws_basis(cfg.lattice, cfg.grid, window, cfg.basis_options));
        fs::create_directories(dir);
        std::ostringstream tmp_name;
        tmp_name << path.string() << ".tmp" << std::hash<std::thread::id>{}(std::this_thread::get_id());
        save_basis(tmp_name.str(), *basis);
        fs::rename(tmp_name.str(), path);
    }
    impl_->memory.emplace(key, basis);
    return basis;
}

AmplitudeState make_initial_state(const InitialSpec& spec, SiteWindow window) {
    AmplitudeState d;
    switch (spec.kind) {
        case InitialKind::SingleSite:
            if (!window.contains(spec.site)) throw ConfigError("initial.site lies outside the site window");
            d = AmplitudeState::single_site(spec.site, window);
            break;
        case InitialKind::PlaneWave:
            d = plane_wave_state(spec.n_sites, spec.k0, window, spec.first_site);
            break;
        case InitialKind::Custom: {
            const AmplitudeState file = read_amplitudes_csv(spec.file);
            if (!(window.contains(file.n_lo) && window.contains(file.n_hi())))
                throw ConfigError("amplitudes of " + spec.file + " lie outside the site window");
            d = file.grown(window);
            d.normalize();
            break;
        }
    }
    return d;
}

namespace {

/// Smallest window holding the initial state on its own.
SiteWindow initial_extent(const InitialSpec& spec) {
    switch (spec.kind) {
        case InitialKind::SingleSite: return {spec.site, spec.site};
        case InitialKind::PlaneWave: {
            const int first = spec.first_site.value_or(-(spec.n_sites / 2));
            return {first, first + spec.n_sites - 1};
        }
        case InitialKind::Custom: return read_amplitudes_csv(spec.file).window();
    }
    return {0, 0};
}

}  // namespace

double default_horizon(const LatticeParams& params, double omega1) {
    if (params.f0() > 0.0 && params.delta() != 0.0) return 2.0 * 2.0 * std::numbers::pi / std::abs(params.delta());
    if (params.f0() > 0.0 && omega1 != 0.0) return 20.0 / std::abs(omega1);
    return 10.0 * 2.0 * std::numbers::pi / params.f();
}

BasisReport cmd_basis(const ScenarioConfig& cfg, std::ostream& log, BasisStore* store) {
    BasisStore local;
    BasisStore& s = store ? *store : local;
    OutputTransaction tx(cfg.out_dir);

    BasisReport report;
    report.basis = s.get(cfg, &report.loaded);
    const auto& b = *report.basis;
    const auto& d = b.diagnostics();
    std::ostringstream text;
    text.precision(10);
    text << "grid            [" << b.grid().x_min() << ", " << b.grid().x_max() << "], " << b.grid().n_points()
         << " points\n"
         << "window          [" << b.sites().n_lo << ", " << b.sites().n_hi << "], reference site "
         << b.reference_site() << "\n"
         << "X00             " << b.x0() << "\n"
         << "X1              " << b.x1() << "\n"
         << "X2              " << b.x2() << "\n"
         << "X0^(2)          " << b.x0_sq() << "\n"
         << "X1^(2)          " << b.x1_sq() << "\n"
         << "X2/X1           " << d.x2_over_x1 << "\n"
         << "E_0             " << b.ladder_origin() << "\n"
         << "ladder residual " << d.ladder_residual << "\n"
         << "translation     " << d.translation_residual << "\n"
         << "orthonormality  " << d.ortho_residual << "\n"
         << "next-band gap   " << d.next_band_gap << "\n"
         << "site  energy  centroid  participation\n";
    for (const auto& sd : d.sites)
        text << sd.site << "  " << sd.energy << "  " << sd.centroid << "  " << sd.participation << "\n";
    if (cfg.lattice.f0() > 0.0) text << "Omega_1         " << rabi_frequency(1, cfg.lattice, b) << "\n";
    for (const auto& w : cfg.lattice.validity_warnings()) text << "warning: " << w << "\n";
    report.text = text.str();
    log << "basis from " << (report.loaded ? "cache" : "diagonalization") << "\n" << report.text;

    write_text(tx.path("basis_report.txt"), report.text);
    write_text(tx.path("manifest.cfg"),
               manifest_text(cfg, "basis", b, cfg.lattice.f0() > 0.0 ? rabi_frequency(1, cfg.lattice, b) : 0.0));
    tx.commit();
    return report;
}

RunReport cmd_run(const ScenarioConfig& cfg_in, std::ostream& log, BasisStore* store) {
    BasisStore local;
    BasisStore& s = store ? *store : local;
    ScenarioConfig cfg = cfg_in;
    OutputTransaction tx(cfg.out_dir);

    const auto basis = s.get(cfg);
    const LatticeParams& p = cfg.lattice;
    const SiteMatrixElements x = SiteMatrixElements::from(*basis);
    const double omega1 = p.f0() > 0.0 ? rabi_frequency(1, p, *basis) : 0.0;
    if (!cfg.run.t_end) cfg.run.t_end = default_horizon(p, omega1);
    const double t_end = *cfg.run.t_end;
    const int samples = cfg.run.samples;
    const std::vector<double> times = sample_times(t_end, samples);
    for (const auto& w : p.validity_warnings()) log << "warning: " << w << "\n";

    RunReport report;
    report.omega1 = omega1;
    report.t_end = t_end;
    auto fail = [&](const std::string& what) {
        report.ok = false;
        report.failures.push_back(what);
    };

    ObservableSeries series;
    series.times = times;
    std::vector<double> comparison_exact, comparison_model, comparison_pop;

    // Exact reference trajectory, needed by every model.
    const Model model = cfg.run.model;
    const SiteWindow extent = initial_extent(cfg.initial);
    SiteWindow start_window = extent;
    if (model == Model::Pde) {
        start_window = basis->sites();
        if (!(start_window.contains(extent.n_lo) && start_window.contains(extent.n_hi)))
            throw ConfigError("initial state lies outside the basis window");
    } else if (model == Model::Ode) {
        const int margin = bessel_cutoff(max_q(omega1, p.delta(), t_end)) + 10;
        start_window = {extent.n_lo - margin, extent.n_hi + margin};
    }
    const AmplitudeState d0 = make_initial_state(cfg.initial, start_window);
    const ObservableSeries exact = exact_series(d0, times, omega1, x, p, model != Model::Pde);

    auto population_error = [&](std::size_t i, int n_lo, const std::vector<double>& pops) {
        double err = 0.0;
        const auto& ref = exact.populations[i];
        const int lo = std::min(n_lo, exact.n_lo);
        const int hi = std::max(n_lo + static_cast<int>(pops.size()), exact.n_lo + static_cast<int>(ref.size()));
        for (int n = lo; n < hi; ++n) {
            const int a = n - n_lo, b = n - exact.n_lo;
            const double va = (a >= 0 && a < static_cast<int>(pops.size())) ? pops[static_cast<std::size_t>(a)] : 0.0;
            const double vb = (b >= 0 && b < static_cast<int>(ref.size())) ? ref[static_cast<std::size_t>(b)] : 0.0;
            err = std::max(err, std::abs(va - vb));
        }
        return err;
    };

    if (model == Model::Exact) {
        series = exact;
        for (const auto& row : series.populations) {
            double norm = 0.0;
            for (double v : row) norm += v;
            report.norm_drift = std::max(report.norm_drift, std::abs(norm - d0.norm()));
        }
        const auto& last = series.populations.back();
        report.max_edge = std::sqrt(std::max(last.front(), last.back()));
    } else if (model == Model::Ode) {
        OdeConfig oc;
        const double interval = t_end / samples;
        const int per_sample = std::max(1, static_cast<int>(std::ceil(interval / cfg.run.ode_step - 1e-9)));
        oc.h = interval / per_sample;
        oc.stride = per_sample;
        oc.integrator = cfg.run.integrator;
        oc.sample_interval = interval;
        oc.t_end = t_end;
        oc.edge_tol = cfg.run.edge_tol;
        if (cfg.run.coupling == "full")
            oc.coupling = FullHarmonics::from_basis(*basis, p, cfg.run.p_max);
        else
            oc.coupling = NearestNeighbor{omega1, p.delta()};
        const Trajectory traj = integrate_amplitudes(d0, oc);
        if (traj.samples.size() != times.size())
            throw IntegrationError("ODE produced " + std::to_string(traj.samples.size()) + " samples, expected " +
                                   std::to_string(times.size()));
        report.norm_drift = traj.norm_drift;
        series.times.clear();
        series.n_lo = d0.n_lo;
        for (std::size_t i = 0; i < traj.samples.size(); ++i) {
            const auto& d = traj.samples[i];
            series.times.push_back(d.time);
            series.mean_x.push_back(mean_position_direct(d, x, p));
            series.mean_x2.push_back(mean_square_position_direct(d, x, p));
            series.populations.push_back(d.populations());
            report.max_edge = std::max(report.max_edge, d.edge_amplitude());
            comparison_pop.push_back(population_error(i, d.n_lo, series.populations.back()));
        }
    } else {
        PdeConfig pc;
        pc.grid = cfg.grid;
        const double interval = t_end / samples;
        const int per_sample = std::max(1, static_cast<int>(std::ceil(interval / cfg.run.pde_dt - 1e-9)));
        pc.dt = interval / per_sample;
        pc.sample_stride = per_sample;
        pc.t_end = t_end;
        pc.absorbing_fraction = cfg.run.absorbing_fraction;
        const WaveFunction psi0 = reconstruct_wavefunction(d0, *basis, p);
        series.n_lo = basis->sites().n_lo;
        const Grid& g = cfg.grid;
        auto wt = split_step_evolve(psi0, p, pc, [&](double t, std::span<const cplx> psi) {
            const Projection pr = project_onto_ws(psi, *basis, p, t, cfg.run.leakage_threshold);
            report.max_leakage = std::max(report.max_leakage, pr.leakage);
            report.max_edge = std::max(report.max_edge, pr.d.edge_amplitude());
            series.populations.push_back(pr.d.populations());
            double num = 0.0, den = 0.0, num2 = 0.0;
            for (int i = 0; i < g.n_points(); ++i) {
                const double w = std::norm(psi[static_cast<std::size_t>(i)]);
                num += w * g.x(i);
                num2 += w * g.x(i) * g.x(i);
                den += w;
            }
            series.mean_x.push_back(num / den);
            series.mean_x2.push_back(num2 / den);
        });
        series.times = wt.times;
        if (series.times.size() != times.size())
            throw IntegrationError("PDE produced " + std::to_string(series.times.size()) + " samples, expected " +
                                   std::to_string(times.size()));
        const double norm0 = wt.norms.front();
        if (cfg.run.absorbing_fraction == 0.0)
            for (double n : wt.norms) report.norm_drift = std::max(report.norm_drift, std::abs(n - norm0));
        if (report.max_leakage > cfg.run.leakage_threshold) {
            std::ostringstream msg;
            msg << "leakage out of the lowest band " << report.max_leakage << " exceeds " << cfg.run.leakage_threshold;
            fail(msg.str());
        }
    }

    if (model == Model::Pde) {
        if (report.max_edge * report.max_edge > cfg.run.leakage_threshold) {
            std::ostringstream msg;
            msg << "edge population " << report.max_edge * report.max_edge << " exceeds " << cfg.run.leakage_threshold;
            fail(msg.str());
        }
    } else if (report.max_edge > cfg.run.edge_tol) {
        std::ostringstream msg;
        msg << "edge amplitude " << report.max_edge << " exceeds " << cfg.run.edge_tol;
        fail(msg.str());
    }
    if (report.norm_drift > cfg.run.norm_tolerance()) {
        std::ostringstream msg;
        msg << "norm drift " << report.norm_drift << " exceeds " << cfg.run.norm_tolerance();
        fail(msg.str());
    }

    write_populations_csv(tx.path("populations.csv"), series);
    write_observables_csv(tx.path("observables.csv"), series);
    write_text(tx.path("populations.gp"), populations_script());
    write_text(tx.path("observables.gp"), observables_script());
    if (model != Model::Exact) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,mean_x_exact,mean_x_model,mean_x_diff" << (model == Model::Ode ? ",population_error" : "") << "\n";
        for (std::size_t i = 0; i < series.times.size(); ++i) {
            csv << series.times[i] << ',' << exact.mean_x[i] << ',' << series.mean_x[i] << ','
                << series.mean_x[i] - exact.mean_x[i];
            if (model == Model::Ode) csv << ',' << comparison_pop[i];
            csv << '\n';
        }
        write_text(tx.path("comparison.csv"), csv.str());
        write_text(tx.path("comparison.gp"), comparison_script());
    }
    write_text(tx.path("manifest.cfg"), manifest_text(cfg, "run", *basis, omega1));

    log << "model " << model_label(model) << ", Omega_1 = " << omega1 << ", delta = " << p.delta()
        << ", t_end = " << t_end << ", " << series.times.size() << " samples\n"
        << "edge " << report.max_edge << ", norm drift " << report.norm_drift;
    if (model == Model::Pde) log << ", max leakage " << report.max_leakage;
    log << "\n";
    for (const auto& f : report.failures) log << "check failed: " << f << "\n";

    report.files = tx.files();
    tx.commit();
    return report;
}

SweepReport cmd_sweep(const ScenarioConfig& cfg, const std::string& axis, const std::vector<double>& values, int jobs,
                      std::ostream& log) {
    static const std::set<std::string> axes = {"f", "v0", "f0", "omega", "k0"};
    if (!axes.count(axis)) throw ConfigError("sweep axis must be one of f, v0, f0, omega, k0 (got '" + axis + "')");
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    jobs = std::max(1, jobs);
    fs::create_directories(cfg.out_dir);

    BasisStore store;
    std::vector<std::string> rows(values.size());
    std::atomic<std::size_t> next{0};
    std::atomic<int> failed{0};
    std::mutex log_mutex;

    auto run_point = [&](std::size_t i) {
        const double value = values[i];
        std::ostringstream row;
        row.precision(12);
        row << i << ',' << axis << ',' << value << ',';
        try {
            ScenarioConfig pc = cfg;
            const LatticeParams& l = cfg.lattice;
            if (axis == "f") pc.lattice = LatticeParams::make(l.v0(), value, l.f0(), l.omega());
            if (axis == "v0") pc.lattice = LatticeParams::make(value, l.f(), l.f0(), l.omega());
            if (axis == "f0") pc.lattice = LatticeParams::make(l.v0(), l.f(), value, l.omega());
            if (axis == "omega") pc.lattice = LatticeParams::make(l.v0(), l.f(), l.f0(), value);
            if (axis == "k0") pc.initial.k0 = value;
            pc.out_dir = (fs::path(cfg.out_dir) / ("point_" + std::to_string(i))).string();
            if (pc.cache_dir.empty()) pc.cache_dir = (fs::path(cfg.out_dir) / "cache").string();

            const auto basis = store.get(pc);
            const LatticeParams& p = pc.lattice;
            const double omega1 = p.f0() > 0.0 ? rabi_frequency(1, p, *basis) : 0.0;
            const double horizon = pc.run.t_end ? *pc.run.t_end : default_horizon(p, omega1);
            pc.run.t_end = horizon;
            const auto times = sample_times(horizon, 400);
            const AmplitudeState d0 = make_initial_state(pc.initial, initial_extent(pc.initial));
            const SiteMatrixElements x = SiteMatrixElements::from(*basis);
            const ClosedFormObservables cf(d0, x, p, omega1);
            ObservableSeries series;
            series.times = times;
            for (double t : times) {
                series.mean_x.push_back(cf.mean_position(t));
                series.mean_x2.push_back(cf.mean_square_position(t));
            }
            OutputTransaction tx(pc.out_dir);
            write_observables_csv(tx.path("observables.csv"), series);
            write_text(tx.path("observables.gp"), observables_script());
            write_text(tx.path("manifest.cfg"), manifest_text(pc, "sweep", *basis, omega1));
            tx.commit();

            const double vg_fit = fitted_slope(series.times, series.mean_x);
            // Drift of the resonant closed form: d<x>/dt averages to -2 Omega_1 Re C.
            const double vg_pred = p.delta() == 0.0 ? -2.0 * omega1 * d0.coherence(1).real() + 0.0 : 0.0;
            row << "ok," << basis->x1() << ',' << basis->x2() << ',' << omega1 << ',' << p.delta() << ',' << vg_fit
                << ',' << vg_pred << ',';
            if (p.delta() != 0.0)
                row << 2.0 * std::numbers::pi / std::abs(p.delta());
            else
                row << "inf";
            row << ',';
        } catch (const std::exception& e) {
            ++failed;
            row.str("");
            row << i << ',' << axis << ',' << value << ",error,,,,,,,," << csv_safe(e.what());
        }
        rows[i] = row.str();
        std::lock_guard lock(log_mutex);
        log << rows[i] << "\n";
    };

    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < values.size(); i = next++) run_point(i);
        });
    pool.clear();

    std::ostringstream csv;
    csv << kSweepHeader << "\n";
    for (const auto& r : rows) csv << r << "\n";
    write_text((fs::path(cfg.out_dir) / "summary.csv").string(), csv.str());
    return {rows, failed.load()};
}

}  // namespace wstark
