#include "wstark/params.hpp"

#include "wstark/config.hpp"
#include "wstark/errors.hpp"

#include <cmath>
#include <sstream>

namespace wstark {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite");
}

}  // namespace

LatticeParams LatticeParams::make(double v0, double f, double f0, double omega) {
    require_finite(v0, "v0");
    require_finite(f, "f");
    require_finite(f0, "f0");
    require_finite(omega, "omega");
    if (!(v0 > 0)) throw ConfigError("lattice depth v0 must be positive");
    if (!(f > 0)) throw ConfigError("tilt f must be positive");
    if (!(f0 >= 0)) throw ConfigError("modulation amplitude f0 must be non-negative");
    if (!(omega > 0)) throw ConfigError("modulation frequency omega must be positive");
    return LatticeParams(v0, f, f0, omega);
}

LatticeParams LatticeParams::benchmark(double v0, double f, double f0, double omega) {
    require_finite(v0, "v0");
    require_finite(f, "f");
    require_finite(f0, "f0");
    require_finite(omega, "omega");
    if (!(v0 >= 0) || !(f >= 0) || !(f0 >= 0) || !(omega > 0))
        throw ConfigError("benchmark parameters need v0, f, f0 >= 0 and omega > 0");
    LatticeParams p(v0, f, f0, omega);
    p.relaxed_ = true;
    return p;
}

LatticeParams LatticeParams::standard_preset(double f0, double omega) { return make(4.5, 0.5, f0, omega); }

LatticeParams LatticeParams::from_config(const KeyValueConfig& cfg) {
    const double v0 = cfg.get_double("lattice.v0");
    const double f = cfg.get_double("lattice.f");
    const double f0 = cfg.get_double("lattice.f0", 0.0);
    const double omega = cfg.get_double("lattice.omega", f);
    return make(v0, f, f0, omega);
}

std::vector<std::string> LatticeParams::validity_warnings() const {
    std::vector<std::string> out;
    if (drive_ratio() >= kFirstZeroJ1) {
        std::ostringstream msg;
        msg << "f0/omega = " << drive_ratio() << " is beyond the first zero of J1 (" << kFirstZeroJ1
            << "); the modulation is not smooth and the single-band reduction does not apply";
        out.push_back(msg.str());
    }
    if (f0_ > 0 && f_ > 0 && std::abs(delta_) > 0.5 * std::min(omega_, f_)) {
        std::ostringstream msg;
        msg << "detuning |delta| = " << std::abs(delta_)
            << " is not small compared to omega and the Bloch frequency; no resonant closed form applies";
        out.push_back(msg.str());
    }
    return out;
}

LatticeParams LatticeParams::with_drive(double f0, double omega) const {
    return relaxed_ ? benchmark(v0_, f_, f0, omega) : make(v0_, f_, f0, omega);
}

LatticeParams LatticeParams::with_lattice(double v0, double f) const {
    return relaxed_ ? benchmark(v0, f, f0_, omega_) : make(v0, f, f0_, omega_);
}

Grid::Grid(double x_min, double x_max, int n_points) : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
        throw ConfigError("grid needs finite x_min < x_max");
    if (n_points < 2) throw ConfigError("grid needs at least two points");
    spacing_ = (x_max - x_min) / (n_points - 1);
}

Grid Grid::standard_default() { return Grid(-24.0, 24.0 - 1.0 / 64.0, 48 * 64); }

Grid Grid::commensurate(double x_min, double x_max, int n_per_step) {
    if (n_per_step < 1) throw ConfigError("samples per lattice step must be positive");
    const double cells = (x_max - x_min) * n_per_step;
    const long n = std::lround(cells);
    if (std::abs(cells - static_cast<double>(n)) > 1e-9)
        throw ConfigError("grid extent is not a multiple of the requested spacing");
    return Grid(x_min, x_max, static_cast<int>(n) + 1);
}

Grid Grid::from_config(const KeyValueConfig& cfg) {
    const Grid def = standard_default();
    if (cfg.has("grid.points_per_step")) {
        return commensurate(cfg.get_double("grid.x_min", def.x_min()), cfg.get_double("grid.x_max", def.x_max()),
                            static_cast<int>(cfg.get_int("grid.points_per_step")));
    }
    return Grid(cfg.get_double("grid.x_min", def.x_min()), cfg.get_double("grid.x_max", def.x_max()),
                static_cast<int>(cfg.get_int("grid.n_points", def.n_points())));
}

std::vector<double> Grid::positions() const {
    std::vector<double> xs(n_points_);
    for (int i = 0; i < n_points_; ++i) xs[i] = x(i);
    return xs;
}

int Grid::samples_per_step() const noexcept {
    const double per = 1.0 / spacing_;
    const long n = std::lround(per);
    if (n < 1 || std::abs(per - static_cast<double>(n)) > 1e-9 * per) return 0;
    return static_cast<int>(n);
}

bool Grid::is_bulk_site(int n, int margin) const noexcept {
    return static_cast<double>(n) - margin >= x_min_ - 1e-12 && static_cast<double>(n) + 1 + margin <= x_max_ + 1e-12;
}

Grid Grid::refined() const { return Grid(x_min_, x_max_, 2 * n_points_ - 1); }

double potential_eval(const LatticeParams& params, double x, double t) {
    return params.v0() * std::cos(2.0 * std::numbers::pi * x) + params.f() * x -
           params.f0() * x * std::sin(params.omega() * t);
}

}  // namespace wstark
