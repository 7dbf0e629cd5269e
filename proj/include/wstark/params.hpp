#pragma once

#include <numbers>
#include <string>
#include <vector>

namespace wstark {

class KeyValueConfig;

/// Reduced mass in natural units (lengths in lattice steps, energies in
/// recoil energies, hbar = 1).
inline constexpr double kReducedMass = std::numbers::pi * std::numbers::pi / 2.0;

/// First positive zero of J1. Drives with f0/omega beyond it are not smooth.
inline constexpr double kFirstZeroJ1 = 3.8317059702075123;

/// Physical configuration of the driven tilted lattice
///
///     V(x, t) = v0 cos(2 pi x) + f x - f0 x sin(omega t)
///
/// in natural units. The Bloch frequency equals the tilt, so the detuning is
/// fixed at construction to delta = omega - f.
class LatticeParams {
public:
    /// Validated construction: v0 > 0, f > 0, f0 >= 0, omega > 0.
    static LatticeParams make(double v0, double f, double f0, double omega);

    /// Relaxed construction for benchmark configurations (free particle,
    /// untilted lattice): v0 >= 0, f >= 0, f0 >= 0, omega > 0.
    static LatticeParams benchmark(double v0, double f, double f0, double omega);

    /// v0 = 4.5, f = 0.5 with the given drive; omega defaults to resonance.
    static LatticeParams standard_preset(double f0 = 0.0, double omega = 0.5);

    /// Reads [lattice] v0, f, f0, omega. Missing f0 means an undriven lattice,
    /// missing omega means resonant driving (omega = f).
    static LatticeParams from_config(const KeyValueConfig& cfg);

    double v0() const noexcept { return v0_; }
    double f() const noexcept { return f_; }
    double f0() const noexcept { return f0_; }
    double omega() const noexcept { return omega_; }
    double delta() const noexcept { return delta_; }
    double bloch_frequency() const noexcept { return f_; }
    static constexpr double reduced_mass() noexcept { return kReducedMass; }

    /// Drive strength argument of the Bessel factors, f0 / omega.
    double drive_ratio() const noexcept { return f0_ / omega_; }

    /// Human-readable warnings about the regime of validity (empty if none).
    std::vector<std::string> validity_warnings() const;

    LatticeParams with_drive(double f0, double omega) const;
    LatticeParams with_lattice(double v0, double f) const;

    bool operator==(const LatticeParams&) const = default;

private:
    LatticeParams(double v0, double f, double f0, double omega)
        : v0_(v0), f_(f), f0_(f0), omega_(omega), delta_(omega - f) {}

    double v0_;
    double f_;
    double f0_;
    double omega_;
    double delta_;
    bool relaxed_ = false;
};

/// Uniform real-space sampling, endpoints included.
class Grid {
public:
    Grid(double x_min, double x_max, int n_points);

    /// Default grid for the preset: [-24, 24) with 64 samples per lattice step.
    static Grid standard_default();

    /// n_per_step samples per lattice step over [x_min, x_max], x_max included.
    static Grid commensurate(double x_min, double x_max, int n_per_step);

    static Grid from_config(const KeyValueConfig& cfg);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    int n_points() const noexcept { return n_points_; }
    double spacing() const noexcept { return spacing_; }
    double x(int i) const noexcept { return x_min_ + i * spacing_; }
    std::vector<double> positions() const;

    /// Samples per lattice step if the spacing divides the lattice step
    /// (to 1e-9), 0 otherwise.
    int samples_per_step() const noexcept;

    /// Site n occupies the cell [n, n+1] around its well at x = n + 1/2. A site
    /// is bulk when the cell has `margin` whole lattice periods to each wall.
    bool is_bulk_site(int n, int margin = 3) const noexcept;

    Grid refined() const;  ///< Halved spacing over the same interval.

    bool operator==(const Grid&) const = default;

private:
    double x_min_;
    double x_max_;
    int n_points_;
    double spacing_;
};

/// v0 cos(2 pi x) + f x - f0 x sin(omega t).
double potential_eval(const LatticeParams& params, double x, double t);

/// Contiguous range of site indices [n_lo, n_hi].
struct SiteWindow {
    int n_lo = 0;
    int n_hi = 0;

    int size() const noexcept { return n_hi - n_lo + 1; }
    bool contains(int n) const noexcept { return n >= n_lo && n <= n_hi; }
    bool operator==(const SiteWindow&) const = default;
};

/// Center of the well hosting site n.
constexpr double site_center(int n) noexcept { return n + 0.5; }

}  // namespace wstark
