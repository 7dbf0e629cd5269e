#include "wstark/ws_basis.hpp"

#include "wstark/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace wstark {

namespace {

struct Candidate {
    double energy;
    double centroid;
    double participation;
    std::size_t index;
};

// Effective number of wells occupied, 1 / sum_w P_w^2 over unit cells.
double participation(const Grid& grid, std::span<const double> v) {
    std::map<long, double> cells;
    double total = 0.0;
    for (int i = 0; i < grid.n_points(); ++i) {
        const double p = v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        cells[static_cast<long>(std::floor(grid.x(i)))] += p;
        total += p;
    }
    double ipr = 0.0;
    for (const auto& [cell, p] : cells) ipr += (p / total) * (p / total);
    return 1.0 / ipr;
}

double centroid(const Grid& grid, std::span<const double> v) {
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < grid.n_points(); ++i) {
        const double p = v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        num += p * grid.x(i);
        den += p;
    }
    return num / den;
}

// Four-point Lagrange interpolation of samples v at position x (zero outside).
double interpolate(const Grid& grid, std::span<const double> v, double x) {
    const double s = (x - grid.x_min()) / grid.spacing();
    const long i1 = static_cast<long>(std::floor(s));
    const double t = s - static_cast<double>(i1);
    auto at = [&](long i) {
        return (i < 0 || i >= grid.n_points()) ? 0.0 : v[static_cast<std::size_t>(i)];
    };
    const double ym = at(i1 - 1), y0 = at(i1), y1 = at(i1 + 1), y2 = at(i1 + 2);
    return ym * (-t * (t - 1) * (t - 2) / 6) + y0 * ((t + 1) * (t - 1) * (t - 2) / 2) +
           y1 * (-(t + 1) * t * (t - 2) / 2) + y2 * ((t + 1) * t * (t - 1) / 6);
}

}  // namespace

double quadrature(const Grid& grid, std::span<const double> a, std::span<const double> b, int power) {
    double s = 0.0;
    for (int i = 0; i < grid.n_points(); ++i) {
        const double x = grid.x(i);
        const double w = power == 0 ? 1.0 : power == 1 ? x : power == 2 ? x * x : std::pow(x, power);
        s += a[static_cast<std::size_t>(i)] * w * b[static_cast<std::size_t>(i)];
    }
    return s * grid.spacing();
}

SymmetricBandMatrix build_hamiltonian(const LatticeParams& params, const Grid& grid, const BasisOptions& options) {
    if (grid.spacing() > options.max_spacing) {
        std::ostringstream msg;
        msg << "grid spacing " << grid.spacing() << " exceeds the admissible " << options.max_spacing;
        throw ConfigError(msg.str());
    }
    if (options.stencil_order != 2 && options.stencil_order != 4)
        throw ConfigError("stencil order must be 2 or 4");

    const int n = grid.n_points();
    const int kd = options.stencil_order / 2;
    const double c = 1.0 / (2.0 * params.reduced_mass() * grid.spacing() * grid.spacing());
    SymmetricBandMatrix h(n, kd);
    for (int i = 0; i < n; ++i) {
        const double v = potential_eval(params, grid.x(i), 0.0);
        if (kd == 1) {
            h.set(i, i, 2.0 * c + v);
            if (i + 1 < n) h.set(i, i + 1, -c);
        } else {
            h.set(i, i, 2.5 * c + v);
            if (i + 1 < n) h.set(i, i + 1, -4.0 / 3.0 * c);
            if (i + 2 < n) h.set(i, i + 2, c / 12.0);
        }
    }
    return h;
}

SiteWindow default_window(const Grid& grid, int margin) {
    int lo = static_cast<int>(std::ceil(grid.x_min())) + margin;
    int hi = static_cast<int>(std::floor(grid.x_max())) - 1 - margin;
    lo = std::max(lo, -12);
    hi = std::min(hi, 12);
    if (lo > hi) throw ConfigError("grid too small for any bulk site");
    return {lo, hi};
}

WannierStarkBasis solve_ws_basis(const LatticeParams& params, const Grid& grid, SiteWindow window,
                                 const BasisOptions& options) {
    if (window.size() < 3) throw ConfigError("site window needs at least three sites");
    if (!grid.is_bulk_site(window.n_lo, options.bulk_margin) || !grid.is_bulk_site(window.n_hi, options.bulk_margin)) {
        std::ostringstream msg;
        msg << "site window [" << window.n_lo << ", " << window.n_hi << "] is not " << options.bulk_margin
            << " lattice periods away from the walls of [" << grid.x_min() << ", " << grid.x_max() << "]";
        throw ConfigError(msg.str());
    }

    const SymmetricBandMatrix h = build_hamiltonian(params, grid, options);
    const double f = params.f();
    const double v0 = params.v0();
    const double lower = f * site_center(window.n_lo) - v0 - 2.0 * f - 1.0;
    const double upper = f * site_center(window.n_hi) + v0 + 2.0 * f + 1.0;
    EigenSlice slice = eigen_in_range(h, lower, upper);

    const double norm = 1.0 / std::sqrt(grid.spacing());
    std::map<int, std::vector<Candidate>> by_site;
    std::vector<double> centroids(slice.values.size());
    for (std::size_t k = 0; k < slice.values.size(); ++k) {
        auto& v = slice.vectors[k];
        for (auto& x : v) x *= norm;
        const double c = centroid(grid, v);
        centroids[k] = c;
        const int site = static_cast<int>(std::lround(c - 0.5));
        if (!window.contains(site)) continue;
        by_site[site].push_back({slice.values[k], c, participation(grid, v), k});
    }

    std::vector<std::vector<double>> states;
    std::vector<double> energies;
    for (int n = window.n_lo; n <= window.n_hi; ++n) {
        auto it = by_site.find(n);
        if (it == by_site.end() || it->second.empty()) {
            std::ostringstream msg;
            msg << "no eigenstate localized on site " << n << " in the energy slice [" << lower << ", " << upper << "]";
            throw BasisError(msg.str(), std::numeric_limits<double>::quiet_NaN());
        }
        const Candidate& best = *std::min_element(it->second.begin(), it->second.end(),
                                                  [](const Candidate& a, const Candidate& b) { return a.energy < b.energy; });
        if (best.participation > options.max_participation || std::abs(best.centroid - site_center(n)) > 0.45) {
            std::ostringstream msg;
            msg << "eigenvalue " << best.energy << " assigned to site " << n << " is not localized (centroid "
                << best.centroid << ", participation " << best.participation << " wells)";
            throw BasisError(msg.str(), best.energy);
        }
        states.push_back(std::move(slice.vectors[best.index]));
        energies.push_back(best.energy);
    }

    const int ref = window.contains(0) ? 0 : (window.n_lo + window.n_hi) / 2;
    // Excited families are not localized in general, so the gap is taken to
    // the lowest off-ladder state whose centroid is within one step of the
    // reference well.
    double gap = std::numeric_limits<double>::quiet_NaN();
    {
        const double e_ref = energies[static_cast<std::size_t>(ref - window.n_lo)];
        for (std::size_t k = 0; k < slice.values.size(); ++k) {
            const double e = slice.values[k];
            if (e <= e_ref || std::abs(centroids[k] - site_center(ref)) > 1.0) continue;
            if (f > 0) {
                const double steps = (e - e_ref) / f;
                if (std::abs(steps - std::round(steps)) * f < 1e-6 * std::max(1.0, std::abs(e))) continue;
            }
            gap = e - e_ref;
            break;
        }
    }

    // Sign convention: reference state positive at its extremum, then
    // <phi_n|x|phi_{n+1}> > 0 along the window in both directions.
    auto idx = [&](int n) { return static_cast<std::size_t>(n - window.n_lo); };
    {
        auto& s = states[idx(ref)];
        const auto ext = std::max_element(s.begin(), s.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
        if (*ext < 0)
            for (auto& x : s) x = -x;
    }
    for (int n = ref; n < window.n_hi; ++n) {
        if (quadrature(grid, states[idx(n)], states[idx(n + 1)], 1) < 0)
            for (auto& x : states[idx(n + 1)]) x = -x;
    }
    for (int n = ref; n > window.n_lo; --n) {
        if (quadrature(grid, states[idx(n - 1)], states[idx(n)], 1) < 0)
            for (auto& x : states[idx(n - 1)]) x = -x;
    }

    WannierStarkBasis basis(grid, params.v0(), params.f(), window, ref, std::move(states), std::move(energies), options,
                            gap);
    if (f > 0 && basis.diagnostics().ladder_residual > options.tol.ladder_rel * f) {
        std::ostringstream msg;
        msg << "Wannier-Stark ladder broken: max |E_{n+1} - E_n - f| = " << basis.diagnostics().ladder_residual
            << " exceeds " << options.tol.ladder_rel * f;
        throw SymmetryError(msg.str());
    }
    return basis;
}

WannierStarkBasis::WannierStarkBasis(Grid grid, double v0, double f, SiteWindow sites, int reference_site,
                                     std::vector<std::vector<double>> states, std::vector<double> energies,
                                     BasisOptions options, double next_band_gap)
    : grid_(grid),
      v0_(v0),
      f_(f),
      sites_(sites),
      ref_(reference_site),
      states_(std::move(states)),
      energies_(std::move(energies)),
      options_(options) {
    if (sites_.size() < 3) throw ConfigError("basis needs at least three sites");
    if (static_cast<int>(states_.size()) != sites_.size() || static_cast<int>(energies_.size()) != sites_.size())
        throw ConfigError("basis state count does not match the site window");
    for (const auto& s : states_)
        if (static_cast<int>(s.size()) != grid_.n_points()) throw ConfigError("basis state length does not match the grid");
    if (!sites_.contains(ref_)) throw ConfigError("reference site outside the window");
    diag_.next_band_gap = next_band_gap;
    compute_invariants();
}

std::span<const double> WannierStarkBasis::state(int n) const {
    if (!sites_.contains(n)) throw ConfigError("site " + std::to_string(n) + " outside the basis window");
    return states_[static_cast<std::size_t>(n - sites_.n_lo)];
}

double WannierStarkBasis::energy(int n) const {
    if (!sites_.contains(n)) throw ConfigError("site " + std::to_string(n) + " outside the basis window");
    return energies_[static_cast<std::size_t>(n - sites_.n_lo)];
}

double WannierStarkBasis::x_p(int p) const {
    if (p < 0) p = -p;
    if (p >= static_cast<int>(xp_.size())) return 0.0;
    return xp_[static_cast<std::size_t>(p)];
}

void WannierStarkBasis::compute_invariants() {
    const int lo = sites_.n_lo;
    const int hi = sites_.n_hi;
    auto mx = [&](int n, int m) { return quadrature(grid_, state(n), state(m), 1); };
    auto mx2 = [&](int n, int m) { return quadrature(grid_, state(n), state(m), 2); };
    // Base site of the pair (n, n + p) closest to the reference.
    auto pair_base = [&](int p) { return std::clamp(ref_, lo, hi - p); };

    const int pmax = std::min(4, sites_.size() - 1);
    xp_.assign(static_cast<std::size_t>(pmax) + 1, 0.0);
    xp_[0] = mx(ref_, ref_) - ref_;
    for (int p = 1; p <= pmax; ++p) xp_[static_cast<std::size_t>(p)] = mx(pair_base(p), pair_base(p) + p);
    x0_ = xp_[0];
    x1_ = xp_[1];
    x2_ = xp_[2];
    x0_sq_ = mx2(ref_, ref_) - 2.0 * ref_ * x0_ - static_cast<double>(ref_) * ref_;
    {
        const int b = pair_base(1);
        x1_sq_ = mx2(b, b + 1) - 2.0 * b * x1_;
    }
    e_origin_ = energy(ref_) - ref_ * f_;

    diag_.ladder_residual = 0.0;
    for (int n = lo; n < hi; ++n)
        diag_.ladder_residual = std::max(diag_.ladder_residual, std::abs(energy(n + 1) - energy(n) - f_));

    diag_.diagonal_residual = 0.0;
    diag_.offdiagonal_residual = 0.0;
    diag_.ortho_residual = 0.0;
    for (int n = lo; n <= hi; ++n) {
        diag_.diagonal_residual = std::max(diag_.diagonal_residual, std::abs(mx(n, n) - x0_ - n));
        for (int p = 1; p <= std::min(2, pmax); ++p)
            if (n + p <= hi) diag_.offdiagonal_residual = std::max(diag_.offdiagonal_residual, std::abs(mx(n, n + p) - x_p(p)));
        for (int m = n; m <= hi; ++m) {
            const double o = quadrature(grid_, state(n), state(m), 0);
            diag_.ortho_residual = std::max(diag_.ortho_residual, std::abs(o - (n == m ? 1.0 : 0.0)));
        }
    }

    const std::span<const double> ref_state = state(ref_);
    const int per_step = grid_.samples_per_step();
    diag_.translation_residual = 0.0;
    for (int n = lo; n <= hi; ++n) {
        const auto s = state(n);
        const int shift = n - ref_;
        for (int i = 0; i < grid_.n_points(); ++i) {
            double translated;
            if (per_step > 0) {
                const long j = i - static_cast<long>(shift) * per_step;
                translated = (j < 0 || j >= grid_.n_points()) ? 0.0 : ref_state[static_cast<std::size_t>(j)];
            } else {
                translated = interpolate(grid_, ref_state, grid_.x(i) - shift);
            }
            diag_.translation_residual =
                std::max(diag_.translation_residual, std::abs(s[static_cast<std::size_t>(i)] - translated));
        }
    }

    diag_.x2_over_x1 = x1_ != 0.0 ? x2_ / x1_ : 0.0;
    diag_.sites.clear();
    for (int n = lo; n <= hi; ++n) {
        const auto s = state(n);
        diag_.sites.push_back({n, energy(n), centroid(grid_, s), participation(grid_, s)});
    }
}

double matrix_element_x(const WannierStarkBasis& basis, int n, int m) {
    return quadrature(basis.grid(), basis.state(n), basis.state(m), 1);
}

double matrix_element_x2(const WannierStarkBasis& basis, int n, int m) {
    return quadrature(basis.grid(), basis.state(n), basis.state(m), 2);
}

}  // namespace wstark
