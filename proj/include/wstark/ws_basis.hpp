#pragma once

#include "wstark/band_matrix.hpp"
#include "wstark/params.hpp"

#include <span>
#include <string>
#include <vector>

namespace wstark {

struct BasisTolerances {
    double ortho = 1e-8;        ///< max |<phi_n|phi_m> - delta_nm|
    double ladder_rel = 1e-4;   ///< max |E_{n+1} - E_n - f| in units of f
    double trans = 1e-4;        ///< translation identities

    bool operator==(const BasisTolerances&) const = default;
};

struct BasisOptions {
    /// Order of the central-difference kinetic stencil (2 or 4).
    int stencil_order = 4;
    BasisTolerances tol;
    /// A state spread over more wells than this (inverse participation) is
    /// not a localized Wannier-Stark state.
    double max_participation = 3.0;
    /// Coarsest admissible grid spacing, in lattice steps.
    double max_spacing = 0.05;
    /// Whole lattice periods required between the window and each wall.
    int bulk_margin = 3;

    bool operator==(const BasisOptions&) const = default;
};

/// Per-site localization diagnostics.
struct SiteDiagnostics {
    int site = 0;
    double energy = 0.0;
    double centroid = 0.0;
    double participation = 0.0;  ///< effective number of wells
};

struct BasisDiagnostics {
    double ladder_residual = 0.0;       ///< max |E_{n+1} - E_n - f|
    double translation_residual = 0.0;  ///< max_x |phi_n(x) - phi_ref(x - (n - ref))|
    double diagonal_residual = 0.0;     ///< max |X_nn - X_00 - n|
    double offdiagonal_residual = 0.0;  ///< max |X_{n,n+p} - X_p|, p = 1, 2
    double ortho_residual = 0.0;        ///< max |<phi_n|phi_m> - delta_nm|
    double next_band_gap = 0.0;         ///< next state localized on the reference site, minus its energy
    double x2_over_x1 = 0.0;
    std::vector<SiteDiagnostics> sites;
};

/// Lowest-band Wannier-Stark states of the static tilted lattice on one grid.
///
/// Site n is the well centered at x = n + 1/2. All states are real, unit
/// normalized on the grid, and signed so that <phi_n|x|phi_{n+1}> > 0.
/// Matrix elements are quoted in the site-0 convention even when site 0 is
/// outside the window (translation identities are used to shift them).
class WannierStarkBasis {
public:
    WannierStarkBasis(Grid grid, double v0, double f, SiteWindow sites, int reference_site,
                      std::vector<std::vector<double>> states, std::vector<double> energies,
                      BasisOptions options, double next_band_gap = 0.0);

    const Grid& grid() const noexcept { return grid_; }
    double v0() const noexcept { return v0_; }
    double f() const noexcept { return f_; }
    SiteWindow sites() const noexcept { return sites_; }
    int reference_site() const noexcept { return ref_; }
    const BasisOptions& options() const noexcept { return options_; }

    std::span<const double> state(int n) const;
    double energy(int n) const;
    const std::vector<double>& energies() const noexcept { return energies_; }

    double x0() const noexcept { return x0_; }
    double x1() const noexcept { return x1_; }
    double x2() const noexcept { return x2_; }
    double x0_sq() const noexcept { return x0_sq_; }
    double x1_sq() const noexcept { return x1_sq_; }
    /// X_p = <phi_n|x|phi_{n+p}> for p = 0..p_max (p = 0 gives X_00).
    double x_p(int p) const;
    int p_max() const noexcept { return static_cast<int>(xp_.size()) - 1; }

    /// Energy of site n with E_0 of the ladder as reference (E_n - E_0 = n f).
    double ladder_origin() const noexcept { return e_origin_; }

    const BasisDiagnostics& diagnostics() const noexcept { return diag_; }

private:
    void compute_invariants();

    Grid grid_;
    double v0_;
    double f_;
    SiteWindow sites_;
    int ref_;
    std::vector<std::vector<double>> states_;
    std::vector<double> energies_;
    BasisOptions options_;

    double x0_ = 0, x1_ = 0, x2_ = 0, x0_sq_ = 0, x1_sq_ = 0, e_origin_ = 0;
    std::vector<double> xp_;
    BasisDiagnostics diag_;
};

/// Discretized H0 = p^2/(2m) + v0 cos(2 pi x) + f x with hard walls just
/// outside the grid. Throws ConfigError for spacing above options.max_spacing.
SymmetricBandMatrix build_hamiltonian(const LatticeParams& params, const Grid& grid,
                                      const BasisOptions& options = {});

/// Diagonalizes H0 in the energy slice covering the window and extracts one
/// localized lowest-band state per site.
WannierStarkBasis solve_ws_basis(const LatticeParams& params, const Grid& grid, SiteWindow window,
                                 const BasisOptions& options = {});

/// Default window of the preset grid: every site with the bulk margin
/// clipped to [-12, 12].
SiteWindow default_window(const Grid& grid, int margin = 3);

/// <phi_n|x|phi_m> and <phi_n|x^2|phi_m> by grid quadrature.
double matrix_element_x(const WannierStarkBasis& basis, int n, int m);
double matrix_element_x2(const WannierStarkBasis& basis, int n, int m);

/// Grid quadrature of a(x) x^power b(x).
double quadrature(const Grid& grid, std::span<const double> a, std::span<const double> b, int power);

}  // namespace wstark
