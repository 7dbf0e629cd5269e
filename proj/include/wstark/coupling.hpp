#pragma once

#include "wstark/amplitudes.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wstark {

class WannierStarkBasis;

/// d_n' = Omega_1 [d_{n+1} e^{i delta t} - d_{n-1} e^{-i delta t}]
struct NearestNeighbor {
    double omega1 = 0.0;
    double delta = 0.0;
};

/// d_n' = Omega_2 [d_{n+2} - d_{n-2}]  (omega = 2 w_B, no detuning)
struct NextNearest {
    double omega2 = 0.0;
};

/// Dressed amplitude equations with every neighbour p = 1..p_max:
///
///     d_n' = i f0 sum_{p != 0} X_p d_{n+p} e^{-i p [w_B t + (f0/omega) cos(omega t)]} sin(omega t)
///
/// Without l_max this exponential form is integrated as is. With l_max the
/// Bessel expansion is truncated to harmonics |l| <= l_max, and slow_only keeps
/// just the terms whose frequency is below half of min(omega, w_B).
struct FullHarmonics {
    std::vector<double> x_p;  ///< X_1 .. X_{p_max}
    double f0 = 0.0;
    double omega = 0.0;
    double omega_b = 0.0;
    std::optional<int> l_max;
    bool slow_only = false;

    int p_max() const noexcept { return static_cast<int>(x_p.size()); }

    static FullHarmonics from_basis(const WannierStarkBasis& basis, const LatticeParams& params, int p_max);
};

using CouplingModel = std::variant<NearestNeighbor, NextNearest, FullHarmonics>;

std::string model_name(const CouplingModel& model);

/// Bound on the fastest rate in the equations (coupling norm plus the largest
/// oscillation frequency); h times this is checked against the step bound.
double characteristic_rate(const CouplingModel& model);

/// Right-hand side d' = A(t) d on a fixed window; amplitudes outside are zero.
class CouplingRhs {
public:
    explicit CouplingRhs(CouplingModel model);

    const CouplingModel& model() const noexcept { return model_; }
    void operator()(double t, const std::vector<cplx>& d, std::vector<cplx>& out) const;

private:
    struct Term {
        int p;
        cplx coefficient;
        double frequency;
    };

    CouplingModel model_;
    std::vector<Term> terms_;  // truncated harmonic expansion
};

}  // namespace wstark
