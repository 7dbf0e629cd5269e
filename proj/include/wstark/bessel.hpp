#pragma once

#include <complex>
#include <vector>

namespace wstark {

/// J_n(x) for integer n, |n| <= 1e6, finite x.
///
/// Miller's downward recurrence normalized by J_0 + 2 sum J_2k = 1. Stable for
/// every order; no asymptotic branch is needed over |x| <= 1e3.
double bessel_j(int order, double x);

/// J_{-n_max..n_max}(x) from one shared recurrence.
class BesselBand {
public:
    BesselBand(int n_max, double x);

    int n_max() const noexcept { return n_max_; }
    double argument() const noexcept { return x_; }

    /// J_n(x); zero outside [-n_max, n_max].
    double operator[](int n) const noexcept {
        return (n < -n_max_ || n > n_max_) ? 0.0 : values_[static_cast<std::size_t>(n + n_max_)];
    }

private:
    int n_max_;
    double x_;
    std::vector<double> values_;
};

/// Truncation order for every infinite Bessel sum:
/// ceil(|x|) + max(20, ceil(15 (|x|/2)^{1/3})).
int bessel_cutoff(double argument);

/// r e^{i theta}; a negative radius is folded into the angle.
class PolarVector {
public:
    PolarVector(double radius, double angle);

    static PolarVector from_complex(std::complex<double> z);

    double radius() const noexcept { return radius_; }
    double angle() const noexcept { return angle_; }
    std::complex<double> to_complex() const { return std::polar(radius_, angle_); }

private:
    double radius_;
    double angle_;
};

/// J_q(R) e^{i q Theta} with R e^{i Theta} = v1 - v0.
std::complex<double> addition_theorem_rhs(int q, const PolarVector& v0, const PolarVector& v1);

/// sum_{|p| <= p_cutoff} J_p(r0) e^{-i p th0} J_{p+q}(r1) e^{i (p+q) th1}.
/// Requires p_cutoff >= max(r0, r1) + 20.
std::complex<double> addition_theorem_lhs(int q, const PolarVector& v0, const PolarVector& v1, int p_cutoff);

}  // namespace wstark
