#include "wstark/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wstark {

namespace {

constexpr double kBig = 1e250;
constexpr double kSeed = 1e-30;
constexpr int kMaxOrder = 1'000'000;

// Starting order for the downward recurrence; far enough above both the
// requested order and the turning point |x| that the seed error is lost.
int miller_start(int n_max, double ax) {
    const double top = std::max(static_cast<double>(n_max), std::ceil(ax));
    int m = static_cast<int>(top + 20.0 + std::sqrt(160.0 * top));
    return m + (m & 1);
}

// Runs the recurrence for x > 0 and hands J_k (k = 0..n_max, unnormalized) to
// sink(k, value); returns the normalization factor to multiply them by.
template <class Sink>
double miller(int n_max, double x, Sink&& sink, auto&& rescale) {
    const int m = miller_start(n_max, x);
    const double two_over_x = 2.0 / x;
    double j_next = 0.0;  // J_{k+1}
    double j = kSeed;     // J_k
    double sum = 0.0;
    for (int k = m; k >= 1; --k) {
        if (k <= n_max) sink(k, j);
        if ((k & 1) == 0) sum += 2.0 * j;
        const double j_prev = k * two_over_x * j - j_next;
        j_next = j;
        j = j_prev;
        if (std::abs(j) > kBig) {
            j *= 1.0 / kBig;
            j_next *= 1.0 / kBig;
            sum *= 1.0 / kBig;
            rescale(1.0 / kBig);
        }
    }
    sink(0, j);
    sum += j;
    return 1.0 / sum;
}

}  // namespace

int bessel_cutoff(double argument) {
    const double x = std::abs(argument);
    // Beyond n = x the decay is Airy-like on the scale (x/2)^{1/3}; 15 such
    // widths put J_n below 1e-16.
    const int slack = std::max(20, static_cast<int>(std::ceil(15.0 * std::cbrt(0.5 * x))));
    return static_cast<int>(std::ceil(x)) + slack;
}

BesselBand::BesselBand(int n_max, double x) : n_max_(n_max), x_(x) {
    if (n_max < 0 || n_max > kMaxOrder) throw std::domain_error("Bessel band order out of range");
    if (!std::isfinite(x)) throw std::domain_error("Bessel argument must be finite");
    values_.assign(static_cast<std::size_t>(2 * n_max + 1), 0.0);
    if (x == 0.0) {
        values_[static_cast<std::size_t>(n_max)] = 1.0;
        return;
    }
    const double ax = std::abs(x);
    std::vector<double> pos(static_cast<std::size_t>(n_max) + 1, 0.0);
    const double norm = miller(
        n_max, ax, [&](int k, double v) { pos[static_cast<std::size_t>(k)] = v; },
        [&](double s) {
            for (auto& v : pos) v *= s;
        });
    for (int k = 0; k <= n_max; ++k) {
        double v = pos[static_cast<std::size_t>(k)] * norm;
        if (x < 0 && (k & 1)) v = -v;  // J_k(-x) = (-1)^k J_k(x)
        values_[static_cast<std::size_t>(n_max + k)] = v;
        values_[static_cast<std::size_t>(n_max - k)] = (k & 1) ? -v : v;  // J_{-k} = (-1)^k J_k
    }
}

double bessel_j(int order, double x) {
    if (order < -kMaxOrder || order > kMaxOrder) throw std::domain_error("Bessel order out of range");
    if (!std::isfinite(x)) throw std::domain_error("Bessel argument must be finite");
    const int n = std::abs(order);
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    double value = 0.0;
    const double norm = miller(
        n, std::abs(x),
        [&](int k, double v) {
            if (k == n) value = v;
        },
        [&](double s) { value *= s; });
    value *= norm;
    const bool flip = ((order < 0) != (x < 0)) && (n & 1);
    return flip ? -value : value;
}

PolarVector::PolarVector(double radius, double angle) : radius_(radius), angle_(angle) {
    if (radius_ < 0) {
        radius_ = -radius_;
        angle_ += std::numbers::pi;
    }
}

PolarVector PolarVector::from_complex(std::complex<double> z) { return {std::abs(z), std::arg(z)}; }

std::complex<double> addition_theorem_rhs(int q, const PolarVector& v0, const PolarVector& v1) {
    const std::complex<double> diff = v1.to_complex() - v0.to_complex();
    const double r = std::abs(diff);
    if (r == 0.0) return q == 0 ? 1.0 : 0.0;
    return bessel_j(q, r) * std::polar(1.0, q * std::arg(diff));
}

std::complex<double> addition_theorem_lhs(int q, const PolarVector& v0, const PolarVector& v1, int p_cutoff) {
    const double need = std::max(v0.radius(), v1.radius()) + 20.0;
    if (p_cutoff < need)
        throw std::invalid_argument("addition theorem cutoff " + std::to_string(p_cutoff) + " below required " +
                                    std::to_string(need));
    const BesselBand j0(p_cutoff, v0.radius());
    const BesselBand j1(p_cutoff + std::abs(q), v1.radius());
    std::complex<double> sum = 0.0;
    for (int p = -p_cutoff; p <= p_cutoff; ++p) {
        const double phase = -p * v0.angle() + (p + q) * v1.angle();
        sum += j0[p] * j1[p + q] * std::polar(1.0, phase);
    }
    return sum;
}

}  // namespace wstark
