#pragma once

#include "wstark/params.hpp"

#include <complex>
#include <vector>

namespace wstark {

using cplx = std::complex<double>;

/// Complex site amplitudes over the contiguous window [n_lo, n_lo + size).
struct AmplitudeState {
    int n_lo = 0;
    std::vector<cplx> amplitudes;
    double time = 0.0;

    AmplitudeState() = default;
    AmplitudeState(int first_site, std::vector<cplx> values, double t = 0.0)
        : n_lo(first_site), amplitudes(std::move(values)), time(t) {}

    /// Zero amplitudes over a window.
    static AmplitudeState zeros(SiteWindow window, double t = 0.0);
    /// d_n = delta_{n, site}.
    static AmplitudeState single_site(int site, SiteWindow window, double t = 0.0);

    int size() const noexcept { return static_cast<int>(amplitudes.size()); }
    int n_hi() const noexcept { return n_lo + size() - 1; }
    SiteWindow window() const noexcept { return {n_lo, n_hi()}; }
    bool contains(int n) const noexcept { return n >= n_lo && n <= n_hi(); }

    /// d_n, zero outside the window.
    cplx at(int n) const noexcept { return contains(n) ? amplitudes[static_cast<std::size_t>(n - n_lo)] : cplx{}; }
    cplx& operator[](int n) { return amplitudes[static_cast<std::size_t>(n - n_lo)]; }

    double norm() const noexcept;  ///< sum |d_n|^2
    void normalize();
    std::vector<double> populations() const;

    /// sum_n d_n^* d_{n+p}.
    cplx coherence(int p) const noexcept;
    /// sum_n n d_n^* d_{n+p}.
    cplx weighted_coherence(int p) const noexcept;
    /// sum_n n^k |d_n|^2.
    double moment(int k) const noexcept;

    /// Same amplitudes over a window that must contain the current one.
    AmplitudeState grown(SiteWindow window) const;

    /// Largest |d_n| among the `width` outermost sites at either end.
    double edge_amplitude(int width = 1) const noexcept;

    /// Smallest window holding every site with |d_n| > threshold
    /// (the single site n_lo if none does).
    SiteWindow populated(double threshold) const noexcept;
};

}  // namespace wstark
