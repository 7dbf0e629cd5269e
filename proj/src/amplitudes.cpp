#include "wstark/amplitudes.hpp"

#include "wstark/errors.hpp"

#include <algorithm>
#include <cmath>

namespace wstark {

AmplitudeState AmplitudeState::zeros(SiteWindow window, double t) {
    if (window.size() < 1) throw ConfigError("empty site window");
    return {window.n_lo, std::vector<cplx>(static_cast<std::size_t>(window.size())), t};
}

AmplitudeState AmplitudeState::single_site(int site, SiteWindow window, double t) {
    if (!window.contains(site)) throw ConfigError("initial site outside the window");
    AmplitudeState s = zeros(window, t);
    s[site] = 1.0;
    return s;
}

double AmplitudeState::norm() const noexcept {
    double s = 0.0;
    for (const auto& d : amplitudes) s += std::norm(d);
    return s;
}

void AmplitudeState::normalize() {
    const double nrm = norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ConfigError("amplitude state is not normalizable");
    const double scale = 1.0 / std::sqrt(nrm);
    for (auto& d : amplitudes) d *= scale;
}

std::vector<double> AmplitudeState::populations() const {
    std::vector<double> p(amplitudes.size());
    std::transform(amplitudes.begin(), amplitudes.end(), p.begin(), [](cplx d) { return std::norm(d); });
    return p;
}

cplx AmplitudeState::coherence(int p) const noexcept {
    cplx s{};
    for (int n = n_lo; n <= n_hi(); ++n) s += std::conj(at(n)) * at(n + p);
    return s;
}

cplx AmplitudeState::weighted_coherence(int p) const noexcept {
    cplx s{};
    for (int n = n_lo; n <= n_hi(); ++n) s += static_cast<double>(n) * std::conj(at(n)) * at(n + p);
    return s;
}

double AmplitudeState::moment(int k) const noexcept {
    double s = 0.0;
    for (int n = n_lo; n <= n_hi(); ++n) s += std::pow(static_cast<double>(n), k) * std::norm(at(n));
    return s;
}

AmplitudeState AmplitudeState::grown(SiteWindow window) const {
    if (window.n_lo > n_lo || window.n_hi < n_hi()) throw ConfigError("grown window must contain the current one");
    AmplitudeState out = zeros(window, time);
    std::copy(amplitudes.begin(), amplitudes.end(), out.amplitudes.begin() + (n_lo - window.n_lo));
    return out;
}

double AmplitudeState::edge_amplitude(int width) const noexcept {
    double m = 0.0;
    for (int k = 0; k < std::min(width, size()); ++k) {
        m = std::max(m, std::abs(amplitudes[static_cast<std::size_t>(k)]));
        m = std::max(m, std::abs(amplitudes[static_cast<std::size_t>(size() - 1 - k)]));
    }
    return m;
}

SiteWindow AmplitudeState::populated(double threshold) const noexcept {
    int lo = n_hi() + 1;
    int hi = n_lo - 1;
    for (int n = n_lo; n <= n_hi(); ++n) {
        if (std::abs(at(n)) > threshold) {
            lo = std::min(lo, n);
            hi = std::max(hi, n);
        }
    }
    if (lo > hi) return {n_lo, n_lo};
    return {lo, hi};
}

}  // namespace wstark
