#include "wstark/coupling.hpp"

#include "wstark/bessel.hpp"
#include "wstark/errors.hpp"
#include "wstark/ws_basis.hpp"

#include <algorithm>
#include <cmath>

namespace wstark {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

cplx minus_i_pow(int l) {
    switch (((l % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}
}  // namespace

FullHarmonics FullHarmonics::from_basis(const WannierStarkBasis& basis, const LatticeParams& params, int p_max) {
    if (p_max < 1 || p_max > basis.p_max()) throw ConfigError("p_max outside the range of the basis");
    FullHarmonics m;
    for (int p = 1; p <= p_max; ++p) m.x_p.push_back(basis.x_p(p));
    m.f0 = params.f0();
    m.omega = params.omega();
    m.omega_b = params.bloch_frequency();
    return m;
}

std::string model_name(const CouplingModel& model) {
    return std::visit(overloaded{[](const NearestNeighbor&) { return std::string("nearest-neighbor"); },
                                 [](const NextNearest&) { return std::string("next-nearest"); },
                                 [](const FullHarmonics&) { return std::string("full-harmonics"); }},
                      model);
}

double characteristic_rate(const CouplingModel& model) {
    return std::visit(overloaded{[](const NearestNeighbor& m) { return 2.0 * std::abs(m.omega1) + std::abs(m.delta); },
                                 [](const NextNearest& m) { return 2.0 * std::abs(m.omega2); },
                                 [](const FullHarmonics& m) {
                                     double c = 0.0;
                                     for (double x : m.x_p) c += 2.0 * std::abs(x);
                                     const double fast = m.p_max() * (m.omega_b + m.f0) + m.omega;
                                     const int l = m.l_max.value_or(0);
                                     return c * m.f0 + fast + l * m.omega;
                                 }},
                      model);
}

CouplingRhs::CouplingRhs(CouplingModel model) : model_(std::move(model)) {
    const auto* full = std::get_if<FullHarmonics>(&model_);
    if (!full) return;
    if (full->omega <= 0.0) throw ConfigError("full-harmonics model needs omega > 0");
    if (!full->l_max) return;
    if (*full->l_max < 0) throw ConfigError("l_max must be nonnegative");
    const double slow_limit = 0.5 * std::min(full->omega, full->omega_b);
    const double z = full->f0 / full->omega;
    for (int p = -full->p_max(); p <= full->p_max(); ++p) {
        if (p == 0) continue;
        const double xp = full->x_p[static_cast<std::size_t>(std::abs(p) - 1)];
        for (int l = -*full->l_max; l <= *full->l_max; ++l) {
            const cplx base = 0.5 * full->f0 * xp * minus_i_pow(l) * bessel_j(l, p * z);
            for (int sign : {+1, -1}) {
                const double freq = (l + sign) * full->omega - p * full->omega_b;
                if (full->slow_only && std::abs(freq) >= slow_limit) continue;
                terms_.push_back({p, static_cast<double>(sign) * base, freq});
            }
        }
    }
}

void CouplingRhs::operator()(double t, const std::vector<cplx>& d, std::vector<cplx>& out) const {
    const int n = static_cast<int>(d.size());
    out.assign(d.size(), cplx{});
    auto at = [&](int i) { return (i < 0 || i >= n) ? cplx{} : d[static_cast<std::size_t>(i)]; };

    if (const auto* m = std::get_if<NearestNeighbor>(&model_)) {
        const cplx e = std::polar(1.0, m->delta * t);
        const cplx up = m->omega1 * e;
        const cplx down = m->omega1 * std::conj(e);
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = up * at(i + 1) - down * at(i - 1);
        return;
    }
    if (const auto* m = std::get_if<NextNearest>(&model_)) {
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = m->omega2 * (at(i + 2) - at(i - 2));
        return;
    }

    const auto& m = std::get<FullHarmonics>(model_);
    if (!m.l_max) {
        const double arg = m.omega_b * t + m.f0 / m.omega * std::cos(m.omega * t);
        const cplx w = std::polar(1.0, -arg);
        const cplx pre(0.0, m.f0 * std::sin(m.omega * t));
        std::vector<cplx> fwd(static_cast<std::size_t>(m.p_max()));
        cplx wp = 1.0;
        for (int p = 1; p <= m.p_max(); ++p) {
            wp *= w;
            fwd[static_cast<std::size_t>(p - 1)] = pre * m.x_p[static_cast<std::size_t>(p - 1)] * wp;
        }
        for (int i = 0; i < n; ++i) {
            cplx s{};
            for (int p = 1; p <= m.p_max(); ++p) {
                const cplx c = fwd[static_cast<std::size_t>(p - 1)];
                // X_{-p} = X_p and pre is imaginary, so the -p factor is -conj(c).
                s += c * at(i + p) - std::conj(c) * at(i - p);
            }
            out[static_cast<std::size_t>(i)] = s;
        }
        return;
    }
    for (const auto& term : terms_) {
        const cplx c = term.coefficient * std::polar(1.0, term.frequency * t);
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] += c * at(i + term.p);
    }
}

}  // namespace wstark
