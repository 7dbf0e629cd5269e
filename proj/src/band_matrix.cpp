#include "wstark/band_matrix.hpp"

#include "wstark/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

namespace wstark {

SymmetricBandMatrix::SymmetricBandMatrix(int n, int bandwidth)
    : n_(n), kd_(bandwidth), ab_(static_cast<std::size_t>(n) * (bandwidth + 1), 0.0) {
    if (n < 1 || bandwidth < 0)
        throw ConfigError("invalid band matrix shape");
}

double SymmetricBandMatrix::operator()(int i, int j) const noexcept {
    if (i > j) std::swap(i, j);
    if (j - i > kd_) return 0.0;
    return ab_[static_cast<std::size_t>(kd_ + i - j) + static_cast<std::size_t>(j) * (kd_ + 1)];
}

void SymmetricBandMatrix::set(int i, int j, double value) {
    if (i > j) std::swap(i, j);
    if (j - i > kd_ || i < 0 || j >= n_) throw ConfigError("band matrix index outside the band");
    ab_[static_cast<std::size_t>(kd_ + i - j) + static_cast<std::size_t>(j) * (kd_ + 1)] = value;
}

std::vector<double> SymmetricBandMatrix::dense() const {
    std::vector<double> out(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i)
        for (int j = std::max(0, i - kd_); j <= std::min(n_ - 1, i + kd_); ++j)
            out[static_cast<std::size_t>(i) * n_ + j] = (*this)(i, j);
    return out;
}

void SymmetricBandMatrix::multiply(const double* x, double* y) const {
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = std::max(0, i - kd_); j <= std::min(n_ - 1, i + kd_); ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
}

namespace {

// LU-factorized (A - shift I) in LAPACK general band storage.
class ShiftedBandLU {
public:
    ShiftedBandLU(const SymmetricBandMatrix& a, double shift) : n_(a.size()), kd_(a.bandwidth()) {
        ldab_ = 3 * kd_ + 1;
        ab_.assign(static_cast<std::size_t>(ldab_) * n_, 0.0);
        ipiv_.assign(static_cast<std::size_t>(n_), 0);
        for (int j = 0; j < n_; ++j)
            for (int i = std::max(0, j - kd_); i <= std::min(n_ - 1, j + kd_); ++i)
                ab_[static_cast<std::size_t>(2 * kd_ + i - j) + static_cast<std::size_t>(j) * ldab_] =
                    a(i, j) - (i == j ? shift : 0.0);
        info_ = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kd_, kd_, ab_.data(), ldab_, ipiv_.data());
    }

    bool singular() const noexcept { return info_ != 0; }

    void solve(std::vector<double>& rhs) const {
        const int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kd_, kd_, 1, ab_.data(), ldab_, ipiv_.data(),
                                        rhs.data(), n_);
        if (info != 0) throw Error("band solve failed (info " + std::to_string(info) + ")");
    }

private:
    int n_;
    int kd_;
    int ldab_;
    int info_ = 0;
    std::vector<double> ab_;
    std::vector<lapack_int> ipiv_;
};

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double matrix_scale(const SymmetricBandMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        double row = 0.0;
        for (int j = std::max(0, i - a.bandwidth()); j <= std::min(a.size() - 1, i + a.bandwidth()); ++j)
            row += std::abs(a(i, j));
        s = std::max(s, row);
    }
    return std::max(s, 1.0);
}

// Inverse iteration from a fixed pseudo-random start; members of a cluster of
// close eigenvalues are orthogonalized against each other.
EigenSlice inverse_iteration(const SymmetricBandMatrix& a, std::vector<double> values) {
    const int n = a.size();
    const double scale = matrix_scale(a);
    const double cluster_tol = 1e-7 * std::max(1.0, scale * 1e-3);
    EigenSlice out;
    out.values = values;
    out.vectors.reserve(values.size());

    std::uint64_t state = 0x9E3779B97F4A7C15ull;
    auto next_uniform = [&state]() {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
    };

    for (std::size_t k = 0; k < values.size(); ++k) {
        double shift = values[k];
        ShiftedBandLU lu(a, shift);
        for (int attempt = 1; lu.singular() && attempt < 8; ++attempt) {
            shift = values[k] + attempt * 1e-14 * scale;
            lu = ShiftedBandLU(a, shift);
        }
        if (lu.singular()) throw Error("inverse iteration: shifted matrix stays singular");

        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = next_uniform();
        for (int iter = 0; iter < 4; ++iter) {
            lu.solve(v);
            for (std::size_t j = 0; j < k; ++j) {
                if (std::abs(values[j] - values[k]) > cluster_tol) continue;
                const double c = dot(out.vectors[j], v);
                for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= c * out.vectors[j][static_cast<std::size_t>(i)];
            }
            const double nv = norm2(v);
            if (!(nv > 0)) throw Error("inverse iteration collapsed to zero");
            for (auto& x : v) x /= nv;
        }
        out.vectors.push_back(std::move(v));
    }
    return out;
}

std::vector<double> band_eigenvalues(const SymmetricBandMatrix& a, char range, double vl, double vu, int il,
                                     int iu) {
    const int n = a.size();
    const int kd = a.bandwidth();
    std::vector<double> ab = a.lapack_storage();
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
    lapack_int m = 0;
    const int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', range, 'U', n, kd, ab.data(), kd + 1, nullptr, 1, vl, vu,
                                    il, iu, 2 * LAPACKE_dlamch('S'), &m, w.data(), nullptr, 1, ifail.data());
    if (info != 0) throw Error("band eigenvalue solver failed (info " + std::to_string(info) + ")");
    w.resize(static_cast<std::size_t>(m));
    std::sort(w.begin(), w.end());
    return w;
}

}  // namespace

std::vector<double> eigenvalues_in_range(const SymmetricBandMatrix& a, double lower, double upper) {
    if (!(lower < upper)) throw ConfigError("empty eigenvalue range");
    return band_eigenvalues(a, 'V', lower, upper, 0, 0);
}

EigenSlice eigen_in_range(const SymmetricBandMatrix& a, double lower, double upper) {
    return inverse_iteration(a, eigenvalues_in_range(a, lower, upper));
}

EigenSlice eigen_lowest(const SymmetricBandMatrix& a, int count) {
    if (count < 1 || count > a.size()) throw ConfigError("invalid eigenpair count");
    return inverse_iteration(a, band_eigenvalues(a, 'I', 0.0, 0.0, 1, count));
}

}  // namespace wstark
