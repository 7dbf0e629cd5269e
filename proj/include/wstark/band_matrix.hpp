#pragma once

#include <vector>

namespace wstark {

/// Real symmetric band matrix; stores the diagonal and `bandwidth` upper
/// diagonals.
class SymmetricBandMatrix {
public:
    SymmetricBandMatrix(int n, int bandwidth);

    int size() const noexcept { return n_; }
    int bandwidth() const noexcept { return kd_; }

    /// Element (i, j); zero outside the band.
    double operator()(int i, int j) const noexcept;
    /// Sets (i, j) and (j, i); |i - j| must not exceed the bandwidth.
    void set(int i, int j, double value);

    std::vector<double> dense() const;  ///< Row-major n x n copy.
    void multiply(const double* x, double* y) const;  ///< y = A x

    /// LAPACK upper band storage, column-major with leading dimension kd + 1.
    const std::vector<double>& lapack_storage() const noexcept { return ab_; }

private:
    int n_;
    int kd_;
    std::vector<double> ab_;
};

/// Eigenpairs sorted by eigenvalue; vectors[k] has unit Euclidean norm.
struct EigenSlice {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

/// Eigenvalues in (lower, upper] and their eigenvectors.
EigenSlice eigen_in_range(const SymmetricBandMatrix& a, double lower, double upper);

/// The `count` lowest eigenpairs.
EigenSlice eigen_lowest(const SymmetricBandMatrix& a, int count);

/// Eigenvalues only, in (lower, upper].
std::vector<double> eigenvalues_in_range(const SymmetricBandMatrix& a, double lower, double upper);

}  // namespace wstark
