#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace wstark {

/// In-place complex DFT of fixed length backed by FFTW (estimate plans, so
/// results are reproducible run to run). Planning is serialized internally;
/// execution is thread safe for distinct objects.
class FourierTransform {
public:
    explicit FourierTransform(int n);
    ~FourierTransform();
    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;

    int size() const noexcept { return n_; }
    std::complex<double>* data() noexcept;

    /// a_j <- sum_m a_m e^{+2 pi i j m / n}
    void plus();
    /// a_j <- sum_m a_m e^{-2 pi i j m / n}
    void minus();

private:
    struct Impl;
    int n_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace wstark
