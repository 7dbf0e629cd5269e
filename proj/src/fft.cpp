#include "wstark/fft.hpp"

#include "wstark/errors.hpp"

#include <fftw3.h>

#include <mutex>

namespace wstark {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct FourierTransform::Impl {
    fftw_complex* buffer = nullptr;
    fftw_plan plus = nullptr;
    fftw_plan minus = nullptr;
};

FourierTransform::FourierTransform(int n) : n_(n), impl_(std::make_unique<Impl>()) {
    if (n < 1) throw ConfigError("transform length must be positive");
    std::lock_guard lock(planner_mutex());
    impl_->buffer = fftw_alloc_complex(static_cast<std::size_t>(n));
    if (!impl_->buffer) throw Error("FFTW allocation failed");
    impl_->plus = fftw_plan_dft_1d(n, impl_->buffer, impl_->buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    impl_->minus = fftw_plan_dft_1d(n, impl_->buffer, impl_->buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    if (!impl_->plus || !impl_->minus) throw Error("FFTW planning failed");
}

FourierTransform::~FourierTransform() {
    std::lock_guard lock(planner_mutex());
    if (impl_->plus) fftw_destroy_plan(impl_->plus);
    if (impl_->minus) fftw_destroy_plan(impl_->minus);
    if (impl_->buffer) fftw_free(impl_->buffer);
}

std::complex<double>* FourierTransform::data() noexcept {
    return reinterpret_cast<std::complex<double>*>(impl_->buffer);
}

void FourierTransform::plus() { fftw_execute(impl_->plus); }
void FourierTransform::minus() { fftw_execute(impl_->minus); }

}  // namespace wstark
