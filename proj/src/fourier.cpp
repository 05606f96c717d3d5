#include "logkdv/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace logkdv {

namespace {
// FFTW plan creation is not thread-safe; execution of distinct plans is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct RealFft::Impl {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    int n = 0;

    ~Impl() {
        std::lock_guard lock(plan_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
        if (real_buf) fftw_free(real_buf);
        if (cplx_buf) fftw_free(cplx_buf);
    }
};

RealFft::RealFft(int n) : impl_(std::make_unique<Impl>()), n_(n) {
    if (n <= 0) throw NumericalError("RealFft: size must be positive");
    impl_->n = n;
    impl_->real_buf = fftw_alloc_real(n);
    impl_->cplx_buf = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(plan_mutex());
    impl_->fwd = fftw_plan_dft_r2c_1d(n, impl_->real_buf, impl_->cplx_buf, FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_1d(n, impl_->cplx_buf, impl_->real_buf, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->inv) throw NumericalError("RealFft: plan creation failed");
}

RealFft::~RealFft() = default;

void RealFft::forward(std::span<const double> x, std::span<std::complex<double>> out) const {
    for (int i = 0; i < n_; ++i) impl_->real_buf[i] = x[i];
    fftw_execute(impl_->fwd);
    for (int k = 0; k <= n_ / 2; ++k)
        out[k] = {impl_->cplx_buf[k][0], impl_->cplx_buf[k][1]};
}

void RealFft::inverse(std::span<const std::complex<double>> spec, std::span<double> out) const {
    for (int k = 0; k <= n_ / 2; ++k) {
        impl_->cplx_buf[k][0] = spec[k].real();
        impl_->cplx_buf[k][1] = spec[k].imag();
    }
    fftw_execute(impl_->inv);
    const double inv_n = 1.0 / n_;
    for (int i = 0; i < n_; ++i) out[i] = impl_->real_buf[i] * inv_n;
}

std::vector<double> spectral_derivative(std::span<const double> samples, int order,
                                        double length) {
    const int n = static_cast<int>(samples.size());
    if (n % 2 != 0) throw OddGridError("spectral_derivative: sample count must be even");
    if (order < 1 || order > 3)
        throw NumericalError("spectral_derivative: order must be 1, 2 or 3");
    RealFft fft(n);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    fft.forward(samples, spec);
    for (int k = 0; k <= n / 2; ++k) {
        const double kap = 2.0 * std::numbers::pi * k / length;
        std::complex<double> factor;
        switch (order) {
            case 1: factor = {0.0, kap}; break;
            case 2: factor = {-kap * kap, 0.0}; break;
            default: factor = {0.0, -kap * kap * kap}; break;
        }
        spec[k] *= factor;
    }
    // the Nyquist mode of a real signal carries no usable odd-derivative phase
    if (order % 2 == 1) spec[n / 2] = 0.0;
    std::vector<double> out(n);
    fft.inverse(spec, out);
    return out;
}

}  // namespace logkdv
