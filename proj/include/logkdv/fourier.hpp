#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "logkdv/errors.hpp"

namespace logkdv {

// Real-to-complex FFT pair of fixed size backed by FFTW. forward() produces
// the n/2+1 nonnegative-frequency coefficients of an unnormalized DFT;
// inverse() includes the 1/n normalization so inverse(forward(x)) == x.
class RealFft {
  public:
    explicit RealFft(int n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    int size() const { return n_; }
    int spectrum_size() const { return n_ / 2 + 1; }
    void forward(std::span<const double> x, std::span<std::complex<double>> out) const;
    void inverse(std::span<const std::complex<double>> spec, std::span<double> out) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int n_;
};

// Fourier differentiation of a uniformly sampled L-periodic function.
// order in {1,2,3}; even sample count required (OddGrid otherwise).
std::vector<double> spectral_derivative(std::span<const double> samples, int order,
                                        double length);

}  // namespace logkdv
