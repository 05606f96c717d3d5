#pragma once

#include <string>
#include <vector>

#include "logkdv/numerics.hpp"
#include "logkdv/waves.hpp"

namespace logkdv {

namespace defaults {
inline constexpr double theta_band = 1e-3;
inline constexpr double kernel_tol = 1e-4;
}  // namespace defaults

enum class ZeroEigenvaluePosition { lambda1_zero, lambda2_zero, degenerate };

// Floquet index theta = ybar'(L)/phi''(0) from the auxiliary IVP
//   -y'' + g'(mu, phi(x)) y = 0,  y(0) = -1/phi''(0),  y'(0) = 0.
// theta < 0 places the zero eigenvalue at lambda_1, theta > 0 at lambda_2.
struct ThetaIndex {
    double theta = 0.0;
    double ybar_end_deriv = 0.0;
    double phi_ddot0 = 0.0;
    ZeroEigenvaluePosition classification = ZeroEigenvaluePosition::degenerate;
};

ThetaIndex compute_theta(const WaveProfile& wave, double rel_tol = 1e-12, double abs_tol = 1e-14);

// Discretization of the Hill operator -d^2/dx^2 + Q, Q = g'(mu, psi).
// fd2/fd4 are periodic central differences (banded plus corners), spectral is
// the dense Fourier differentiation matrix; all symmetric.
enum class HillScheme { fd2, fd4, spectral };

SymmetricMatrix hill_matrix(const WaveProfile& wave, HillScheme scheme = HillScheme::fd4);

struct HillSpectrum {
    int grid_size = 0;
    HillScheme scheme = HillScheme::fd4;
    std::vector<double> eigenvalues;  // ascending
    int n_negative = 0;               // eigenvalues below -kernel_band
    int kernel_dim = 0;               // eigenvalues within [-kernel_band, kernel_band]
    double kernel_residual = 0.0;     // ||L_h phi'|| / ||phi'||
    double kernel_band = 0.0;
};

HillSpectrum hill_spectrum(const WaveProfile& wave, HillScheme scheme = HillScheme::fd4);

struct ConsistencyReport {
    bool consistent = false;
    bool degenerate = false;
    double theta = 0.0;
    int n_negative = 0;
    int kernel_dim = 0;
    std::string detail;
};

// Theorem-level consistency between the theta classification and the
// discretized inertial index. Throws InconsistentClassification on mismatch
// (a sign of a too-coarse grid); a degenerate theta only reports.
ConsistencyReport cross_validate(const ThetaIndex& theta_idx, const HillSpectrum& spectrum);

}  // namespace logkdv
