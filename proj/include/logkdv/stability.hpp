#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "logkdv/spectral.hpp"
#include "logkdv/waves.hpp"

namespace logkdv {

namespace defaults {
inline constexpr double fd_step = 1e-3;
inline constexpr double id_tol = 1e-4;
inline constexpr double quadform_tol = 1e-3;
inline constexpr double det_floor_rel = 1e-6;
}  // namespace defaults

// Conserved functionals of the profile over one period:
// F = 1/2 int psi^2, M = int psi, E = 1/2 int (psi'^2 + psi^2 - psi^2 log psi^2).
struct Functionals {
    double f = 0.0;
    double m = 0.0;
    double e = 0.0;
};

Functionals functionals(const WaveProfile& wave);

// d''(omega) = 1/2 e^omega int phi0^2 dx for the A = 0 scaling family.
double d2_omega_a0(const WaveProfile& phi_zero_wave, double omega);

// Central-difference derivatives of M and F along the fixed-period family,
// plus the profile derivatives eta = d psi/d omega and beta = d psi/d A on
// the base grid. All stencil waves share the base period.
struct FamilyDerivatives {
    ModelParams mu0;
    double period = 0.0;
    double h_step = 0.0;
    double m_omega = 0.0, m_a = 0.0, f_omega = 0.0, f_a = 0.0;
    std::vector<double> eta, beta;

    double det_d() const { return f_a * m_omega - m_a * f_omega; }
};

FamilyDerivatives family_derivatives(const WaveProfile& base, double h = defaults::fd_step,
                                     const WaveOptions& opt = {});

// Residuals of the exact differential identities, each normalized by the
// largest magnitude involved:
//   2 F_w = 2F - A0 M_w,   2 F_A = M - A0 M_A,   F_A = M_w.
struct IdentityResiduals {
    double fw_identity = 0.0;
    double fa_identity = 0.0;
    double fa_equals_mw = 0.0;
    double max() const;
};

IdentityResiduals check_identities(const FamilyDerivatives& d, const Functionals& funcs);

// K(x,y) = x^2 M_A + xy (M_w + F_A) + y^2 F_w (Proposition-level quadratic form).
double k_function(const FamilyDerivatives& d, double a, double b);

// Discrete quadratic form <L_h Phi, Phi> with Phi = a beta + b eta; equals
// -K(a,b) up to discretization error.
double i_value(const WaveProfile& wave, const FamilyDerivatives& d, double a, double b,
               HillScheme scheme = HillScheme::fd4);

enum class Verdict { stable_certified, inconclusive };

struct StabilityReport {
    ModelParams mu0;
    double period = 0.0;
    double theta = 0.0;
    int n_negative = 0;
    int kernel_dim = 0;
    std::optional<double> d2_omega;  // A = 0 branch
    std::optional<double> m_omega, m_a, f_omega, f_a, det_d;
    std::optional<std::pair<std::pair<double, double>, double>> k_witness;  // ((a,b), K)
    std::optional<double> i_val;
    Verdict verdict = Verdict::inconclusive;
};

// K-witness search following the corollary case split: (1,0) if M_A > 0,
// (0,1) if F_w > 0, (M_w, -M_A) when M_w > 0 and M_A < 0 (then
// K = -M_A det D), then (+-1, 1) and a coarse grid.
std::optional<std::pair<std::pair<double, double>, double>> find_k_witness(
    const FamilyDerivatives& d);

StabilityReport stability_verdict(const WaveProfile& wave, double h = defaults::fd_step,
                                  const WaveOptions& opt = {});

}  // namespace logkdv
