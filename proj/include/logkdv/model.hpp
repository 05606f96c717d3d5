#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "logkdv/errors.hpp"

namespace logkdv {

// Parameter point mu = (omega, A) of the traveling-wave equation
//   -phi'' + omega*phi - phi*log(phi^2) + A = 0.
struct ModelParams {
    double omega = 0.0;
    double a_const = 0.0;
};

enum class Region { P1, P2, P3 };

namespace defaults {
inline constexpr double zero_tol = 1e-10;
inline constexpr double p2_band = 1e-9;
inline constexpr double match_tol = 1e-8;
inline constexpr double energy_tol = 1e-8;
}  // namespace defaults

// g(mu, phi) = omega*phi - phi*log(phi^2) + A, with g(mu,0) = A.
double g_eval(const ModelParams& mu, double phi);

// d/dphi g = omega - 2 - log(phi^2); diverges at phi = 0.
double g_prime(const ModelParams& mu, double phi);

// Antiderivative G with G(mu,0) = 0:
//   G = (omega+1)/2 phi^2 - 1/2 phi^2 log(phi^2) + A*phi.
double big_g_eval(const ModelParams& mu, double phi);

// Phase-plane invariant -xi^2/2 + G(mu,phi); constant along orbits.
double phase_energy(const ModelParams& mu, double phi, double xi);

// P1: |A| < 2e^{omega/2-1} (three zeros), P3: |A| > ... (one zero),
// P2: within p2_band of the threshold (rejected by find_zeros).
Region region_of(const ModelParams& mu, double band = defaults::p2_band);

// All real zeros of g(mu,.), sorted ascending. `center` is the largest zero
// at which G has a local maximum (g' < 0); the other local maximum (P1 only)
// sits at zeros.front().
struct ZeroSet {
    ModelParams mu;
    std::vector<double> zeros;
    std::vector<bool> is_center;  // per zero: local maximum of G
    double center = 0.0;
    double gprime_at_center = 0.0;
};

ZeroSet find_zeros(const ModelParams& mu, double zero_tol = defaults::zero_tol);

// Closed-orbit region around one center: every phi(0) in (left, right) other
// than the center itself starts a periodic orbit. The boundary level is the
// saddle energy (P1 / A=0) or the level of the orbit touching phi = 0 (P3);
// on the saddle side the edge is the saddle itself.
struct OrbitWell {
    double center = 0.0;
    double left = 0.0;
    double right = 0.0;
    double boundary_level = 0.0;

    bool contains(double phi0) const {
        return phi0 > left && phi0 < right && phi0 != center;
    }
};

// One well per center, in ascending center order.
std::vector<OrbitWell> orbit_wells(const ModelParams& mu);

// Open interval of initial data phi(0) > center whose orbits close around
// (center, 0). The outer endpoint solves G(mu, phi) = B on the far side,
// where B is the saddle level (P1 / A=0) or the level through phi = 0 (P3).
std::pair<double, double> admissible_initial_range(const ModelParams& mu, double center);

// Degree-13 odd regularization of f(u) = u log|u| on |u| <= epsilon:
//   p_eps(u) = linear_coef * u + sum_i odd_coefs[i-1] * u^{2i+1} / eps^{2i}.
// All seven derivative-matching conditions d^k p(eps) = d^k f(eps), k = 0..6,
// hold; this forces linear_coef = log(eps) - 49/40. With the coefficient
// frozen at log(eps) - 1/2 the system is overdetermined and inconsistent;
// the leftover k=0 residual of that variant is reported in
// fixed_form_residual (it equals (3712/15015) * eps).
struct RegularizedFlux {
    double epsilon = 1.0;
    double linear_coef = 0.0;
    std::array<double, 6> odd_coefs{};
    double match_residual = 0.0;      // max_k residual of the solved system
    double fixed_form_residual = 0.0; // k=0 residual of the fixed-coefficient variant

    double value(double u) const;        // f_eps(u)
    double deriv(double u) const;        // f_eps'(u)
    // Pointwise energy density P with P'(u) = -2 f_eps(u) and
    // P(u) = (u^2 - u^2 log u^2)/2 on |u| >= eps.
    double potential(double u) const;
};

RegularizedFlux build_regularized_flux(double epsilon);

inline double flux_eval(const RegularizedFlux& flux, double u) { return flux.value(u); }
inline double flux_deriv(const RegularizedFlux& flux, double u) { return flux.deriv(u); }

// k-th derivative of f(u) = u log|u| at u != 0 (k = 0..6).
double f_log_derivative(int k, double u);

}  // namespace logkdv
