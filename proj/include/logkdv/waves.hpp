#pragma once

#include <optional>
#include <span>
#include <vector>

#include "logkdv/model.hpp"
#include "logkdv/numerics.hpp"

namespace logkdv {

namespace defaults {
inline constexpr int n_samples = 256;
inline constexpr double period_xcheck_tol = 1e-6;
inline constexpr double period_solve_tol = 1e-9;
inline constexpr double d_floor = 1e-8;
inline constexpr double sym_tol = 1e-8;
inline constexpr double closure_tol = 1e-6;
}  // namespace defaults

enum class Lobe { positive, negative };

// Even periodic traveling wave sampled on N uniform points of [0, L).
struct WaveProfile {
    ModelParams mu;
    double phi0 = 0.0;    // phi(0), a turning point of the orbit
    double period = 0.0;  // L
    double center = 0.0;  // rotation center (r2, or r0 for the negative lobe)
    Lobe sign = Lobe::positive;
    bool sign_definite = true;
    double min_abs_phi = 0.0;
    std::vector<double> phi, dphi;

    // measured construction diagnostics
    double symmetry_residual = 0.0;  // max |phi(x) - phi(L-x)|
    double energy_drift = 0.0;       // max phase-energy deviation, relative
    double ode_residual = 0.0;       // max |-phi'' + g| / max(1, max|phi''|)

    int n() const { return static_cast<int>(phi.size()); }
    double dx() const { return period / static_cast<double>(phi.size()); }
    double x(int j) const { return j * dx(); }
};

struct WaveOptions {
    int n_samples = defaults::n_samples;
    bool require_sign_definite = true;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double period_max_factor = 400.0;  // integrate at most this many alpha units
};

// Period cross-check record: event detection vs the parametrized quadrature.
struct PeriodComputation {
    double period_event = 0.0;
    double period_formula = 0.0;
    double alpha = 0.0;  // 2*pi/sqrt(-g'(center)), small-amplitude limit
};

// Center of the well containing the orbit through (phi0, 0), or nullopt.
std::optional<double> center_for(const ModelParams& mu, double phi0);

double period_by_event(const ModelParams& mu, double phi0, const WaveOptions& opt = {});
double period_by_formula(const ModelParams& mu, double phi0, const WaveOptions& opt = {});
PeriodComputation compute_period(const ModelParams& mu, double phi0, const WaveOptions& opt = {});

WaveProfile construct_wave(const ModelParams& mu, double phi0, int n_samples = defaults::n_samples,
                           const WaveOptions& opt = {});

// e^{omega/2}-rescaling of an A=0 base wave (Propositions 4.2 / 4.3); the
// period is preserved exactly.
WaveProfile scaling_family(const WaveProfile& phi_zero_wave, double omega,
                           Lobe branch = Lobe::positive);

// Solve period(mu, phi0) = target over phi0. The bracket is widened around
// the hint and falls back to a 32-point scan of the admissible range.
WaveProfile fixed_period_wave(const ModelParams& mu, double target_period,
                              std::pair<double, double> bracket, const WaveOptions& opt = {});

struct OrbitSample {
    double seed = 0.0;
    bool periodic = false;
    bool sign_definite = false;
    double closure_gap = 0.0;
    std::vector<double> phi, xi;
};

std::vector<OrbitSample> phase_portrait_data(const ModelParams& mu, std::span<const double> seeds,
                                             int points_per_orbit = 400,
                                             const WaveOptions& opt = {});

}  // namespace logkdv
