#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "logkdv/model.hpp"
#include "logkdv/waves.hpp"

namespace logkdv {

namespace defaults {
inline constexpr double cons_tol = 1e-8;
inline constexpr double cfl_safety = 0.5;
inline constexpr double blowup_cap_factor = 1e3;
inline constexpr double k_stab = 50.0;
}  // namespace defaults

struct TrackedPoint {
    double t = 0.0;
    double e = 0.0, f = 0.0, m = 0.0;
    double rho = 0.0;
};

// Periodic grid state of u_t + u_xxx + d/dx[2 f_eps(u)] = 0, advanced by an
// integrating-factor RK4 in Fourier space: the dispersion is applied exactly
// per stage, the flux derivative explicitly, with 2/3 dealiasing.
class EvolutionState {
  public:
    EvolutionState(std::vector<double> u0, double length, RegularizedFlux flux);
    ~EvolutionState();
    EvolutionState(EvolutionState&&) noexcept;
    EvolutionState& operator=(EvolutionState&&) noexcept;

    int n() const { return static_cast<int>(u_.size()); }
    double length() const { return length_; }
    double t() const { return t_; }
    const std::vector<double>& u() const { return u_; }
    const RegularizedFlux& flux() const { return flux_; }
    double blowup_cap() const { return blowup_cap_; }

    // Largest stable step for the current state (RK4 imaginary-axis bound on
    // the dealiased advection spectrum, times the safety factor).
    double stable_step() const;

    void step(double dt);
    void run(double t_target, double dt);

    std::vector<TrackedPoint> tracked;

  private:
    struct Engine;
    std::vector<double> u_;
    double length_;
    double t_ = 0.0;
    RegularizedFlux flux_;
    double blowup_cap_;
    std::unique_ptr<Engine> engine_;
};

inline void step(EvolutionState& state, double dt) { state.step(dt); }

struct ConservedQuantities {
    double e = 0.0, f = 0.0, m = 0.0;
};

// Discrete E, F, M of the current grid function; E uses the flux-consistent
// potential on |u| < eps.
ConservedQuantities conserved_quantities(const EvolutionState& state);

struct OrbitalDistance {
    double rho = 0.0;
    double best_shift = 0.0;
};

// rho(u, psi) = min_y || u - psi(.+y) ||_{H1}, discrete shifts first, then a
// golden-section refinement of the continuous shift.
OrbitalDistance orbital_rho(std::span<const double> u, const WaveProfile& wave);

struct ExperimentResult {
    std::vector<TrackedPoint> series;
    double sup_rho = 0.0;
    double f_drift = 0.0;  // relative
    double m_drift = 0.0;
    double e_drift = 0.0;
    double min_abs_u = 0.0;  // uniqueness proxy: flags log-derivative collapse
    bool bounded = false;    // sup_rho <= k_stab * delta
};

struct ExperimentOptions {
    double dt = 0.0;           // 0 = from stable_step at t = 0
    int record_points = 200;
    double epsilon = 0.0;      // 0 = 1e-6 * max|u0|
    double k_stab = defaults::k_stab;
};

// Evolve u0 = psi (1 + delta cos(2 pi x / L)) to the horizon, tracking the
// orbital distance and conserved-quantity drifts.
ExperimentResult stability_experiment(const WaveProfile& wave, double delta, double horizon,
                                      const ExperimentOptions& opt = {});

}  // namespace logkdv
