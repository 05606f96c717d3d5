#include "logkdv/waves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "logkdv/fourier.hpp"

namespace logkdv {

namespace {

Rhs wave_rhs(const ModelParams& mu) {
    return [mu](double, std::span<const double> y, std::span<double> f) {
        f[0] = y[1];
        f[1] = g_eval(mu, y[0]);
    };
}

double alpha_of(const ModelParams& mu, double center) {
    return 2.0 * std::numbers::pi / std::sqrt(-g_prime(mu, center));
}

}  // namespace

std::optional<double> center_for(const ModelParams& mu, double phi0) {
    for (const OrbitWell& w : orbit_wells(mu))
        if (w.contains(phi0)) return w.center;
    return std::nullopt;
}

double period_by_event(const ModelParams& mu, double phi0, const WaveOptions& opt) {
    const auto center = center_for(mu, phi0);
    if (!center)
        throw OutsideAdmissibleRange("phi(0) does not lie in a closed-orbit region");
    const double c = *center;
    const double alpha = alpha_of(mu, c);
    EventSpec ev{[](double, std::span<const double> y) { return y[1]; },
                 EventDirection::any, 1e-13};
    const double y0[2] = {phi0, 0.0};
    IvpOptions iopt;
    iopt.rel_tol = opt.rel_tol;
    iopt.abs_tol = opt.abs_tol;
    // the first phi' = 0 crossing is the opposite turning point (half period)
    auto opposite = [&](double, std::span<const double> y) {
        return (y[0] - c) * (phi0 - c) < 0.0;
    };
    try {
        const EventResult res = integrate_until_event(
            wave_rhs(mu), y0, 0.0, opt.period_max_factor * alpha, ev, opposite, iopt);
        return 2.0 * res.t;
    } catch (const EventNotFound&) {
        throw PeriodDetectionFailed("no half-period turning point found (near-separatrix orbit?)");
    }
}

double period_by_formula(const ModelParams& mu, double phi0, const WaveOptions& opt) {
    const auto center = center_for(mu, phi0);
    if (!center)
        throw OutsideAdmissibleRange("phi(0) does not lie in a closed-orbit region");
    const double c = *center;
    const double s = std::sqrt(-g_prime(mu, c));
    // r(t) parametrizes the orbit as phi = c + r cos(t)/s, xi = r sin(t);
    // the period is (2/s) * int_0^{2pi} -r/D dt, accumulated as a state q.
    Rhs rhs = [mu, c, s](double t, std::span<const double> y, std::span<double> f) {
        const double r = y[0];
        const double ct = std::cos(t), st = std::sin(t);
        const double phi = c + r * ct / s;
        const double xi = r * st;
        const double gg = g_eval(mu, phi);
        const double D = 2.0 * gg * ct / s - 2.0 * xi * st;
        if (std::abs(D) < defaults::d_floor)
            throw DenominatorBlowup("parametrization denominator vanished");
        f[0] = 2.0 * r * (gg * st / s + xi * ct) / D;
        f[1] = -r / D;
    };
    const double y0[2] = {s * (phi0 - c), 0.0};
    IvpOptions iopt;
    iopt.rel_tol = opt.rel_tol;
    iopt.abs_tol = opt.abs_tol;
    const Trajectory traj = integrate(rhs, y0, 0.0, 2.0 * std::numbers::pi, iopt);
    return 2.0 * traj.final_state()[1] / s;
}

PeriodComputation compute_period(const ModelParams& mu, double phi0, const WaveOptions& opt) {
    PeriodComputation out;
    const auto center = center_for(mu, phi0);
    if (!center)
        throw OutsideAdmissibleRange("phi(0) does not lie in a closed-orbit region");
    out.alpha = alpha_of(mu, *center);
    out.period_event = period_by_event(mu, phi0, opt);
    out.period_formula = period_by_formula(mu, phi0, opt);
    return out;
}

namespace {

void measure_diagnostics(WaveProfile& w) {
    const int n = w.n();
    double sym = 0.0;
    for (int j = 1; j < n; ++j)
        sym = std::max(sym, std::abs(w.phi[j] - w.phi[n - j]));
    w.symmetry_residual = sym;

    const double e0 = phase_energy(w.mu, w.phi[0], w.dphi[0]);
    double drift = 0.0;
    for (int j = 0; j < n; ++j)
        drift = std::max(drift, std::abs(phase_energy(w.mu, w.phi[j], w.dphi[j]) - e0));
    w.energy_drift = drift / std::max(1.0, std::abs(e0));

    const std::vector<double> dd = spectral_derivative(w.phi, 2, w.period);
    double resid = 0.0, scale = 1.0;
    for (int j = 0; j < n; ++j) {
        resid = std::max(resid, std::abs(-dd[j] + g_eval(w.mu, w.phi[j])));
        scale = std::max(scale, std::abs(dd[j]));
    }
    w.ode_residual = resid / scale;

    double min_abs = std::abs(w.phi[0]);
    bool crosses = false;
    for (int j = 0; j < n; ++j) {
        min_abs = std::min(min_abs, std::abs(w.phi[j]));
        if (w.phi[j] == 0.0 || (w.phi[j] > 0) != (w.center > 0)) crosses = true;
    }
    w.min_abs_phi = min_abs;
    w.sign_definite = !crosses && min_abs > 0.0;
}

}  // namespace

WaveProfile construct_wave(const ModelParams& mu, double phi0, int n_samples,
                           const WaveOptions& opt) {
    if (n_samples <= 0 || n_samples % 2 != 0)
        throw OddGridError("construct_wave: sample count must be positive and even");
    const auto center = center_for(mu, phi0);
    if (!center)
        throw OutsideAdmissibleRange("phi(0) does not lie in a closed-orbit region");

    WaveProfile w;
    w.mu = mu;
    w.phi0 = phi0;
    w.center = *center;
    w.sign = w.center > 0 ? Lobe::positive : Lobe::negative;
    w.period = period_by_event(mu, phi0, opt);
    w.phi.resize(n_samples);
    w.dphi.resize(n_samples);

    // march segment by segment so every sample is an integration endpoint
    IvpOptions iopt;
    iopt.rel_tol = opt.rel_tol;
    iopt.abs_tol = opt.abs_tol;
    const double dx = w.period / n_samples;
    std::vector<double> y = {phi0, 0.0};
    w.phi[0] = phi0;
    w.dphi[0] = 0.0;
    const Rhs rhs = wave_rhs(mu);
    double h_hint = 0.0;
    for (int j = 1; j < n_samples; ++j) {
        iopt.initial_step = std::min(h_hint > 0 ? h_hint : dx, dx);
        DormandPrince5 stepper(rhs, y, (j - 1) * dx, j * dx, iopt);
        while (stepper.step()) {
        }
        h_hint = std::abs(stepper.suggested_step());
        y.assign(stepper.y().begin(), stepper.y().end());
        w.phi[j] = y[0];
        w.dphi[j] = y[1];
    }

    measure_diagnostics(w);
    if (opt.require_sign_definite && !w.sign_definite)
        throw SignChangeError("orbit crosses phi = 0 but a sign-definite wave was requested");
    return w;
}

WaveProfile scaling_family(const WaveProfile& phi_zero_wave, double omega, Lobe branch) {
    if (phi_zero_wave.mu.omega != 0.0 || phi_zero_wave.mu.a_const != 0.0)
        throw NumericalError("scaling_family: base wave must be built at (omega, A) = (0, 0)");
    const double factor =
        (branch == Lobe::positive ? 1.0 : -1.0) * std::exp(0.5 * omega);
    WaveProfile w = phi_zero_wave;
    w.mu = {omega, 0.0};
    w.phi0 *= factor;
    w.center *= factor;
    w.sign = branch;
    for (auto& v : w.phi) v *= factor;
    for (auto& v : w.dphi) v *= factor;
    measure_diagnostics(w);
    return w;
}

WaveProfile fixed_period_wave(const ModelParams& mu, double target_period,
                              std::pair<double, double> bracket, const WaveOptions& opt) {
    auto period_of = [&](double p0) { return period_by_event(mu, p0, opt); };
    auto residual = [&](double p0) { return period_of(p0) - target_period; };

    double lo = std::min(bracket.first, bracket.second);
    double hi = std::max(bracket.first, bracket.second);
    double flo = 0, fhi = 0;
    bool have = false;
    if (lo < hi) {
        try {
            flo = residual(lo);
            fhi = residual(hi);
            have = flo * fhi <= 0.0;
        } catch (const NumericalError&) {
            have = false;
        }
    }
    if (!have) {
        // scan the admissible range of the well containing the hint
        const auto center = center_for(mu, 0.5 * (lo + hi));
        const double c = center ? *center : find_zeros(mu).center;
        const auto [a, b] = admissible_initial_range(mu, c);
        const int scan = 32;
        double prev_p = 0, prev_f = 0;
        bool prev_ok = false;
        for (int i = 1; i <= scan && !have; ++i) {
            const double p = a + (b - a) * (static_cast<double>(i) / (scan + 1));
            double fp;
            try {
                fp = residual(p);
            } catch (const NumericalError&) {
                prev_ok = false;
                continue;
            }
            if (prev_ok && prev_f * fp <= 0.0) {
                lo = prev_p;
                hi = p;
                flo = prev_f;
                fhi = fp;
                have = true;
            }
            prev_p = p;
            prev_f = fp;
            prev_ok = true;
        }
        if (!have)
            throw NoBracketError("fixed_period_wave: no phi(0) bracket straddles the target period");
    }

    const double p0 = find_root(residual, lo, hi, 1e-13 * std::max(1.0, std::abs(hi)));
    WaveProfile w = construct_wave(mu, p0, opt.n_samples, opt);
    if (std::abs(w.period - target_period) >
        defaults::period_solve_tol * std::max(1.0, target_period))
        throw ConvergenceFailure("fixed_period_wave: period solve did not reach tolerance");
    return w;
}

std::vector<OrbitSample> phase_portrait_data(const ModelParams& mu, std::span<const double> seeds,
                                             int points_per_orbit, const WaveOptions& opt) {
    std::vector<OrbitSample> out;
    out.reserve(seeds.size());
    const ZeroSet zs = find_zeros(mu);
    IvpOptions iopt;
    iopt.rel_tol = opt.rel_tol;
    iopt.abs_tol = opt.abs_tol;
    for (double seed : seeds) {
        OrbitSample orb;
        orb.seed = seed;
        bool at_center = false;
        for (std::size_t i = 0; i < zs.zeros.size(); ++i)
            if (zs.is_center[i] && std::abs(seed - zs.zeros[i]) < 1e-12 * std::max(1.0, std::abs(seed)))
                at_center = true;
        if (at_center) {
            orb.periodic = true;
            orb.sign_definite = seed != 0.0;
            orb.phi.assign(1, seed);
            orb.xi.assign(1, 0.0);
            out.push_back(std::move(orb));
            continue;
        }
        const auto center = center_for(mu, seed);
        double span;
        const double y0[2] = {seed, 0.0};
        if (center) {
            orb.periodic = true;
            span = period_by_event(mu, seed, opt);
        } else {
            orb.periodic = false;
            span = 4.0 * alpha_of(mu, zs.center);
            // escape orbits accelerate super-linearly; stop at a plot window
            const double window = 4.0 * std::max({1.0, std::abs(seed), std::abs(zs.center)});
            EventSpec leave{[window](double, std::span<const double> y) {
                                return std::abs(y[0]) - window;
                            },
                            EventDirection::rising, 1e-6};
            try {
                span = std::min(
                    span, integrate_until_event(wave_rhs(mu), y0, 0.0, span, leave, iopt).t);
            } catch (const EventNotFound&) {
            }
        }
        const Trajectory traj = integrate(wave_rhs(mu), y0, 0.0, span, iopt);
        orb.phi.resize(points_per_orbit);
        orb.xi.resize(points_per_orbit);
        double state[2];
        bool sign_def = true;
        for (int j = 0; j < points_per_orbit; ++j) {
            traj.eval(span * j / points_per_orbit, state);
            orb.phi[j] = state[0];
            orb.xi[j] = state[1];
            if (state[0] == 0.0 || (state[0] > 0) != (seed > 0)) sign_def = false;
        }
        traj.eval(span, state);
        orb.closure_gap =
            orb.periodic ? std::hypot(state[0] - seed, state[1]) : 0.0;
        orb.sign_definite = sign_def;
        out.push_back(std::move(orb));
    }
    return out;
}

}  // namespace logkdv
