#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "logkdv/evolution.hpp"
#include "logkdv/stability.hpp"

using namespace logkdv;
using std::numbers::pi;

TEST_CASE("zero and constant data are fixed points") {
    const RegularizedFlux flux = build_regularized_flux(1e-3);
    EvolutionState zero(std::vector<double>(64, 0.0), 5.0, flux);
    zero.run(0.5, 1e-3);
    for (const double v : zero.u()) CHECK(v == 0.0);

    EvolutionState constant(std::vector<double>(64, 1.7), 5.0, flux);
    constant.run(0.5, 1e-3);
    for (const double v : constant.u()) CHECK(v == doctest::Approx(1.7).epsilon(1e-13));
}

TEST_CASE("traveling wave transports itself (one period)") {
    const WaveProfile psi = scaling_family(construct_wave({0, 0}, 1.5, 256), 1.0);
    EvolutionState st(psi.phi, psi.period, build_regularized_flux(1e-6 * psi.phi0));
    const double dt = st.stable_step();
    const ConservedQuantities q0 = conserved_quantities(st);
    st.run(psi.period, dt);
    const ConservedQuantities q1 = conserved_quantities(st);
    const OrbitalDistance od = orbital_rho(st.u(), psi);
    CHECK(od.rho < 1e-6);
    // the profile moved by one spatial period = speed * period at omega = 1
    CHECK(std::abs(q1.f - q0.f) < 1e-10 * std::abs(q0.f));
    CHECK(std::abs(q1.m - q0.m) < 1e-10 * std::abs(q0.m));
}

TEST_CASE("orbital distance: exact members, linear response, shift invariance") {
    const WaveProfile psi = scaling_family(construct_wave({0, 0}, 1.5, 256), 1.0);
    const int n = psi.n();

    std::vector<double> shifted(n);
    for (int i = 0; i < n; ++i) shifted[i] = psi.phi[(i + 13) % n];
    const OrbitalDistance od = orbital_rho(shifted, psi);
    CHECK(od.rho <= 1e-10);
    CHECK(od.best_shift == doctest::Approx(13.0 * psi.period / n).epsilon(1e-9));

    const double delta = 1e-3;
    std::vector<double> pert(n);
    for (int i = 0; i < n; ++i)
        pert[i] = psi.phi[i] + delta * std::cos(2.0 * pi * i / n);
    const OrbitalDistance odp = orbital_rho(pert, psi);
    CHECK(odp.rho > 0.1 * delta);
    CHECK(odp.rho < 10.0 * delta);

    // rho(u, psi) = rho(shifted u, psi)
    std::vector<double> pert_shift(n);
    for (int i = 0; i < n; ++i) pert_shift[i] = pert[(i + 40) % n];
    CHECK(orbital_rho(pert_shift, psi).rho == doctest::Approx(odp.rho).epsilon(1e-10));
}

TEST_CASE("conserved quantities track F, M, E over many steps") {
    const WaveProfile psi = scaling_family(construct_wave({0, 0}, 1.5, 256), 1.0);
    EvolutionState st(psi.phi, psi.period, build_regularized_flux(1e-6 * psi.phi0));
    const double dt = st.stable_step();
    const ConservedQuantities q0 = conserved_quantities(st);
    st.run(1.0e4 * dt, dt);
    const ConservedQuantities q1 = conserved_quantities(st);
    const double e_scale = std::max(std::abs(q0.e), std::abs(q0.f));
    CHECK(std::abs(q1.f - q0.f) <= 1e-8 * std::abs(q0.f));
    CHECK(std::abs(q1.m - q0.m) <= 1e-8 * std::abs(q0.m));
    CHECK(std::abs(q1.e - q0.e) <= 1e-6 * e_scale);
}

TEST_CASE("d'(omega) = F along the scaling family (energy quadrature check)") {
    const WaveProfile base = construct_wave({0, 0}, 1.5, 256);
    const double h = 1e-4;
    for (const double omega : {0.0, 1.0}) {
        auto d_of = [&](double w) {
            const WaveProfile psi = scaling_family(base, w);
            const Functionals f = functionals(psi);
            return f.e + w * f.f;
        };
        const double dprime = (d_of(omega + h) - d_of(omega - h)) / (2 * h);
        const double f_here = functionals(scaling_family(base, omega)).f;
        CHECK(dprime == doctest::Approx(f_here).epsilon(1e-6));
    }
}

TEST_CASE("regularization insensitivity for sign-definite data") {
    const WaveProfile psi = scaling_family(construct_wave({0, 0}, 1.5, 128), 1.0);
    const double eps = 0.25 * psi.min_abs_phi;  // min |u| > 2 eps holds
    EvolutionState a(psi.phi, psi.period, build_regularized_flux(eps));
    EvolutionState b(psi.phi, psi.period, build_regularized_flux(0.5 * eps));
    const double dt = std::min(a.stable_step(), b.stable_step());
    a.run(1.0, dt);
    b.run(1.0, dt);
    for (int i = 0; i < psi.n(); ++i) CHECK(std::abs(a.u()[i] - b.u()[i]) <= 1e-10);
}

TEST_CASE("time-step convergence is at least third order") {
    // a perturbed wave so the nonlinear term genuinely evolves; a short
    // horizon and steps above the default keep the truncation error well
    // clear of the roundoff floor
    const WaveProfile psi = scaling_family(construct_wave({0, 0}, 1.5, 256), 1.0);
    const int n = psi.n();
    std::vector<double> u0(n);
    for (int i = 0; i < n; ++i)
        u0[i] = psi.phi[i] * (1.0 + 0.3 * std::cos(2.0 * pi * i / n));
    const RegularizedFlux flux = build_regularized_flux(1e-4);
    auto endpoint = [&](double dt) {
        EvolutionState st(u0, psi.period, flux);
        st.run(0.25, dt);
        return st.u();
    };
    const double base = EvolutionState(u0, psi.period, flux).stable_step();
    const auto u1 = endpoint(6 * base), u2 = endpoint(3 * base), u3 = endpoint(1.5 * base);
    double e12 = 0, e23 = 0;
    for (int i = 0; i < n; ++i) {
        e12 = std::max(e12, std::abs(u1[i] - u2[i]));
        e23 = std::max(e23, std::abs(u2[i] - u3[i]));
    }
    const double p = std::log2(e12 / e23);
    CHECK(p >= 3.0);
}

TEST_CASE("spatial resolution: N and 2N agree at horizon 1") {
    const WaveProfile c256 = scaling_family(construct_wave({0, 0}, 1.5, 256), 1.0);
    const WaveProfile c512 = scaling_family(construct_wave({0, 0}, 1.5, 512), 1.0);
    EvolutionState a(c256.phi, c256.period, build_regularized_flux(1e-6 * c256.phi0));
    EvolutionState b(c512.phi, c512.period, build_regularized_flux(1e-6 * c512.phi0));
    const double dt = b.stable_step();  // the finer grid's stable step for both
    a.run(1.0, dt);
    b.run(1.0, dt);
    for (int i = 0; i < 256; ++i) CHECK(std::abs(a.u()[i] - b.u()[2 * i]) <= 1e-8);
}

TEST_CASE("stability experiment: delta = 0 stays on the orbit") {
    const WaveProfile psi = construct_wave({0, 0}, 1.5, 128);
    ExperimentOptions opt;
    opt.record_points = 10;
    const ExperimentResult r = stability_experiment(psi, 0.0, 2.0, opt);
    CHECK(r.sup_rho < 1e-6);
    CHECK(r.bounded);
    CHECK(r.min_abs_u > 0.3);
}

TEST_CASE("guards: odd grid, blow-up cap") {
    CHECK_THROWS_AS(EvolutionState(std::vector<double>(63, 1.0), 5.0,
                                   build_regularized_flux(1e-3)),
                    OddGridError);
    const WaveProfile psi = scaling_family(construct_wave({0, 0}, 1.5, 128), 1.0);
    EvolutionState st(psi.phi, psi.period, build_regularized_flux(1e-6 * psi.phi0));
    CHECK_THROWS_AS(st.run(50.0, 0.05), BlowupDetected);  // far beyond the stable step
}
