#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "logkdv/spectral.hpp"
#include "logkdv/stability.hpp"

using namespace logkdv;
using std::numbers::pi;

TEST_CASE("theta: equals the period derivative identity") {
    // theta = (dL/dphi0)/phi''(0): an oracle independent of the ybar IVP
    for (const auto& [omega, a, phi0] :
         {std::tuple{0.0, 0.0, 1.5}, std::tuple{1.0, 1.0, 3.0}, std::tuple{2.0, 4.0, 5.0}}) {
        const ModelParams mu{omega, a};
        const WaveProfile w = construct_wave(mu, phi0, 256);
        const ThetaIndex th = compute_theta(w);
        const double h = 1e-5 * std::max(1.0, std::abs(phi0));
        const double dl =
            (period_by_event(mu, phi0 + h) - period_by_event(mu, phi0 - h)) / (2 * h);
        CHECK(th.theta == doctest::Approx(dl / g_eval(mu, phi0)).epsilon(1e-5));
    }
}

TEST_CASE("theta: frozen values and classification") {
    const WaveProfile w = construct_wave({0, 0}, 1.5, 256);
    const ThetaIndex th = compute_theta(w);
    CHECK(th.theta == doctest::Approx(-1.7820363).epsilon(1e-6));
    CHECK(th.phi_ddot0 == doctest::Approx(g_eval({0, 0}, 1.5)).epsilon(1e-14));
    CHECK(th.classification == ZeroEigenvaluePosition::lambda1_zero);
    CHECK(th.theta == doctest::Approx(th.ybar_end_deriv / th.phi_ddot0).epsilon(1e-14));
}

TEST_CASE("theta: exact e^{-omega} scaling law on the A = 0 family") {
    // the potential is omega-independent, so ybar solves the same equation;
    // the normalization -1/phi''(0) scales by e^{-omega/2} and phi''(0) by
    // e^{omega/2}, giving theta(psi_omega) = e^{-omega} theta(phi_0). The
    // sign (hence the classification) is scale-invariant.
    const WaveProfile base = construct_wave({0, 0}, 1.5, 256);
    const ThetaIndex th0 = compute_theta(base);
    for (const double omega : {-2.0, 1.5}) {
        const WaveProfile w = scaling_family(base, omega);
        const ThetaIndex th = compute_theta(w);
        CHECK(th.theta == doctest::Approx(std::exp(-omega) * th0.theta).epsilon(1e-8));
        CHECK(th.classification == th0.classification);
    }
}

TEST_CASE("hill matrix: constant-potential closed form (fd4 symbol)") {
    const int n = 64;
    const double L = 5.0;
    WaveProfile w;
    w.mu = {1.0, 0.0};
    w.phi0 = 1.3;
    w.period = L;
    w.center = 1.3;
    w.phi.assign(n, 1.3);
    w.dphi.assign(n, 0.0);
    const double q = g_prime(w.mu, 1.3);
    const SymmetricMatrix m = hill_matrix(w, HillScheme::fd4);
    const EigenDecomposition de = eigen_sym(m);
    std::vector<double> expect(n);
    const double h = L / n;
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * pi * k / n;
        expect[k] = (2.5 - (8.0 / 3.0) * std::cos(th) + (1.0 / 6.0) * std::cos(2 * th)) / (h * h) + q;
    }
    std::sort(expect.begin(), expect.end());
    for (int k = 0; k < n; ++k) CHECK(de.values[k] == doctest::Approx(expect[k]).epsilon(1e-10));
}

TEST_CASE("hill matrix: even potential, omega-independent on the scaled family") {
    const WaveProfile base = construct_wave({0, 0}, 1.5, 128);
    const int n = base.n();
    std::vector<double> q0(n);
    for (int i = 0; i < n; ++i) q0[i] = g_prime(base.mu, base.phi[i]);
    for (int i = 1; i < n; ++i) CHECK(std::abs(q0[i] - q0[n - i]) < defaults::sym_tol);
    for (const double omega : {-2.0, 2.0}) {
        const WaveProfile w = scaling_family(base, omega);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(g_prime(w.mu, w.phi[i]) - q0[i]) < 1e-12);
    }
    // a sample near zero would make the log-potential singular
    WaveProfile bad = base;
    bad.phi[3] = 1e-13;
    CHECK_THROWS_AS(hill_matrix(bad), SignChangeError);
}

TEST_CASE("hill spectrum: exact ground state L psi = -2 psi - A") {
    // the profile equation makes psi itself an exact test vector
    for (const auto& [omega, a, phi0] :
         {std::tuple{0.0, 0.0, 1.5}, std::tuple{1.0, 1.0, 3.0}, std::tuple{-1.0, -1.0, -0.1}}) {
        const WaveProfile w = construct_wave({omega, a}, phi0, 256);
        const SymmetricMatrix m = hill_matrix(w);
        std::vector<double> lp(w.n());
        m.multiply(w.phi, lp);
        double resid = 0.0, scale = 0.0;
        for (int i = 0; i < w.n(); ++i) {
            resid += std::pow(lp[i] + 2.0 * w.phi[i] + a, 2);
            scale += std::pow(w.phi[i], 2);
        }
        CHECK(std::sqrt(resid / scale) < 1e-6);
        if (a == 0.0) {
            // for A = 0, psi is an exact eigenfunction with eigenvalue -2
            const HillSpectrum spec = hill_spectrum(w);
            CHECK(spec.eigenvalues[0] == doctest::Approx(-2.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("hill spectrum: inertial index (1,1), kernel residual converging") {
    for (const auto& [omega, a, phi0] :
         {std::tuple{0.0, 0.0, 1.5}, std::tuple{-10.0, -2.0, -0.2}}) {
        const WaveProfile w256 = construct_wave({omega, a}, phi0, 256);
        const WaveProfile w512 = construct_wave({omega, a}, phi0, 512);
        const HillSpectrum s256 = hill_spectrum(w256);
        const HillSpectrum s512 = hill_spectrum(w512);
        CHECK(s256.n_negative == 1);
        CHECK(s256.kernel_dim == 1);
        CHECK(s512.n_negative == 1);
        CHECK(s512.kernel_dim == 1);
        CHECK(s256.kernel_residual <= defaults::kernel_tol);
        CHECK(s512.kernel_residual < s256.kernel_residual);
        // eigenvalue convergence between the two grids
        for (int i : {0, 1, 2})
            CHECK(std::abs(s256.eigenvalues[i] - s512.eigenvalues[i]) <= 1e-4);
        // lambda_2 bounded away from zero
        CHECK(s256.eigenvalues[2] > 10.0 * s256.kernel_band);
    }
}

TEST_CASE("isoinertiality across the tables and the scaled family") {
    const WaveProfile base = construct_wave({0, 0}, 1.5, 256);
    for (const double omega : {-2.0, 0.0, 2.0}) {
        const HillSpectrum s = hill_spectrum(scaling_family(base, omega));
        CHECK(s.n_negative == 1);
        CHECK(s.kernel_dim == 1);
    }
    for (const auto& [omega, a, phi0] :
         {std::tuple{1.0, -2.0, -2.0}, std::tuple{5.0, 3.0, 15.0}}) {
        const HillSpectrum s = hill_spectrum(construct_wave({omega, a}, phi0, 256));
        CHECK(s.n_negative == 1);
        CHECK(s.kernel_dim == 1);
    }
}

TEST_CASE("cross validation: stable across refinement, guards degeneracy") {
    const ModelParams mu{1, 1};
    for (const int n : {128, 256, 512}) {
        const WaveProfile w = construct_wave(mu, 3.0, n);
        const ThetaIndex th = compute_theta(w);
        const ConsistencyReport rep = cross_validate(th, hill_spectrum(w));
        CHECK(rep.consistent);
    }
    // synthetic degenerate theta only reports
    ThetaIndex degenerate;
    degenerate.theta = 5e-4;
    degenerate.classification = ZeroEigenvaluePosition::degenerate;
    const WaveProfile w = construct_wave(mu, 3.0, 128);
    const ConsistencyReport rep = cross_validate(degenerate, hill_spectrum(w));
    CHECK(rep.degenerate);
    CHECK(!rep.consistent);

    // a wrong claimed sign must be flagged
    ThetaIndex wrong;
    wrong.theta = 0.5;
    wrong.classification = ZeroEigenvaluePosition::lambda2_zero;
    CHECK_THROWS_AS(cross_validate(wrong, hill_spectrum(w)), InconsistentClassification);
}

TEST_CASE("spectral scheme agrees with fd4 on the low eigenvalues") {
    const WaveProfile w = construct_wave({0, 0}, 1.5, 256);
    const HillSpectrum s4 = hill_spectrum(w, HillScheme::fd4);
    const HillSpectrum ss = hill_spectrum(w, HillScheme::spectral);
    for (int i : {0, 1, 2, 3})
        CHECK(std::abs(s4.eigenvalues[i] - ss.eigenvalues[i]) < 1e-6);
    const HillSpectrum s2 = hill_spectrum(w, HillScheme::fd2);
    CHECK(s2.n_negative == 1);
    CHECK(s2.kernel_dim == 1);
}

TEST_CASE("compute_theta: degenerate curvature guard") {
    WaveProfile w = construct_wave({0, 0}, 1.5, 128);
    w.phi0 = 1.0;  // g(mu, 1.0) = 0 at the center
    CHECK_THROWS_AS(compute_theta(w), DegenerateCurvature);
}
