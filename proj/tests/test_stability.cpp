#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "logkdv/stability.hpp"

using namespace logkdv;

TEST_CASE("functionals: signs and quadrature convergence") {
    const WaveProfile w = construct_wave({0, 0}, 1.5, 256);
    const Functionals f = functionals(w);
    CHECK(f.f > 0.0);
    CHECK(f.m > 0.0);

    const WaveProfile w2 = construct_wave({0, 0}, 1.5, 512);
    const Functionals f2 = functionals(w2);
    CHECK(std::abs(f.f - f2.f) <= 1e-10);
    CHECK(std::abs(f.m - f2.m) <= 1e-10);
    CHECK(std::abs(f.e - f2.e) <= 1e-10);

    const WaveProfile neg = construct_wave({-1, -1}, -0.1, 256);
    CHECK(functionals(neg).m < 0.0);
}

TEST_CASE("d''(omega): positive, closed form matches the finite difference") {
    const WaveProfile base = construct_wave({0, 0}, 1.5, 256);
    std::vector<double> p2(base.n());
    for (int i = 0; i < base.n(); ++i) p2[i] = base.phi[i] * base.phi[i];
    const double int_phi2 = periodic_quadrature(p2, base.period);
    CHECK(d2_omega_a0(base, 0.0) == doctest::Approx(0.5 * int_phi2).epsilon(1e-14));

    const double h = 1e-4;
    for (const double omega : {-3.0, -1.0, 0.0, 1.5, 3.0}) {
        const double d2 = d2_omega_a0(base, omega);
        CHECK(d2 > 0.0);
        const double fp = functionals(scaling_family(base, omega + h)).f;
        const double fm = functionals(scaling_family(base, omega - h)).f;
        CHECK(std::abs((fp - fm) / (2 * h) - d2) < 1e-6 * d2);
    }
}

TEST_CASE("family derivatives: identities hold and tighten with the step") {
    const WaveProfile w = construct_wave({1, 1}, 3.0, 256);
    const Functionals fn = functionals(w);
    const FamilyDerivatives der = family_derivatives(w, 1e-3);
    const IdentityResiduals ids = check_identities(der, fn);
    CHECK(ids.max() <= defaults::id_tol);

    const FamilyDerivatives der2 = family_derivatives(w, 5e-4);
    const IdentityResiduals ids2 = check_identities(der2, fn);
    CHECK(ids2.max() < ids.max());

    // derivative values are second-order in h
    CHECK(der.m_a == doctest::Approx(der2.m_a).epsilon(1e-5));
    CHECK(der.f_omega == doctest::Approx(der2.f_omega).epsilon(1e-5));
}

TEST_CASE("family derivatives: identities hold on a negative-branch wave") {
    const WaveProfile w = construct_wave({-1, -2}, -1.0, 256);
    const IdentityResiduals ids = check_identities(family_derivatives(w), functionals(w));
    CHECK(ids.max() <= defaults::id_tol);
}

TEST_CASE("A = 0 consistency: stencil F_omega matches the closed form") {
    const WaveProfile base = construct_wave({0, 0}, 1.5, 256);
    const FamilyDerivatives der = family_derivatives(base, 1e-3);
    const double d2 = d2_omega_a0(base, 0.0);
    CHECK(std::abs(der.f_omega - d2) < 1e-4 * d2);
    // first identity reduces to F_omega = F at A0 = 0
    CHECK(der.f_omega == doctest::Approx(functionals(base).f).epsilon(1e-6));
}

TEST_CASE("K is the stated quadratic form") {
    FamilyDerivatives d;
    d.m_a = -0.2;
    d.m_omega = 0.8;
    d.f_a = 0.8;  // F_A = M_omega identity
    d.f_omega = -0.1;
    CHECK(k_function(d, 0, 1) == doctest::Approx(d.f_omega));
    CHECK(k_function(d, 1, 0) == doctest::Approx(d.m_a));
    CHECK(k_function(d, 1, 1) == doctest::Approx(d.m_a + d.m_omega + d.f_a + d.f_omega));
}

TEST_CASE("K-witness search follows the corollary case split") {
    FamilyDerivatives d;
    d.m_a = 0.3;
    d.f_omega = -1.0;
    d.m_omega = d.f_a = 0.1;
    auto w = find_k_witness(d);
    REQUIRE(w.has_value());
    CHECK(w->first == std::pair{1.0, 0.0});  // M_A > 0 branch

    d.m_a = -0.2;
    d.f_omega = 2.0;
    w = find_k_witness(d);
    REQUIRE(w.has_value());
    CHECK(w->first == std::pair{0.0, 1.0});  // F_omega > 0 branch

    // M_omega > 0, M_A < 0, F_omega <= 0: witness (M_omega, -M_A) with
    // K = -M_A det(D) exactly
    d.m_a = -0.2;
    d.m_omega = d.f_a = 0.8;
    d.f_omega = -0.1;
    w = find_k_witness(d);
    REQUIRE(w.has_value());
    CHECK(w->first == std::pair{0.8, 0.2});
    CHECK(w->second == doctest::Approx(-d.m_a * d.det_d()).epsilon(1e-14));
    CHECK(w->second > 0.0);
}

TEST_CASE("quadratic-form oracle: <L Phi, Phi> = -K and L beta = -1, L eta = -psi") {
    const WaveProfile w = construct_wave({1, 1}, 3.0, 256);
    const FamilyDerivatives der = family_derivatives(w);
    for (const auto& [a, b] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.0, 1.0}}) {
        const double iv = i_value(w, der, a, b);
        const double k = k_function(der, a, b);
        CHECK(std::abs(iv + k) <= defaults::quadform_tol * std::abs(k));
    }
    const SymmetricMatrix m = hill_matrix(w);
    std::vector<double> lb(w.n()), le(w.n());
    m.multiply(der.beta, lb);
    m.multiply(der.eta, le);
    double nb = 0, ne = 0, npsi = 0;
    for (int i = 0; i < w.n(); ++i) {
        nb += (lb[i] + 1.0) * (lb[i] + 1.0);
        ne += (le[i] + w.phi[i]) * (le[i] + w.phi[i]);
        npsi += w.phi[i] * w.phi[i];
    }
    CHECK(std::sqrt(nb / w.n()) <= 1e-3);
    CHECK(std::sqrt(ne / npsi) <= 1e-3);
}

TEST_CASE("D-matrix entries: operator pseudo-inverse route agrees with the FD family") {
    // beta and eta also solve L beta = -1, L eta = -psi; inverting the Hill
    // matrix on the non-kernel modes gives the same M_A, M_w, F_A, F_w with
    // no parameter differencing at all
    for (const auto& [omega, a, phi0] :
         {std::tuple{1.0, 1.0, 3.0}, std::tuple{-10.0, -2.0, -0.2}}) {
        const WaveProfile w = construct_wave({omega, a}, phi0, 256);
        const int n = w.n();
        const double h = w.dx();
        const EigenDecomposition eig = eigen_sym(hill_matrix(w));
        auto solve = [&](const std::vector<double>& rhs, std::vector<double>& x) {
            std::fill(x.begin(), x.end(), 0.0);
            for (int k = 0; k < n; ++k) {
                if (std::abs(eig.values[k]) < 1e-5) continue;  // the psi' kernel
                const auto vk = eig.vector(k);
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += vk[i] * rhs[i];
                const double c = dot / eig.values[k];
                for (int i = 0; i < n; ++i) x[i] += c * vk[i];
            }
        };
        std::vector<double> rhs_e(n), beta(n), eta(n);
        for (int i = 0; i < n; ++i) rhs_e[i] = -w.phi[i];
        solve(std::vector<double>(n, -1.0), beta);
        solve(rhs_e, eta);
        double ma = 0, mw = 0, fa = 0, fw = 0;
        for (int i = 0; i < n; ++i) {
            ma += beta[i];
            mw += eta[i];
            fa += w.phi[i] * beta[i];
            fw += w.phi[i] * eta[i];
        }
        const FamilyDerivatives der = family_derivatives(w);
        CHECK(ma * h == doctest::Approx(der.m_a).epsilon(1e-4));
        CHECK(mw * h == doctest::Approx(der.m_omega).epsilon(1e-4));
        CHECK(fa * h == doctest::Approx(der.f_a).epsilon(1e-4));
        CHECK(fw * h == doctest::Approx(der.f_omega).epsilon(1e-4));
    }
}

TEST_CASE("verdicts") {
    const StabilityReport r0 = stability_verdict(construct_wave({0, 0}, 1.5, 256));
    CHECK(r0.verdict == Verdict::stable_certified);
    REQUIRE(r0.d2_omega.has_value());
    CHECK(*r0.d2_omega > 0.0);
    CHECK(r0.n_negative == 1);
    CHECK(r0.kernel_dim == 1);
    CHECK(r0.theta < 0.0);

    const StabilityReport r1 = stability_verdict(construct_wave({1, 1}, 3.0, 256));
    CHECK(r1.verdict == Verdict::stable_certified);
    REQUIRE(r1.k_witness.has_value());
    CHECK(r1.k_witness->second > 0.0);
    REQUIRE(r1.i_val.has_value());
    CHECK(*r1.i_val < 0.0);

    // scaled family member goes through the A = 0 route as well
    const StabilityReport r2 =
        stability_verdict(scaling_family(construct_wave({0, 0}, 1.5, 256), 2.0));
    CHECK(r2.verdict == Verdict::stable_certified);

    const StabilityReport r3 = stability_verdict(construct_wave({-10, -2}, -0.2, 256));
    CHECK(r3.verdict == Verdict::stable_certified);
    REQUIRE(r3.m_a.has_value());
}
