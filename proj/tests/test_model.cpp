#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "logkdv/model.hpp"

using namespace logkdv;

TEST_CASE("g: reference zeros") {
    CHECK(g_eval({1, 1}, -1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g_eval({0, 0}, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(g_eval({1, 0}, std::exp(0.5))) < 1e-14);
    CHECK(g_eval({0, 0}, 0.0) == 0.0);   // continuous extension
    CHECK(g_eval({3, 7}, 0.0) == 7.0);
}

TEST_CASE("G: normalization and defining relation dG/dphi = g") {
    CHECK(big_g_eval({2, -1}, 0.0) == 0.0);
    CHECK(std::abs(big_g_eval({0, 0}, std::exp(0.5))) < 1e-14);
    for (const ModelParams mu : {ModelParams{1, 1}, ModelParams{-2, 0.3}, ModelParams{0, 0}}) {
        for (const double phi : {-2.0, -0.4, 0.7, 1.3, 3.1}) {
            const double h = 1e-6 * std::max(1.0, std::abs(phi));
            const double fd = (big_g_eval(mu, phi + h) - big_g_eval(mu, phi - h)) / (2 * h);
            CHECK(fd == doctest::Approx(g_eval(mu, phi)).epsilon(1e-7));
        }
    }
}

TEST_CASE("phase energy vanishes along the Gaussian soliton") {
    // phi = e^{(1+w)/2} e^{-x^2/2} solves the profile equation with A = 0 and
    // lies on the zero energy level
    for (const double omega : {-1.0, 0.0, 2.0}) {
        const ModelParams mu{omega, 0.0};
        CHECK(phase_energy(mu, 1.3, 0.0) == big_g_eval(mu, 1.3));
        for (const double x : {0.0, 0.5, 1.2, 2.5}) {
            const double phi = std::exp(0.5 * (1 + omega)) * std::exp(-0.5 * x * x);
            const double dphi = -x * phi;
            CHECK(std::abs(phase_energy(mu, phi, dphi)) < 1e-12 * std::exp(omega + 1));
        }
    }
}

TEST_CASE("g'(e^{omega/2}) = -2 exactly on the A = 0 family") {
    for (const double omega : {-2.0, -1.0, 0.0, 1.0, 3.0})
        CHECK(std::abs(g_prime({omega, 0.0}, std::exp(0.5 * omega)) + 2.0) < 1e-12);
}

TEST_CASE("find_zeros: region cases") {
    const ZeroSet z11 = find_zeros({1, 1});
    REQUIRE(z11.zeros.size() == 3);
    CHECK(z11.zeros[0] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(z11.zeros[1] == doctest::Approx(-0.2846681).epsilon(1e-5));
    CHECK(z11.zeros[2] == doctest::Approx(2.0934952).epsilon(1e-5));
    CHECK(z11.center == doctest::Approx(2.0934952).epsilon(1e-5));
    CHECK(z11.gprime_at_center < 0.0);
    for (const double z : z11.zeros) CHECK(std::abs(g_eval({1, 1}, z)) <= 1e-10);

    const ZeroSet z10 = find_zeros({1, 0});
    REQUIRE(z10.zeros.size() == 3);
    CHECK(z10.zeros[0] == doctest::Approx(-std::exp(0.5)).epsilon(1e-10));
    CHECK(z10.zeros[1] == 0.0);
    CHECK(z10.zeros[2] == doctest::Approx(std::exp(0.5)).epsilon(1e-10));

    const ZeroSet z010 = find_zeros({0, 10});
    REQUIRE(z010.zeros.size() == 1);
    CHECK(z010.zeros[0] > 0.0);
    CHECK(std::abs(g_eval({0, 10}, z010.zeros[0])) <= 1e-10);

    // P2 boundary rejected
    const double omega = 0.7;
    CHECK(region_of({omega, 2.0 * std::exp(0.5 * omega - 1.0)}) == Region::P2);
    CHECK_THROWS_AS(find_zeros({omega, 2.0 * std::exp(0.5 * omega - 1.0)}), RegionP2Error);

    // zero counts match the region on a parameter sample
    for (const double w : {-2.0, 0.0, 1.5})
        for (const double a : {-3.0, -0.1, 0.1, 3.0}) {
            const ModelParams mu{w, a};
            if (region_of(mu) == Region::P2) continue;
            const std::size_t expect = region_of(mu) == Region::P1 ? 3 : 1;
            CHECK(find_zeros(mu).zeros.size() == expect);
        }
}

TEST_CASE("admissible ranges match the phase-plane geometry") {
    const auto [lo0, hi0] = admissible_initial_range({0, 0}, 1.0);
    CHECK(lo0 == 1.0);
    CHECK(hi0 == doctest::Approx(std::exp(0.5)).epsilon(1e-10));

    const auto [lo1, hi1] = admissible_initial_range({1, 0}, std::exp(0.5));
    CHECK(hi1 == doctest::Approx(std::exp(1.0)).epsilon(1e-9));

    const ZeroSet z11 = find_zeros({1, 1});
    const auto [lo2, hi2] = admissible_initial_range({1, 1}, z11.center);
    CHECK(lo2 == doctest::Approx(2.0935).epsilon(1e-4));
    CHECK(hi2 == doctest::Approx(3.6131).epsilon(1e-3));
    // outer endpoint sits on the saddle level (P1 invariant)
    CHECK(big_g_eval({1, 1}, hi2) ==
          doctest::Approx(big_g_eval({1, 1}, z11.zeros[1])).epsilon(1e-8));

    // negative lobe of P1: the saddle itself bounds the well
    const auto [lo3, hi3] = admissible_initial_range({1, 1}, z11.zeros[0]);
    CHECK(lo3 == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(hi3 == doctest::Approx(z11.zeros[1]).epsilon(1e-9));

    CHECK_THROWS_AS(admissible_initial_range({1, 1}, z11.zeros[1]), OutsideAdmissibleRange);
}

TEST_CASE("orbit wells: P3 boundary is the orbit touching zero") {
    const auto wells = orbit_wells({-1, -1});
    REQUIRE(wells.size() == 1);
    CHECK(wells[0].center == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(wells[0].right == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(wells[0].contains(-0.1));
    CHECK(!wells[0].contains(0.2));
}

namespace {

// independent double-precision solve of the scaled 7x7 matching system
void oracle_coefficients(double* c_red, double* a) {
    const int monomials[7] = {1, 3, 5, 7, 9, 11, 13};
    Eigen::MatrixXd m(7, 7);
    Eigen::VectorXd rhs(7);
    const double jet[7] = {0, 1, 1, -1, 2, -6, 24};  // v log v at v = 1
    for (int k = 0; k < 7; ++k) {
        for (int j = 0; j < 7; ++j) {
            double fall = 1.0;
            for (int q = 0; q < k; ++q) fall *= monomials[j] - q;
            m(k, j) = monomials[j] - k >= 0 ? fall : 0.0;
        }
        rhs(k) = jet[k];
    }
    const Eigen::VectorXd x = m.fullPivLu().solve(rhs);
    *c_red = x(0);
    for (int i = 0; i < 6; ++i) a[i] = x(i + 1);
}

}  // namespace

TEST_CASE("regularized flux: exact-rational and independent-solve oracles") {
    // exact solution of the seven matching conditions (rational elimination)
    const double exact_a[6] = {3.0, -15.0 / 4.0, 10.0 / 3.0, -15.0 / 8.0, 3.0 / 5.0,
                               -1.0 / 12.0};
    const double exact_c = -49.0 / 40.0;

    double oc, oa[6];
    oracle_coefficients(&oc, oa);
    CHECK(std::abs(oc - exact_c) < 1e-10);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(oa[i] - exact_a[i]) < 1e-9);

    for (const double eps : {0.1, 1.0, 2.5}) {
        const RegularizedFlux flux = build_regularized_flux(eps);
        CHECK(std::abs(flux.linear_coef - (std::log(eps) + exact_c)) < 1e-12);
        for (int i = 0; i < 6; ++i) CHECK(std::abs(flux.odd_coefs[i] - exact_a[i]) < 1e-12);
        CHECK(flux.match_residual <= defaults::match_tol);
        // leftover inconsistency of the fixed linear-coefficient variant
        CHECK(flux.fixed_form_residual ==
              doctest::Approx(3712.0 / 15015.0 * eps).epsilon(1e-12));
    }
    CHECK_THROWS_AS(build_regularized_flux(0.0), NumericalError);
}

TEST_CASE("regularized flux: branches, symmetry, smooth joins") {
    const RegularizedFlux flux = build_regularized_flux(1.0);
    CHECK(flux.value(2.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(flux.value(0.0) == 0.0);
    for (const double u : {0.2, 0.55, 0.93})
        CHECK(flux.value(-u) == doctest::Approx(-flux.value(u)).epsilon(1e-14));

    // both branches agree at |u| = eps to the matching tolerance
    const double eps = 1.0;
    const double inner = flux.value(eps * (1 - 1e-13));
    const double outer = flux.value(eps * (1 + 1e-13));
    CHECK(std::abs(inner - outer) < defaults::match_tol);
    CHECK(std::abs(flux.deriv(eps * (1 - 1e-13)) - flux.deriv(eps * (1 + 1e-13))) <
          defaults::match_tol);

    // derivative matching across the join, finite differences of both branches
    for (const double e2 : {0.1, 1.0}) {
        const RegularizedFlux f2 = build_regularized_flux(e2);
        const double h = 1e-5 * e2;
        const double fd_in = (f2.value(e2 - h) - f2.value(e2 - 3 * h)) / (2 * h);
        const double fd_out = (f2.value(e2 + 3 * h) - f2.value(e2 + h)) / (2 * h);
        CHECK(std::abs(fd_in - fd_out) < 1e-3 * std::max(1.0, std::abs(fd_in)));
    }
}

TEST_CASE("regularized flux: energy density consistent with the flux") {
    const RegularizedFlux flux = build_regularized_flux(0.5);
    // P'(u) = -2 f_eps(u) on both branches
    for (const double u : {0.1, 0.3, 0.49, 0.51, 1.7, -0.2, -2.0}) {
        const double h = 1e-6;
        const double fd = (flux.potential(u + h) - flux.potential(u - h)) / (2 * h);
        CHECK(fd == doctest::Approx(-2.0 * flux.value(u)).epsilon(1e-6));
    }
    // continuous at the join and equal to the exact density outside
    CHECK(std::abs(flux.potential(0.5 - 1e-12) - flux.potential(0.5 + 1e-12)) < 1e-10);
    CHECK(flux.potential(2.0) ==
          doctest::Approx(0.5 * (4.0 - 4.0 * std::log(4.0))).epsilon(1e-14));
}
