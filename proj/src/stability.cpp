#include "logkdv/stability.hpp"

#include <algorithm>
#include <cmath>

namespace logkdv {

Functionals functionals(const WaveProfile& wave) {
    if (!wave.sign_definite)
        throw SignChangeError("functionals: the energy integrand needs a sign-definite wave");
    const int n = wave.n();
    std::vector<double> f2(n), m1(n), en(n);
    for (int i = 0; i < n; ++i) {
        const double p = wave.phi[i], dp = wave.dphi[i];
        f2[i] = 0.5 * p * p;
        m1[i] = p;
        en[i] = 0.5 * (dp * dp + p * p - p * p * std::log(p * p));
    }
    Functionals out;
    out.f = periodic_quadrature(f2, wave.period);
    out.m = periodic_quadrature(m1, wave.period);
    out.e = periodic_quadrature(en, wave.period);
    return out;
}

double d2_omega_a0(const WaveProfile& phi_zero_wave, double omega) {
    if (phi_zero_wave.mu.omega != 0.0 || phi_zero_wave.mu.a_const != 0.0)
        throw NumericalError("d2_omega_a0: base wave must be built at (0, 0)");
    std::vector<double> p2(phi_zero_wave.n());
    for (int i = 0; i < phi_zero_wave.n(); ++i)
        p2[i] = phi_zero_wave.phi[i] * phi_zero_wave.phi[i];
    return 0.5 * std::exp(omega) * periodic_quadrature(p2, phi_zero_wave.period);
}

FamilyDerivatives family_derivatives(const WaveProfile& base, double h, const WaveOptions& opt) {
    FamilyDerivatives out;
    out.mu0 = base.mu;
    out.period = base.period;
    out.h_step = h;

    WaveOptions wopt = opt;
    wopt.n_samples = base.n();

    const double spread = 0.05 * std::max(1.0, std::abs(base.phi0));
    const std::pair<double, double> bracket{base.phi0 - spread, base.phi0 + spread};

    auto stencil = [&](double dom, double da) -> WaveProfile {
        const ModelParams mu{base.mu.omega + dom, base.mu.a_const + da};
        try {
            return fixed_period_wave(mu, base.period, bracket, wopt);
        } catch (const NumericalError& e) {
            throw StencilFailure(std::string("family_derivatives: stencil wave failed: ") +
                                 e.what());
        }
    };

    const WaveProfile wp = stencil(+h, 0.0);
    const WaveProfile wm = stencil(-h, 0.0);
    const WaveProfile ap = stencil(0.0, +h);
    const WaveProfile am = stencil(0.0, -h);

    const Functionals fwp = functionals(wp), fwm = functionals(wm);
    const Functionals fap = functionals(ap), fam = functionals(am);
    out.m_omega = (fwp.m - fwm.m) / (2.0 * h);
    out.m_a = (fap.m - fam.m) / (2.0 * h);
    out.f_omega = (fwp.f - fwm.f) / (2.0 * h);
    out.f_a = (fap.f - fam.f) / (2.0 * h);

    const int n = base.n();
    out.eta.resize(n);
    out.beta.resize(n);
    for (int i = 0; i < n; ++i) {
        out.eta[i] = (wp.phi[i] - wm.phi[i]) / (2.0 * h);
        out.beta[i] = (ap.phi[i] - am.phi[i]) / (2.0 * h);
    }
    return out;
}

double IdentityResiduals::max() const {
    return std::max({fw_identity, fa_identity, fa_equals_mw});
}

IdentityResiduals check_identities(const FamilyDerivatives& d, const Functionals& funcs) {
    const double a0 = d.mu0.a_const;
    IdentityResiduals out;
    out.fw_identity = std::abs(2.0 * d.f_omega - 2.0 * funcs.f + a0 * d.m_omega) /
                      std::max({1e-30, std::abs(2.0 * d.f_omega), std::abs(2.0 * funcs.f),
                                std::abs(a0 * d.m_omega)});
    out.fa_identity = std::abs(2.0 * d.f_a - funcs.m + a0 * d.m_a) /
                      std::max({1e-30, std::abs(2.0 * d.f_a), std::abs(funcs.m),
                                std::abs(a0 * d.m_a)});
    out.fa_equals_mw = std::abs(d.f_a - d.m_omega) /
                       std::max({1e-30, std::abs(d.f_a), std::abs(d.m_omega)});
    return out;
}

double k_function(const FamilyDerivatives& d, double a, double b) {
    return a * a * d.m_a + a * b * (d.m_omega + d.f_a) + b * b * d.f_omega;
}

double i_value(const WaveProfile& wave, const FamilyDerivatives& d, double a, double b,
               HillScheme scheme) {
    const int n = wave.n();
    if (static_cast<int>(d.eta.size()) != n)
        throw NumericalError("i_value: derivative grid does not match the wave grid");
    std::vector<double> phi_dir(n), lphi(n);
    for (int i = 0; i < n; ++i) phi_dir[i] = a * d.beta[i] + b * d.eta[i];
    const SymmetricMatrix m = hill_matrix(wave, scheme);
    m.multiply(phi_dir, lphi);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += lphi[i] * phi_dir[i];
    return s * wave.dx();
}

std::optional<std::pair<std::pair<double, double>, double>> find_k_witness(
    const FamilyDerivatives& d) {
    auto tryc = [&](double a, double b)
        -> std::optional<std::pair<std::pair<double, double>, double>> {
        const double k = k_function(d, a, b);
        if (k > 0.0) return std::make_pair(std::make_pair(a, b), k);
        return std::nullopt;
    };
    // corollary case split first
    if (d.m_a > 0.0)
        if (auto w = tryc(1.0, 0.0)) return w;
    if (d.f_omega > 0.0)
        if (auto w = tryc(0.0, 1.0)) return w;
    if (d.m_omega > 0.0 && d.m_a < 0.0)
        if (auto w = tryc(d.m_omega, -d.m_a)) return w;
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{-1.0, 1.0}})
        if (auto w = tryc(a, b)) return w;
    for (int ia = -4; ia <= 4; ++ia)
        for (int ib = -4; ib <= 4; ++ib)
            if (ia != 0 || ib != 0)
                if (auto w = tryc(0.5 * ia, 0.5 * ib)) return w;
    return std::nullopt;
}

StabilityReport stability_verdict(const WaveProfile& wave, double h, const WaveOptions& opt) {
    StabilityReport rep;
    rep.mu0 = wave.mu;
    rep.period = wave.period;

    const ThetaIndex th = compute_theta(wave);
    rep.theta = th.theta;
    const HillSpectrum spec = hill_spectrum(wave);
    rep.n_negative = spec.n_negative;
    rep.kernel_dim = spec.kernel_dim;
    const bool index_ok = spec.n_negative == 1 && spec.kernel_dim == 1;

    if (wave.mu.a_const == 0.0) {
        // S1-S3 route: the scaling family gives d''(omega) in closed form
        WaveProfile base = wave;
        if (wave.mu.omega != 0.0) {
            const double f = std::exp(-0.5 * wave.mu.omega) *
                             (wave.sign == Lobe::negative ? -1.0 : 1.0);
            base.mu = {0.0, 0.0};
            base.phi0 *= f;
            base.center *= f;
            for (auto& v : base.phi) v *= f;
            for (auto& v : base.dphi) v *= f;
        }
        const double d2 = d2_omega_a0(base, wave.mu.omega);
        rep.d2_omega = d2;
        rep.verdict =
            (index_ok && d2 > 0.0) ? Verdict::stable_certified : Verdict::inconclusive;
        return rep;
    }

    const FamilyDerivatives der = family_derivatives(wave, h, opt);
    rep.m_omega = der.m_omega;
    rep.m_a = der.m_a;
    rep.f_omega = der.f_omega;
    rep.f_a = der.f_a;
    rep.det_d = der.det_d();
    const double scale = std::max({std::abs(der.m_omega), std::abs(der.m_a),
                                   std::abs(der.f_omega), std::abs(der.f_a)});
    const double det_floor = defaults::det_floor_rel * std::max(1.0, scale * scale);
    const auto witness = find_k_witness(der);
    rep.k_witness = witness;
    if (witness) rep.i_val = i_value(wave, der, witness->first.first, witness->first.second);
    rep.verdict = (index_ok && std::abs(der.det_d()) > det_floor && witness.has_value())
                      ? Verdict::stable_certified
                      : Verdict::inconclusive;
    return rep;
}

}  // namespace logkdv
