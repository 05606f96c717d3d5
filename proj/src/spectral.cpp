#include "logkdv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace logkdv {

ThetaIndex compute_theta(const WaveProfile& wave, double rel_tol, double abs_tol) {
    const ModelParams mu = wave.mu;
    const double phi0 = wave.phi0;
    const double dd0 = g_eval(mu, phi0);
    if (std::abs(dd0) < 1e-12)
        throw DegenerateCurvature("compute_theta: phi''(0) vanishes");

    // co-propagate the wave so the sensitive y'(L) does not inherit
    // interpolation error from stored samples
    Rhs rhs = [mu](double, std::span<const double> y, std::span<double> f) {
        f[0] = y[1];
        f[1] = g_eval(mu, y[0]);
        f[2] = y[3];
        f[3] = g_prime(mu, y[0]) * y[2];
    };
    const double y0[4] = {phi0, 0.0, -1.0 / dd0, 0.0};
    IvpOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = abs_tol;
    Trajectory traj;
    try {
        traj = integrate(rhs, y0, 0.0, wave.period, opt);
    } catch (const NumericalError& e) {
        throw IntegrationFailure(std::string("compute_theta: ") + e.what());
    }

    ThetaIndex out;
    out.phi_ddot0 = dd0;
    out.ybar_end_deriv = traj.final_state()[3];
    out.theta = out.ybar_end_deriv / dd0;
    if (out.theta < -defaults::theta_band)
        out.classification = ZeroEigenvaluePosition::lambda1_zero;
    else if (out.theta > defaults::theta_band)
        out.classification = ZeroEigenvaluePosition::lambda2_zero;
    else
        out.classification = ZeroEigenvaluePosition::degenerate;
    return out;
}

SymmetricMatrix hill_matrix(const WaveProfile& wave, HillScheme scheme) {
    const int n = wave.n();
    const double h = wave.dx();
    for (double v : wave.phi)
        if (std::abs(v) < 1e-12)
            throw SignChangeError("hill_matrix: wave sample too close to zero, log-potential singular");

    SymmetricMatrix m(n);
    switch (scheme) {
        case HillScheme::fd2: {
            const double w = 1.0 / (h * h);
            for (int i = 0; i < n; ++i) {
                m.add(i, i, 2.0 * w);
                m.add(i, (i + 1) % n, -w);
            }
            break;
        }
        case HillScheme::fd4: {
            const double w = 1.0 / (h * h);
            for (int i = 0; i < n; ++i) {
                m.add(i, i, 2.5 * w);
                m.add(i, (i + 1) % n, -4.0 / 3.0 * w);
                m.add(i, (i + 2) % n, w / 12.0);
            }
            break;
        }
        case HillScheme::spectral: {
            // dense symmetric circulant of -d^2/dx^2: entries from the
            // inverse transform of kappa^2
            const double L = wave.period;
            std::vector<double> first(n, 0.0);
            for (int k = 1; k <= n / 2; ++k) {
                const double kap = 2.0 * std::numbers::pi * k / L;
                const double mult = (k == n / 2) ? 1.0 : 2.0;
                for (int j = 0; j < n; ++j)
                    first[j] += mult * kap * kap * std::cos(2.0 * std::numbers::pi * k * j / n) / n;
            }
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) m.set(i, j, first[(j - i) % n]);
            break;
        }
    }
    for (int i = 0; i < n; ++i) m.add(i, i, g_prime(wave.mu, wave.phi[i]));
    return m;
}

HillSpectrum hill_spectrum(const WaveProfile& wave, HillScheme scheme) {
    const SymmetricMatrix m = hill_matrix(wave, scheme);
    const int n = m.order();

    HillSpectrum out;
    out.grid_size = n;
    out.scheme = scheme;

    // residual of the analytic kernel vector phi'
    std::vector<double> lphi(n);
    m.multiply(wave.dphi, lphi);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        num += lphi[i] * lphi[i];
        den += wave.dphi[i] * wave.dphi[i];
    }
    out.kernel_residual = std::sqrt(num / den);
    out.kernel_band = std::max(10.0 * out.kernel_residual,
                               100.0 * std::numeric_limits<double>::epsilon() * m.inf_norm());

    const EigenDecomposition eig = eigen_sym(m);
    out.eigenvalues = eig.values;
    for (double lam : out.eigenvalues) {
        if (lam < -out.kernel_band)
            ++out.n_negative;
        else if (lam <= out.kernel_band)
            ++out.kernel_dim;
    }
    return out;
}

ConsistencyReport cross_validate(const ThetaIndex& theta_idx, const HillSpectrum& spectrum) {
    ConsistencyReport rep;
    rep.theta = theta_idx.theta;
    rep.n_negative = spectrum.n_negative;
    rep.kernel_dim = spectrum.kernel_dim;
    if (theta_idx.classification == ZeroEigenvaluePosition::degenerate) {
        rep.degenerate = true;
        rep.detail = "theta within the degeneracy band; no classification asserted";
        return rep;
    }
    const bool simple_kernel = spectrum.kernel_dim == 1;
    const int expected_negative =
        theta_idx.classification == ZeroEigenvaluePosition::lambda1_zero ? 1 : 2;
    if (!simple_kernel) {
        rep.detail = "theta != 0 requires a one-dimensional discrete kernel";
        throw InconsistentClassification(rep.detail);
    }
    if (spectrum.n_negative != expected_negative) {
        rep.detail = "near-zero eigenvalue sits at the wrong position for sign(theta)";
        throw InconsistentClassification(rep.detail);
    }
    rep.consistent = true;
    rep.detail = "consistent";
    return rep;
}

}  // namespace logkdv
