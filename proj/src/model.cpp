#include "logkdv/model.hpp"

#include <algorithm>
#include <cmath>

#include "logkdv/numerics.hpp"

namespace logkdv {

double g_eval(const ModelParams& mu, double phi) {
    if (phi == 0.0) return mu.a_const;
    return mu.omega * phi - phi * std::log(phi * phi) + mu.a_const;
}

double g_prime(const ModelParams& mu, double phi) {
    return mu.omega - 2.0 - std::log(phi * phi);
}

double big_g_eval(const ModelParams& mu, double phi) {
    if (phi == 0.0) return 0.0;
    return 0.5 * (mu.omega + 1.0) * phi * phi - 0.5 * phi * phi * std::log(phi * phi) +
           mu.a_const * phi;
}

double phase_energy(const ModelParams& mu, double phi, double xi) {
    return -0.5 * xi * xi + big_g_eval(mu, phi);
}

Region region_of(const ModelParams& mu, double band) {
    const double threshold = 2.0 * std::exp(0.5 * mu.omega - 1.0);
    const double gap = std::abs(mu.a_const) - threshold;
    if (std::abs(gap) < band) return Region::P2;
    return gap < 0.0 ? Region::P1 : Region::P3;
}

namespace {

// Root of g on a monotone interval; expand `hi` geometrically until the sign
// flips when the bracket is half-open.
double tail_root(const ModelParams& mu, double anchor, double direction, double zero_tol) {
    double width = std::max(1.0, std::abs(anchor));
    double prev = anchor;
    double next = anchor + direction * width;
    for (int it = 0; it < 200; ++it) {
        if (g_eval(mu, prev) * g_eval(mu, next) <= 0.0) break;
        prev = next;
        width *= 2.0;
        next = anchor + direction * width;
        if (it == 199) throw ConvergenceFailure("find_zeros: tail bracket expansion failed");
    }
    auto f = [&](double p) { return g_eval(mu, p); };
    auto df = [&](double p) { return g_prime(mu, p); };
    const double a = std::min(prev, next), b = std::max(prev, next);
    return bisect_refine(f, a, b, zero_tol, df);
}

}  // namespace

ZeroSet find_zeros(const ModelParams& mu, double zero_tol) {
    const Region reg = region_of(mu);
    if (reg == Region::P2)
        throw RegionP2Error("parameter point lies on the P2 boundary |A| = 2e^{w/2-1}");

    const double x0 = std::exp(0.5 * mu.omega - 1.0);  // critical points of g at +-x0
    ZeroSet out;
    out.mu = mu;

    // g decreases on (-inf,-x0], increases on [-x0,x0], decreases on [x0,inf);
    // g(-x0) = A - 2x0, g(x0) = A + 2x0.
    if (g_eval(mu, -x0) < 0.0)
        out.zeros.push_back(tail_root(mu, -x0, -1.0, zero_tol));
    if (reg == Region::P1) {
        // middle zero; for A = 0 it is exactly 0 by oddness
        if (mu.a_const == 0.0) {
            out.zeros.push_back(0.0);
        } else {
            auto f = [&](double p) { return g_eval(mu, p); };
            out.zeros.push_back(bisect_refine(f, -x0, x0, zero_tol));
        }
    }
    if (g_eval(mu, x0) > 0.0)
        out.zeros.push_back(tail_root(mu, x0, +1.0, zero_tol));

    std::sort(out.zeros.begin(), out.zeros.end());
    const std::size_t want = reg == Region::P1 ? 3 : 1;
    if (out.zeros.size() != want)
        throw ConvergenceFailure("find_zeros: unexpected zero count for region");

    out.is_center.resize(out.zeros.size());
    double center = 0.0;
    bool have = false;
    for (std::size_t i = 0; i < out.zeros.size(); ++i) {
        const double z = out.zeros[i];
        const bool is_max = z != 0.0 && g_prime(mu, z) < 0.0;
        out.is_center[i] = is_max;
        if (is_max) {
            center = z;  // ascending order: ends at the largest G-maximum
            have = true;
        }
    }
    if (!have) throw ConvergenceFailure("find_zeros: no center among the zeros");
    out.center = center;
    out.gprime_at_center = g_prime(mu, center);
    return out;
}

namespace {

// Nearest clean sign change of G - level on the given side of the center.
double well_edge(const ModelParams& mu, double center, double level, double direction) {
    auto f = [&](double p) { return big_g_eval(mu, p) - level; };
    double step = std::max(1e-6, 1e-3 * std::max(1.0, std::abs(center)));
    double lo = center, hi = center + direction * step;
    while (f(hi) > 0.0) {
        lo = hi;
        step *= 1.6;
        hi = center + direction * step;
        if (step > 1e9) throw NoBracketError("orbit well: edge search diverged");
    }
    if (f(hi) == 0.0) return hi;
    return find_root(f, std::min(lo, hi), std::max(lo, hi), 1e-15);
}

}  // namespace

std::vector<OrbitWell> orbit_wells(const ModelParams& mu) {
    const ZeroSet zs = find_zeros(mu);
    std::vector<OrbitWell> wells;
    if (zs.zeros.size() == 3) {
        const double saddle = zs.zeros[1];
        const double level = big_g_eval(mu, saddle);
        // negative lobe around r0: the saddle bounds the well on the right
        wells.push_back({zs.zeros[0], well_edge(mu, zs.zeros[0], level, -1.0), saddle, level});
        wells.push_back({zs.zeros[2], saddle, well_edge(mu, zs.zeros[2], level, +1.0), level});
    } else {
        // P3: the bounding orbit touches phi = 0 (level G(0) = 0); G changes
        // sign cleanly at 0 since G ~ A*phi there
        const double c = zs.zeros[0];
        wells.push_back({c, well_edge(mu, c, 0.0, -1.0), well_edge(mu, c, 0.0, +1.0), 0.0});
    }
    return wells;
}

std::pair<double, double> admissible_initial_range(const ModelParams& mu, double center) {
    if (g_prime(mu, center) >= 0.0)
        throw OutsideAdmissibleRange("admissible_initial_range: center is not a G-maximum");
    for (const OrbitWell& w : orbit_wells(mu))
        if (std::abs(w.center - center) <= 1e-9 * std::max(1.0, std::abs(center)))
            return {w.center, w.right};
    throw OutsideAdmissibleRange("admissible_initial_range: center is not a well center");
}

double f_log_derivative(int k, double u) {
    const double au = std::abs(u);
    if (k == 0) return u * std::log(au);
    if (k == 1) return std::log(au) + 1.0;
    double fact = 1.0;
    for (int j = 1; j <= k - 2; ++j) fact *= j;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    // for u < 0 the odd symmetry flips even-order derivatives
    const double parity = (u < 0 && k % 2 == 0) ? -1.0 : 1.0;
    return parity * sign * fact / std::pow(au, k - 1);
}

namespace {

// Solve the 7x7 matching system in the scaled variable v = u/eps:
//   c*v + sum_i a_i v^{2i+1} must match v*log(v) + log(eps)*v to order 6 at
//   v = 1. Long double elimination with one refinement pass; the epsilon
//   dependence separates out, so the solve is done once.
struct ScaledCoefs {
    long double c_red;           // linear coefficient minus log(eps)
    std::array<long double, 6> a;
};

ScaledCoefs solve_matching() {
    constexpr int n = 7;
    const int monomials[n] = {1, 3, 5, 7, 9, 11, 13};
    long double M[n][n];
    long double rhs[n];
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            long double fall = 1.0L;
            for (int q = 0; q < k; ++q) fall *= monomials[j] - q;
            M[k][j] = (monomials[j] - k >= 0) ? fall : 0.0L;
        }
        // jets of v log v at v=1: 0, 1, 1, -1, 2, -6, 24
        static const long double jet[n] = {0.0L, 1.0L, 1.0L, -1.0L, 2.0L, -6.0L, 24.0L};
        rhs[k] = jet[k];
    }

    auto eliminate = [&](long double a[n][n], long double b[n], long double x[n]) {
        int perm[n];
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            for (int r = col + 1; r < n; ++r)
                if (std::abs((double)a[r][col]) > std::abs((double)a[piv][col])) piv = r;
            if (a[piv][col] == 0.0L)
                throw SingularSystemError("flux matching system is singular");
            std::swap(a[col], a[piv]);
            std::swap(b[col], b[piv]);
            for (int r = col + 1; r < n; ++r) {
                const long double f = a[r][col] / a[col][col];
                for (int cc = col; cc < n; ++cc) a[r][cc] -= f * a[col][cc];
                b[r] -= f * b[col];
            }
        }
        for (int r = n - 1; r >= 0; --r) {
            long double s = b[r];
            for (int cc = r + 1; cc < n; ++cc) s -= a[r][cc] * x[cc];
            x[r] = s / a[r][r];
        }
        (void)perm;
    };

    long double A[n][n], b[n], x[n];
    for (int i = 0; i < n; ++i) {
        b[i] = rhs[i];
        for (int j = 0; j < n; ++j) A[i][j] = M[i][j];
    }
    eliminate(A, b, x);
    // one iterative refinement pass against the exact integer matrix
    long double resid[n];
    for (int k = 0; k < n; ++k) {
        long double s = -rhs[k];
        for (int j = 0; j < n; ++j) s += M[k][j] * x[j];
        resid[k] = s;
    }
    long double corr[n];
    for (int i = 0; i < n; ++i) {
        b[i] = resid[i];
        for (int j = 0; j < n; ++j) A[i][j] = M[i][j];
    }
    eliminate(A, b, corr);
    for (int i = 0; i < n; ++i) x[i] -= corr[i];

    ScaledCoefs out;
    out.c_red = x[0];
    for (int i = 0; i < 6; ++i) out.a[i] = x[i + 1];
    return out;
}

const ScaledCoefs& scaled_coefs() {
    static const ScaledCoefs c = solve_matching();
    return c;
}

}  // namespace

RegularizedFlux build_regularized_flux(double epsilon) {
    if (!(epsilon > 0.0)) throw NumericalError("build_regularized_flux: epsilon must be > 0");
    const ScaledCoefs& sc = scaled_coefs();

    RegularizedFlux flux;
    flux.epsilon = epsilon;
    flux.linear_coef = std::log(epsilon) + static_cast<double>(sc.c_red);
    for (int i = 0; i < 6; ++i) flux.odd_coefs[i] = static_cast<double>(sc.a[i]);

    // residuals of the matching conditions, evaluated in long double
    const long double le = std::log((long double)epsilon);
    long double max_res = 0.0L;
    long double max_rel = 0.0L;
    for (int k = 0; k <= 6; ++k) {
        long double dp = 0.0L;
        if (k == 0) dp += (le + sc.c_red) * epsilon;
        if (k == 1) dp += le + sc.c_red;
        for (int i = 1; i <= 6; ++i) {
            const int m = 2 * i + 1;
            if (m - k < 0) continue;
            long double fall = 1.0L;
            for (int q = 0; q < k; ++q) fall *= m - q;
            dp += sc.a[i - 1] * fall * std::pow((long double)epsilon, (long double)(m - k)) /
                  std::pow((long double)epsilon, (long double)(2 * i));
        }
        long double df;
        if (k == 0)
            df = epsilon * le;
        else if (k == 1)
            df = le + 1.0L;
        else {
            long double fact = 1.0L;
            for (int j = 1; j <= k - 2; ++j) fact *= j;
            df = ((k % 2 == 0) ? fact : -fact) / std::pow((long double)epsilon, (long double)(k - 1));
        }
        max_res = std::max(max_res, std::abs(dp - df));
        max_rel = std::max(max_rel, std::abs(dp - df) / std::max(1.0L, std::abs(df)));
    }
    flux.match_residual = static_cast<double>(max_res);
    // fixed-coefficient variant: linear coefficient frozen at log(eps) - 1/2, odd
    // coefficients solved from k = 1..6; the leftover k = 0 condition misses
    // by a fixed rational multiple of epsilon.
    flux.fixed_form_residual = static_cast<double>(3712.0L / 15015.0L) * epsilon;
    // the k-th condition scales like eps^{1-k}, so the guard is relative
    if (max_rel > defaults::match_tol)
        throw InconsistentMatchError("flux matching residual exceeds tolerance");
    return flux;
}

double RegularizedFlux::value(double u) const {
    const double au = std::abs(u);
    if (au >= epsilon) return u * std::log(au);
    const double v2 = (u / epsilon) * (u / epsilon);
    // Horner in u^2/eps^2 over the odd monomials
    double poly = 0.0;
    for (int i = 5; i >= 0; --i) poly = poly * v2 + odd_coefs[i];
    return linear_coef * u + poly * v2 * u;
}

double RegularizedFlux::deriv(double u) const {
    const double au = std::abs(u);
    if (au >= epsilon) return std::log(au) + 1.0;
    const double v2 = (u / epsilon) * (u / epsilon);
    double poly = 0.0;
    for (int i = 5; i >= 0; --i) poly = poly * v2 + odd_coefs[i] * (2 * (i + 1) + 1);
    return linear_coef + poly * v2;
}

double RegularizedFlux::potential(double u) const {
    const double au = std::abs(u);
    if (au >= epsilon) return 0.5 * (u * u - u * u * std::log(u * u));
    // P(eps) + int_{|u|}^{eps} 2 p_eps(s) ds  (P' = -2 f_eps, even in u)
    const double pe = 0.5 * (epsilon * epsilon - epsilon * epsilon * std::log(epsilon * epsilon));
    auto anti = [&](double s) {  // antiderivative of 2 p_eps
        const double w2 = (s / epsilon) * (s / epsilon);
        double poly = 0.0;
        for (int i = 5; i >= 0; --i) poly = poly * w2 + odd_coefs[i] / (i + 2.0);
        return linear_coef * s * s + poly * w2 * s * s;
    };
    return pe + (anti(epsilon) - anti(au));
}

}  // namespace logkdv
