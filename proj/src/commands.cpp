#include "logkdv/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <sstream>
#include <vector>

#include "logkdv/evolution.hpp"
#include "logkdv/model.hpp"
#include "logkdv/spectral.hpp"
#include "logkdv/stability.hpp"
#include "logkdv/waves.hpp"

namespace logkdv {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_header(std::ostream& out, std::string_view command, const RunConfig& cfg) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
    out << "# logkdv " << command << "\n";
    out << "# config_hash=" << hash << "\n";
    for (const auto& [k, v] : cfg.entries()) out << "# " << k << "=" << v << "\n";
}

WaveOptions wave_options(const RunConfig& cfg) {
    WaveOptions opt;
    opt.n_samples = cfg.get_int("grid", defaults::n_samples);
    opt.rel_tol = cfg.get_real("rel_tol", opt.rel_tol);
    opt.abs_tol = cfg.get_real("abs_tol", opt.abs_tol);
    return opt;
}

ModelParams params_of(const RunConfig& cfg) {
    if (!cfg.has("omega") || !cfg.has("a"))
        throw ConfigError("missing required keys: omega, a");
    return {cfg.get_real("omega", 0.0), cfg.get_real("a", 0.0)};
}

// Compute rows concurrently but emit them in order.
std::vector<std::string> run_rows(int n_rows, int parallel,
                                  const std::function<std::string(int)>& fn) {
    std::vector<std::string> rows(n_rows);
    if (parallel <= 1) {
        for (int i = 0; i < n_rows; ++i) rows[i] = fn(i);
        return rows;
    }
    std::vector<std::future<std::string>> futs(n_rows);
    int next = 0;
    const int workers = std::min(parallel, n_rows);
    std::vector<std::future<void>> pool;
    std::mutex mtx;
    for (int w = 0; w < workers; ++w) {
        pool.push_back(std::async(std::launch::async, [&]() {
            while (true) {
                int i;
                {
                    std::lock_guard lock(mtx);
                    if (next >= n_rows) return;
                    i = next++;
                }
                rows[i] = fn(i);
            }
        }));
    }
    for (auto& f : pool) f.get();
    return rows;
}

constexpr std::array<Table1Row, 6> kTable1 = {{
    {2, 4, 5, 3.49, -0.14},
    {-1, -1, -0.1, 4.32, -0.02},
    {1, -2, -2, 3.65, -0.03},
    {-1, -2, -1, 3.37, -0.03},
    {0, 0, 1.5, 4.80, -1.70},
    {1, 1, 3, 4.18, -0.08},
}};

constexpr std::array<Table2Row, 9> kTable2 = {{
    {1, 1, 3, -0.47, -0.21, 7.41},
    {2, 4, 5, 3.13, 24.99, 21.81},
    {-1, -1, -0.1, 0.50, 0.44, 1.42},
    {1, -2, -2, 2.80, 8.99, 7.82},
    {-1, -2, -1, -1.65, -0.14, 0.52},
    {5, 3, 15, 354.78, 1.22, 349.28},
    {-3, -2, -0.5, 0.18, 0.43, 0.22},
    {-5, -0.1, -0.1, 0.01, 0.45, 0.01},
    {-10, -2, -0.2, 0.0008, 0.20, 0.004},
}};

}  // namespace

std::span<const Table1Row> table1_rows() { return kTable1; }
std::span<const Table2Row> table2_rows() { return kTable2; }

int cmd_wave(const RunConfig& cfg, std::ostream& out) {
    static constexpr std::string_view allowed[] = {"omega", "a",       "phi0",
                                                   "grid",  "rel_tol", "abs_tol"};
    cfg.require_known(allowed);
    const ModelParams mu = params_of(cfg);
    const double phi0 = cfg.get_real("phi0", 0.0);
    const WaveOptions opt = wave_options(cfg);

    const WaveProfile w = construct_wave(mu, phi0, opt.n_samples, opt);
    const PeriodComputation pc = compute_period(mu, phi0, opt);
    write_header(out, "wave", cfg);
    out << "# period=" << fmt(w.period) << " period_formula=" << fmt(pc.period_formula)
        << " alpha=" << fmt(pc.alpha) << "\n";
    out << "# center=" << fmt(w.center) << " sign_definite=" << (w.sign_definite ? 1 : 0)
        << " min_abs_phi=" << fmt(w.min_abs_phi) << "\n";
    out << "# symmetry_residual=" << fmt(w.symmetry_residual)
        << " ode_residual=" << fmt(w.ode_residual) << " energy_drift=" << fmt(w.energy_drift)
        << "\n";
    out << "x,phi,dphi\n";
    for (int j = 0; j < w.n(); ++j)
        out << fmt(w.x(j)) << "," << fmt(w.phi[j]) << "," << fmt(w.dphi[j]) << "\n";
    return 0;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    static constexpr std::string_view allowed[] = {"omega", "a",       "phi0",   "grid",
                                                   "rel_tol", "abs_tol", "scheme", "n_eigs"};
    cfg.require_known(allowed);
    const ModelParams mu = params_of(cfg);
    const double phi0 = cfg.get_real("phi0", 0.0);
    const WaveOptions opt = wave_options(cfg);
    const std::string scheme_name = cfg.get_str("scheme", "fd4");
    HillScheme scheme = HillScheme::fd4;
    if (scheme_name == "fd2")
        scheme = HillScheme::fd2;
    else if (scheme_name == "spectral")
        scheme = HillScheme::spectral;
    else if (scheme_name != "fd4")
        throw ConfigError("scheme must be fd2, fd4 or spectral");

    const WaveProfile w = construct_wave(mu, phi0, opt.n_samples, opt);
    const HillSpectrum spec = hill_spectrum(w, scheme);
    const ThetaIndex th = compute_theta(w);
    const ConsistencyReport rep = cross_validate(th, spec);

    write_header(out, "spectrum", cfg);
    out << "# period=" << fmt(w.period) << " theta=" << fmt(th.theta) << "\n";
    out << "# n_negative=" << spec.n_negative << " kernel_dim=" << spec.kernel_dim
        << " kernel_residual=" << fmt(spec.kernel_residual)
        << " kernel_band=" << fmt(spec.kernel_band) << "\n";
    out << "# cross_validate=" << (rep.consistent ? "consistent" : rep.detail) << "\n";
    const int n_eigs =
        std::min<int>(cfg.get_int("n_eigs", 16), static_cast<int>(spec.eigenvalues.size()));
    out << "index,eigenvalue\n";
    for (int i = 0; i < n_eigs; ++i) out << i << "," << fmt(spec.eigenvalues[i]) << "\n";
    return 0;
}

int cmd_theta(const RunConfig& cfg, std::ostream& out) {
    static constexpr std::string_view allowed[] = {"omega", "a", "phi0", "grid", "rel_tol",
                                                   "abs_tol"};
    cfg.require_known(allowed);
    const ModelParams mu = params_of(cfg);
    const double phi0 = cfg.get_real("phi0", 0.0);
    const WaveOptions opt = wave_options(cfg);
    const WaveProfile w = construct_wave(mu, phi0, opt.n_samples, opt);
    const ThetaIndex th = compute_theta(w);
    write_header(out, "theta", cfg);
    out << "omega,a,phi0,period,theta,ybar_end_deriv,phi_ddot0,classification\n";
    const char* cls = th.classification == ZeroEigenvaluePosition::lambda1_zero ? "lambda1_zero"
                      : th.classification == ZeroEigenvaluePosition::lambda2_zero
                          ? "lambda2_zero"
                          : "degenerate";
    out << fmt(mu.omega) << "," << fmt(mu.a_const) << "," << fmt(phi0) << "," << fmt(w.period)
        << "," << fmt(th.theta) << "," << fmt(th.ybar_end_deriv) << "," << fmt(th.phi_ddot0)
        << "," << cls << "\n";
    return 0;
}

int cmd_table1(const RunConfig& cfg, std::ostream& out) {
    static constexpr std::string_view allowed[] = {"grid", "parallel", "rel_tol", "abs_tol"};
    cfg.require_known(allowed);
    const WaveOptions opt = wave_options(cfg);
    const int parallel = cfg.get_int("parallel", 1);
    const double band = 0.02;

    int failures = 0;
    std::mutex fail_mtx;
    auto row = [&](int i) -> std::string {
        const Table1Row& r = kTable1[i];
        std::ostringstream os;
        os << fmt(r.omega) << "," << fmt(r.a) << "," << fmt(r.phi0) << ",";
        try {
            const WaveProfile w = construct_wave({r.omega, r.a}, r.phi0, opt.n_samples, opt);
            const ThetaIndex th = compute_theta(w);
            const bool period_ok = std::abs(w.period - r.ref_period) <= band;
            const bool theta_ok = std::abs(th.theta - r.ref_theta) <= band;
            os << fmt(w.period) << "," << fmt(th.theta) << "," << fmt(r.ref_period) << ","
               << fmt(r.ref_theta) << "," << (period_ok ? 1 : 0) << "," << (theta_ok ? 1 : 0);
        } catch (const NumericalError& e) {
            std::lock_guard lock(fail_mtx);
            ++failures;
            os << ",,,,0,0  # error: " << e.what();
        }
        return os.str();
    };
    const auto rows = run_rows(static_cast<int>(kTable1.size()), parallel, row);
    write_header(out, "table1", cfg);
    out << "omega,a,phi0,period,theta,ref_period,ref_theta,period_ok,theta_ok\n";
    for (const auto& r : rows) out << r << "\n";
    return failures;
}

int cmd_table2(const RunConfig& cfg, std::ostream& out) {
    static constexpr std::string_view allowed[] = {"grid", "parallel", "h", "rel_tol", "abs_tol"};
    cfg.require_known(allowed);
    const WaveOptions opt = wave_options(cfg);
    const int parallel = cfg.get_int("parallel", 1);
    const double h = cfg.get_real("h", defaults::fd_step);

    int failures = 0;
    std::mutex fail_mtx;
    auto row = [&](int i) -> std::string {
        const Table2Row& r = kTable2[i];
        std::ostringstream os;
        os << fmt(r.omega) << "," << fmt(r.a) << "," << fmt(r.phi0) << ",";
        try {
            const WaveProfile w = construct_wave({r.omega, r.a}, r.phi0, opt.n_samples, opt);
            const FamilyDerivatives der = family_derivatives(w, h, opt);
            const Functionals fn = functionals(w);
            const IdentityResiduals ids = check_identities(der, fn);
            const double ma_detd = der.m_a * der.det_d();
            const auto witness = find_k_witness(der);
            const HillSpectrum spec = hill_spectrum(w);
            const bool index_ok = spec.n_negative == 1 && spec.kernel_dim == 1;
            const char* verdict =
                (index_ok && witness && std::abs(der.det_d()) > 1e-9) ? "stable_certified"
                                                                      : "inconclusive";
            const bool ma_ok =
                std::abs(der.m_a - r.ref_ma) <= std::max(0.03, 0.02 * std::abs(r.ref_ma));
            const bool fw_ok = std::abs(der.f_omega - r.ref_fw) <= 0.01 * std::abs(r.ref_fw);
            const bool sign_ok = (ma_detd > 0) == (r.ref_ma_detd > 0);
            os << fmt(w.period) << "," << fmt(der.m_a) << "," << fmt(der.f_omega) << ","
               << fmt(der.m_omega) << "," << fmt(der.f_a) << "," << fmt(der.det_d()) << ","
               << fmt(ma_detd) << "," << fmt(ids.max()) << "," << verdict << ","
               << fmt(r.ref_ma_detd) << "," << fmt(r.ref_ma) << "," << fmt(r.ref_fw) << ","
               << (ma_ok ? 1 : 0) << "," << (fw_ok ? 1 : 0) << "," << (sign_ok ? 1 : 0);
        } catch (const NumericalError& e) {
            std::lock_guard lock(fail_mtx);
            ++failures;
            os << ",,,,,,,,stencil_failure,,,,0,0,0  # error: " << e.what();
        }
        return os.str();
    };
    const auto rows = run_rows(static_cast<int>(kTable2.size()), parallel, row);
    write_header(out, "table2", cfg);
    out << "omega,a,phi0,period,m_a,f_omega,m_omega,f_a,det_d,ma_detd,identity_max,verdict,"
           "ref_ma_detd,ref_ma,ref_fw,ma_ok,fw_ok,sign_ok\n";
    for (const auto& r : rows) out << r << "\n";
    return failures;
}

int cmd_portrait(const RunConfig& cfg, std::ostream& out) {
    static constexpr std::string_view allowed[] = {"omega", "a",       "seeds",  "points",
                                                   "grid",  "rel_tol", "abs_tol"};
    cfg.require_known(allowed);
    const ModelParams mu = params_of(cfg);
    const WaveOptions opt = wave_options(cfg);
    const int points = cfg.get_int("points", 400);

    std::vector<double> seeds;
    if (cfg.has("seeds")) {
        const std::string s = cfg.get_str("seeds", "");
        std::size_t pos = 0;
        while (pos < s.size()) {
            auto comma = s.find(',', pos);
            if (comma == std::string::npos) comma = s.size();
            seeds.push_back(std::stod(s.substr(pos, comma - pos)));
            pos = comma + 1;
        }
    } else {
        for (const OrbitWell& w : orbit_wells(mu)) {
            for (const double f : {0.3, 0.6, 0.85})
                seeds.push_back(w.center + f * (w.right - w.center));
            seeds.push_back(w.right + 0.25 * (w.right - w.center));  // beyond the well
        }
    }

    const auto orbits = phase_portrait_data(mu, seeds, points, opt);
    write_header(out, "portrait", cfg);
    out << "orbit,seed,periodic,sign_definite,closure_gap,point,phi,xi\n";
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        const OrbitSample& orb = orbits[i];
        for (std::size_t j = 0; j < orb.phi.size(); ++j)
            out << i << "," << fmt(orb.seed) << "," << (orb.periodic ? 1 : 0) << ","
                << (orb.sign_definite ? 1 : 0) << "," << fmt(orb.closure_gap) << "," << j << ","
                << fmt(orb.phi[j]) << "," << fmt(orb.xi[j]) << "\n";
    }
    return 0;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
    static constexpr std::string_view allowed[] = {"omega", "a",   "phi0",    "grid",
                                                   "delta", "horizon", "dt",  "epsilon",
                                                   "records", "k_stab", "rel_tol", "abs_tol"};
    cfg.require_known(allowed);
    const ModelParams mu = params_of(cfg);
    const double phi0 = cfg.get_real("phi0", 0.0);
    const WaveOptions opt = wave_options(cfg);
    const WaveProfile w = construct_wave(mu, phi0, opt.n_samples, opt);

    ExperimentOptions eopt;
    eopt.dt = cfg.get_real("dt", 0.0);
    eopt.epsilon = cfg.get_real("epsilon", 0.0);
    eopt.record_points = cfg.get_int("records", 200);
    eopt.k_stab = cfg.get_real("k_stab", defaults::k_stab);
    const double delta = cfg.get_real("delta", 0.0);
    const double horizon = cfg.get_real("horizon", 5.0);

    const ExperimentResult res = stability_experiment(w, delta, horizon, eopt);
    write_header(out, "evolve", cfg);
    out << "# period=" << fmt(w.period) << " sup_rho=" << fmt(res.sup_rho)
        << " bounded=" << (res.bounded ? 1 : 0) << "\n";
    out << "# f_drift=" << fmt(res.f_drift) << " m_drift=" << fmt(res.m_drift)
        << " e_drift=" << fmt(res.e_drift) << " min_abs_u=" << fmt(res.min_abs_u) << "\n";
    out << "t,e,f,m,rho\n";
    for (const TrackedPoint& p : res.series)
        out << fmt(p.t) << "," << fmt(p.e) << "," << fmt(p.f) << "," << fmt(p.m) << ","
            << fmt(p.rho) << "\n";
    return res.bounded ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    static constexpr std::string_view allowed[] = {
        "omega_min", "omega_max", "omega_steps", "a_min",   "a_max",   "a_steps",
        "phi0_frac", "grid",      "parallel",    "rel_tol", "abs_tol", "h"};
    cfg.require_known(allowed);
    const WaveOptions opt = wave_options(cfg);
    const double om0 = cfg.get_real("omega_min", -2.0), om1 = cfg.get_real("omega_max", 2.0);
    const double a0 = cfg.get_real("a_min", -1.0), a1 = cfg.get_real("a_max", 1.0);
    const int nom = cfg.get_int("omega_steps", 5), na = cfg.get_int("a_steps", 5);
    const double frac = cfg.get_real("phi0_frac", 0.5);
    const double h = cfg.get_real("h", defaults::fd_step);
    const int parallel = cfg.get_int("parallel", 1);
    if (nom < 1 || na < 1) throw ConfigError("sweep: steps must be positive");
    if (frac <= 0.0 || frac >= 1.0) throw ConfigError("sweep: phi0_frac must be in (0,1)");

    struct Cell {
        double omega, a;
    };
    std::vector<Cell> cells;
    for (int i = 0; i < nom; ++i)
        for (int j = 0; j < na; ++j)
            cells.push_back({nom == 1 ? om0 : om0 + (om1 - om0) * i / (nom - 1),
                             na == 1 ? a0 : a0 + (a1 - a0) * j / (na - 1)});

    int failures = 0;
    std::mutex fail_mtx;
    auto row = [&](int idx) -> std::string {
        const Cell& c = cells[idx];
        const ModelParams mu{c.omega, c.a};
        if (region_of(mu) == Region::P2) return {};  // excluded band
        std::ostringstream os;
        os << fmt(c.omega) << "," << fmt(c.a) << ","
           << (region_of(mu) == Region::P1 ? "P1" : "P3") << ",";
        try {
            const ZeroSet zs = find_zeros(mu);
            const auto [lo, hi] = admissible_initial_range(mu, zs.center);
            const double phi0 = lo + frac * (hi - lo);
            const WaveProfile w = construct_wave(mu, phi0, opt.n_samples, opt);
            const StabilityReport rep = stability_verdict(w, h, opt);
            os << fmt(phi0) << "," << fmt(w.period) << "," << fmt(rep.theta) << ","
               << fmt(rep.d2_omega ? *rep.d2_omega : 0.0) << ","
               << fmt(rep.det_d ? *rep.det_d : 0.0) << ","
               << fmt(rep.f_omega ? *rep.f_omega : 0.0) << ","
               << (rep.verdict == Verdict::stable_certified ? "stable_certified"
                                                            : "inconclusive");
        } catch (const NumericalError& e) {
            std::lock_guard lock(fail_mtx);
            ++failures;
            os << ",,,,,,error  # " << e.what();
        }
        return os.str();
    };
    const auto rows = run_rows(static_cast<int>(cells.size()), parallel, row);
    write_header(out, "sweep", cfg);
    out << "omega,a,region,phi0,period,theta,d2_omega,det_d,f_omega,verdict\n";
    for (const auto& r : rows)
        if (!r.empty()) out << r << "\n";
    return failures;
}

int run_command(std::string_view name, const RunConfig& cfg, std::ostream& out) {
    if (name == "wave") return cmd_wave(cfg, out);
    if (name == "spectrum") return cmd_spectrum(cfg, out);
    if (name == "theta") return cmd_theta(cfg, out);
    if (name == "table1") return cmd_table1(cfg, out);
    if (name == "table2") return cmd_table2(cfg, out);
    if (name == "portrait") return cmd_portrait(cfg, out);
    if (name == "evolve") return cmd_evolve(cfg, out);
    if (name == "sweep") return cmd_sweep(cfg, out);
    throw ConfigError("unknown command: " + std::string(name));
}

}  // namespace logkdv
