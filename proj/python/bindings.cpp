#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "logkdv/evolution.hpp"
#include "logkdv/model.hpp"
#include "logkdv/spectral.hpp"
#include "logkdv/stability.hpp"
#include "logkdv/waves.hpp"

namespace py = pybind11;
using namespace logkdv;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> from_array(const py::array_t<double, py::array::c_style>& a) {
    return {a.data(), a.data() + a.size()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Periodic traveling waves of the log-KdV equation: construction, "
              "spectral indices, stability certificates, time evolution";

    py::register_exception<NumericalError>(m, "NumericalError");

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<double, double>(), py::arg("omega"), py::arg("a"))
        .def_readwrite("omega", &ModelParams::omega)
        .def_readwrite("a", &ModelParams::a_const)
        .def("__repr__", [](const ModelParams& mu) {
            return "ModelParams(omega=" + std::to_string(mu.omega) +
                   ", a=" + std::to_string(mu.a_const) + ")";
        });

    py::enum_<Region>(m, "Region").value("P1", Region::P1).value("P2", Region::P2).value(
        "P3", Region::P3);
    py::enum_<Lobe>(m, "Lobe")
        .value("positive", Lobe::positive)
        .value("negative", Lobe::negative);
    py::enum_<HillScheme>(m, "HillScheme")
        .value("fd2", HillScheme::fd2)
        .value("fd4", HillScheme::fd4)
        .value("spectral", HillScheme::spectral);
    py::enum_<Verdict>(m, "Verdict")
        .value("stable_certified", Verdict::stable_certified)
        .value("inconclusive", Verdict::inconclusive);

    m.def("g_eval", &g_eval, py::arg("mu"), py::arg("phi"));
    m.def("g_prime", &g_prime, py::arg("mu"), py::arg("phi"));
    m.def("big_g_eval", &big_g_eval, py::arg("mu"), py::arg("phi"));
    m.def("phase_energy", &phase_energy, py::arg("mu"), py::arg("phi"), py::arg("xi"));
    m.def("region_of", [](const ModelParams& mu) { return region_of(mu); }, py::arg("mu"));

    py::class_<ZeroSet>(m, "ZeroSet")
        .def_readonly("zeros", &ZeroSet::zeros)
        .def_readonly("center", &ZeroSet::center)
        .def_readonly("gprime_at_center", &ZeroSet::gprime_at_center);
    m.def("find_zeros", [](const ModelParams& mu) { return find_zeros(mu); }, py::arg("mu"));
    m.def("admissible_initial_range", &admissible_initial_range, py::arg("mu"),
          py::arg("center"));

    py::class_<RegularizedFlux>(m, "RegularizedFlux")
        .def_readonly("epsilon", &RegularizedFlux::epsilon)
        .def_readonly("linear_coef", &RegularizedFlux::linear_coef)
        .def_readonly("odd_coefs", &RegularizedFlux::odd_coefs)
        .def_readonly("match_residual", &RegularizedFlux::match_residual)
        .def_readonly("fixed_form_residual", &RegularizedFlux::fixed_form_residual)
        .def("value", &RegularizedFlux::value)
        .def("deriv", &RegularizedFlux::deriv)
        .def("potential", &RegularizedFlux::potential);
    m.def("build_regularized_flux", &build_regularized_flux, py::arg("epsilon"));

    py::class_<WaveProfile>(m, "WaveProfile")
        .def_readonly("mu", &WaveProfile::mu)
        .def_readonly("phi0", &WaveProfile::phi0)
        .def_readonly("period", &WaveProfile::period)
        .def_readonly("center", &WaveProfile::center)
        .def_readonly("sign", &WaveProfile::sign)
        .def_readonly("sign_definite", &WaveProfile::sign_definite)
        .def_readonly("min_abs_phi", &WaveProfile::min_abs_phi)
        .def_readonly("symmetry_residual", &WaveProfile::symmetry_residual)
        .def_readonly("ode_residual", &WaveProfile::ode_residual)
        .def_readonly("energy_drift", &WaveProfile::energy_drift)
        .def_property_readonly("phi", [](const WaveProfile& w) { return to_array(w.phi); })
        .def_property_readonly("dphi", [](const WaveProfile& w) { return to_array(w.dphi); })
        .def_property_readonly("x", [](const WaveProfile& w) {
            std::vector<double> xs(w.n());
            for (int j = 0; j < w.n(); ++j) xs[j] = w.x(j);
            return to_array(xs);
        });

    m.def(
        "construct_wave",
        [](const ModelParams& mu, double phi0, int n) { return construct_wave(mu, phi0, n); },
        py::arg("mu"), py::arg("phi0"), py::arg("n_samples") = defaults::n_samples);
    m.def("period_by_event",
          [](const ModelParams& mu, double phi0) { return period_by_event(mu, phi0); },
          py::arg("mu"), py::arg("phi0"));
    m.def("period_by_formula",
          [](const ModelParams& mu, double phi0) { return period_by_formula(mu, phi0); },
          py::arg("mu"), py::arg("phi0"));
    m.def("scaling_family",
          [](const WaveProfile& base, double omega, Lobe branch) {
              return scaling_family(base, omega, branch);
          },
          py::arg("base"), py::arg("omega"), py::arg("branch") = Lobe::positive);
    m.def("fixed_period_wave",
          [](const ModelParams& mu, double target, std::pair<double, double> bracket) {
              return fixed_period_wave(mu, target, bracket);
          },
          py::arg("mu"), py::arg("target_period"), py::arg("bracket"));

    py::class_<ThetaIndex>(m, "ThetaIndex")
        .def_readonly("theta", &ThetaIndex::theta)
        .def_readonly("ybar_end_deriv", &ThetaIndex::ybar_end_deriv)
        .def_readonly("phi_ddot0", &ThetaIndex::phi_ddot0);
    m.def("compute_theta",
          [](const WaveProfile& w) { return compute_theta(w); }, py::arg("wave"));

    py::class_<HillSpectrum>(m, "HillSpectrum")
        .def_readonly("grid_size", &HillSpectrum::grid_size)
        .def_readonly("n_negative", &HillSpectrum::n_negative)
        .def_readonly("kernel_dim", &HillSpectrum::kernel_dim)
        .def_readonly("kernel_residual", &HillSpectrum::kernel_residual)
        .def_readonly("kernel_band", &HillSpectrum::kernel_band)
        .def_property_readonly("eigenvalues", [](const HillSpectrum& s) {
            return to_array(s.eigenvalues);
        });
    m.def("hill_spectrum",
          [](const WaveProfile& w, HillScheme s) { return hill_spectrum(w, s); },
          py::arg("wave"), py::arg("scheme") = HillScheme::fd4);

    py::class_<Functionals>(m, "Functionals")
        .def_readonly("f", &Functionals::f)
        .def_readonly("m", &Functionals::m)
        .def_readonly("e", &Functionals::e);
    m.def("functionals", &functionals, py::arg("wave"));
    m.def("d2_omega_a0", &d2_omega_a0, py::arg("phi_zero_wave"), py::arg("omega"));

    py::class_<FamilyDerivatives>(m, "FamilyDerivatives")
        .def_readonly("m_omega", &FamilyDerivatives::m_omega)
        .def_readonly("m_a", &FamilyDerivatives::m_a)
        .def_readonly("f_omega", &FamilyDerivatives::f_omega)
        .def_readonly("f_a", &FamilyDerivatives::f_a)
        .def("det_d", &FamilyDerivatives::det_d)
        .def_property_readonly("eta",
                               [](const FamilyDerivatives& d) { return to_array(d.eta); })
        .def_property_readonly("beta",
                               [](const FamilyDerivatives& d) { return to_array(d.beta); });
    m.def("family_derivatives",
          [](const WaveProfile& base, double h) { return family_derivatives(base, h); },
          py::arg("base"), py::arg("h") = defaults::fd_step);
    m.def("k_function", &k_function, py::arg("derivs"), py::arg("a"), py::arg("b"));
    m.def("i_value",
          [](const WaveProfile& w, const FamilyDerivatives& d, double a, double b) {
              return i_value(w, d, a, b);
          },
          py::arg("wave"), py::arg("derivs"), py::arg("a"), py::arg("b"));

    py::class_<StabilityReport>(m, "StabilityReport")
        .def_readonly("theta", &StabilityReport::theta)
        .def_readonly("n_negative", &StabilityReport::n_negative)
        .def_readonly("kernel_dim", &StabilityReport::kernel_dim)
        .def_readonly("d2_omega", &StabilityReport::d2_omega)
        .def_readonly("m_omega", &StabilityReport::m_omega)
        .def_readonly("m_a", &StabilityReport::m_a)
        .def_readonly("f_omega", &StabilityReport::f_omega)
        .def_readonly("f_a", &StabilityReport::f_a)
        .def_readonly("det_d", &StabilityReport::det_d)
        .def_readonly("verdict", &StabilityReport::verdict);
    m.def("stability_verdict",
          [](const WaveProfile& w, double h) { return stability_verdict(w, h); },
          py::arg("wave"), py::arg("h") = defaults::fd_step);

    py::class_<OrbitalDistance>(m, "OrbitalDistance")
        .def_readonly("rho", &OrbitalDistance::rho)
        .def_readonly("best_shift", &OrbitalDistance::best_shift);
    m.def("orbital_rho",
          [](const py::array_t<double, py::array::c_style>& u, const WaveProfile& w) {
              return orbital_rho(from_array(u), w);
          },
          py::arg("u"), py::arg("wave"));

    py::class_<TrackedPoint>(m, "TrackedPoint")
        .def_readonly("t", &TrackedPoint::t)
        .def_readonly("e", &TrackedPoint::e)
        .def_readonly("f", &TrackedPoint::f)
        .def_readonly("m", &TrackedPoint::m)
        .def_readonly("rho", &TrackedPoint::rho);

    py::class_<EvolutionState>(m, "EvolutionState")
        .def(py::init([](const py::array_t<double, py::array::c_style>& u0, double length,
                         const RegularizedFlux& flux) {
                 return EvolutionState(from_array(u0), length, flux);
             }),
             py::arg("u0"), py::arg("length"), py::arg("flux"))
        .def_property_readonly("t", &EvolutionState::t)
        .def_property_readonly("u",
                               [](const EvolutionState& s) { return to_array(s.u()); })
        .def("stable_step", &EvolutionState::stable_step)
        .def("step", &EvolutionState::step, py::arg("dt"))
        .def("run", &EvolutionState::run, py::arg("t_target"), py::arg("dt"));

    py::class_<ConservedQuantities>(m, "ConservedQuantities")
        .def_readonly("e", &ConservedQuantities::e)
        .def_readonly("f", &ConservedQuantities::f)
        .def_readonly("m", &ConservedQuantities::m);
    m.def("conserved_quantities", &conserved_quantities, py::arg("state"));

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("series", &ExperimentResult::series)
        .def_readonly("sup_rho", &ExperimentResult::sup_rho)
        .def_readonly("f_drift", &ExperimentResult::f_drift)
        .def_readonly("m_drift", &ExperimentResult::m_drift)
        .def_readonly("e_drift", &ExperimentResult::e_drift)
        .def_readonly("min_abs_u", &ExperimentResult::min_abs_u)
        .def_readonly("bounded", &ExperimentResult::bounded);
    m.def("stability_experiment",
          [](const WaveProfile& w, double delta, double horizon, double dt, int records) {
              ExperimentOptions opt;
              opt.dt = dt;
              opt.record_points = records;
              return stability_experiment(w, delta, horizon, opt);
          },
          py::arg("wave"), py::arg("delta"), py::arg("horizon"), py::arg("dt") = 0.0,
          py::arg("records") = 200);
}
