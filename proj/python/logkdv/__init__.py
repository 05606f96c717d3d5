"""Periodic traveling waves of the log-KdV equation.

Thin package wrapper around the compiled core: wave construction, Hill-operator
spectral indices, orbital-stability certificates and pseudospectral time
evolution.
"""

from logkdv._core import (  # noqa: F401
    ConservedQuantities,
    EvolutionState,
    ExperimentResult,
    FamilyDerivatives,
    Functionals,
    HillScheme,
    HillSpectrum,
    Lobe,
    ModelParams,
    NumericalError,
    OrbitalDistance,
    Region,
    RegularizedFlux,
    StabilityReport,
    ThetaIndex,
    TrackedPoint,
    Verdict,
    WaveProfile,
    ZeroSet,
    admissible_initial_range,
    big_g_eval,
    build_regularized_flux,
    compute_theta,
    conserved_quantities,
    construct_wave,
    d2_omega_a0,
    family_derivatives,
    find_zeros,
    fixed_period_wave,
    functionals,
    g_eval,
    g_prime,
    hill_spectrum,
    i_value,
    k_function,
    orbital_rho,
    period_by_event,
    period_by_formula,
    phase_energy,
    region_of,
    scaling_family,
    stability_experiment,
    stability_verdict,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
