"""
nls_kato — Numerical lab for the 3D intercritical NLS with Kato potentials
===========================================================================

Radial simulations of  i u_t + Δu − V u = ±|u|^α u  in three dimensions,
with the ground-state thresholds, the potential hypotheses and the
localized Morawetz machinery needed to test scattering below threshold.

Quick start::

    from nls_kato import (
        RadialGrid, PotentialSpec, SolverConfig, FieldState,
        solve_ground_state, classify_initial_data, evolve, scattering_proxy,
    )

    grid = RadialGrid(40.0, 2048)
    gs = solve_ground_state(2.0, grid)
    u0 = FieldState(grid, 0.5 * gs.q_values)
    V = PotentialSpec.yukawa(0.01, 0.5, 1.0)

    classify_initial_data(u0, gs, V).verdict     # BelowThreshold
    traj = evolve(u0, SolverConfig(grid, dt=1e-3, t_end=2.0), V)
    scattering_proxy(traj).verdict_hint
"""

__version__ = "1.0.0"

from .grid import RadialGrid, radial_integral, radial_gradient
from .potentials import (
    PotentialFamily,
    PotentialSpec,
    QuadSettings,
    Theorem,
    AssumptionReport,
    eval_potential,
    radial_derivative,
    yukawa_lq_norm_closed,
    yukawa_kato_norm_closed,
    lq_norm_numeric,
    kato_norm_numeric,
    validate_assumptions,
)
from .groundstate import GroundState, solve_ground_state, ground_state_on, pohozaev_residuals, sharp_constants
from .functionals import (
    Sign,
    Verdict,
    FieldState,
    ThresholdReport,
    critical_exponents,
    mass,
    kinetic,
    energy,
    scattering_quantity,
    classify_initial_data,
)
from .radial_dynamics import (
    Scheme,
    Outcome,
    ProxyHint,
    SolverConfig,
    Trajectory,
    step,
    evolve,
    scattering_proxy,
    linear_decay_exponent,
)
from .morawetz import (
    CutoffProfile,
    build_cutoffs,
    verify_cutoff_properties,
    morawetz_action,
    morawetz_identity_residual,
    galilean_shift,
    interaction_action,
    coercivity_check,
)
from .exceptions import (
    NLSKatoError,
    NLSDomainError,
    NLSDivergenceError,
    NLSConfigurationError,
    NLSSolverError,
    NLSCacheError,
    NLSSerializationError,
)

__all__ = [
    # Grid and fields
    "RadialGrid",
    "radial_integral",
    "radial_gradient",
    "FieldState",
    # Potentials
    "PotentialFamily",
    "PotentialSpec",
    "QuadSettings",
    "Theorem",
    "AssumptionReport",
    "eval_potential",
    "radial_derivative",
    "yukawa_lq_norm_closed",
    "yukawa_kato_norm_closed",
    "lq_norm_numeric",
    "kato_norm_numeric",
    "validate_assumptions",
    # Ground state and thresholds
    "GroundState",
    "solve_ground_state",
    "ground_state_on",
    "pohozaev_residuals",
    "sharp_constants",
    "Sign",
    "Verdict",
    "ThresholdReport",
    "critical_exponents",
    "mass",
    "kinetic",
    "energy",
    "scattering_quantity",
    "classify_initial_data",
    # Dynamics
    "Scheme",
    "Outcome",
    "ProxyHint",
    "SolverConfig",
    "Trajectory",
    "step",
    "evolve",
    "scattering_proxy",
    "linear_decay_exponent",
    # Morawetz
    "CutoffProfile",
    "build_cutoffs",
    "verify_cutoff_properties",
    "morawetz_action",
    "morawetz_identity_residual",
    "galilean_shift",
    "interaction_action",
    "coercivity_check",
    # Exceptions
    "NLSKatoError",
    "NLSDomainError",
    "NLSDivergenceError",
    "NLSConfigurationError",
    "NLSSolverError",
    "NLSCacheError",
    "NLSSerializationError",
]
