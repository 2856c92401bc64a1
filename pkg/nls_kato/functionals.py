"""
Conserved quantities, threshold products and variational functions.

Sign convention: the equation is  i u_t + Lap u - V u = s |u|^alpha u  with
s = +1 defocusing and s = -1 focusing, so

    E(u) = 1/2 ||grad u||^2 + 1/2 int V |u|^2 + s/(alpha+2) ||u||_{alpha+2}^{alpha+2}.

Every norm is a radial quadrature from :mod:`nls_kato.grid`.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .exceptions import NLSConfigurationError, NLSDomainError
from .grid import RadialGrid, grad_norm_sq, radial_gradient, radial_integral
from .potentials import PotentialSpec, potential_on_nodes, radial_derivative

logger = logging.getLogger("nlskato.functionals")

ALPHA_MIN: float = 4.0 / 3.0
ALPHA_MAX: float = 4.0
DEFAULT_EQUALITY_TOL: float = 1e-6


# ── Types ────────────────────────────────────────────────────────────────────

class Sign(str, Enum):
    FOCUSING = "focusing"
    DEFOCUSING = "defocusing"

    @property
    def s(self) -> float:
        """Coefficient of the power nonlinearity."""
        return -1.0 if self is Sign.FOCUSING else 1.0


class Verdict(str, Enum):
    BELOW_THRESHOLD = "BelowThreshold"
    AT_THRESHOLD = "AtThreshold"
    ABOVE_GRAD_PRODUCT = "AboveGradProduct"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True, eq=False)
class FieldState:
    """Complex radial field u(r_j) at time *time*.

    Raises:
        NLSConfigurationError: Shape mismatch or non-finite amplitudes.
    """

    grid: RadialGrid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise NLSConfigurationError(
                f"field has shape {values.shape}, grid expects ({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(values)):
            raise NLSConfigurationError("field contains non-finite amplitudes")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def from_function(cls, grid: RadialGrid, func, time: float = 0.0) -> "FieldState":
        return cls(grid, func(grid.nodes), time)

    def scaled(self, factor: complex) -> "FieldState":
        return replace(self, values=factor * self.values)

    def at(self, values: np.ndarray, time: float) -> "FieldState":
        return FieldState(self.grid, values, time)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2


@dataclass
class ThresholdReport:
    """Threshold products of some initial data against the ground state.

    ``margins`` holds the relative distances (threshold - product)/threshold
    for the keys ``energy``, ``grad`` and ``scat``; positive means below.
    """

    energy_product: float
    grad_product: float
    scat_quantity: float
    verdict: Verdict
    margins: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "energy_product": self.energy_product,
            "grad_product": self.grad_product,
            "scat_quantity": self.scat_quantity,
            "verdict": self.verdict.value,
            "margins": dict(self.margins),
            "note": self.note,
        }


# ── Exponents ────────────────────────────────────────────────────────────────

def check_alpha(alpha: float) -> float:
    """Return *alpha* if it lies in the open intercritical range.

    Raises:
        NLSDomainError: alpha outside (4/3, 4).
    """
    if not ALPHA_MIN < alpha < ALPHA_MAX:
        raise NLSDomainError(f"alpha must lie in (4/3, 4), got {alpha!r}")
    return float(alpha)


def critical_exponents(alpha: float):
    """Return ``(gamma_c, sigma_c)``.

    Example::

        critical_exponents(2.0)    # (0.5, 1.0)
    """
    check_alpha(alpha)
    gamma_c = 1.5 - 2.0 / alpha
    sigma_c = (4.0 - alpha) / (3.0 * alpha - 4.0)
    return gamma_c, sigma_c


# ── Norms and energy ─────────────────────────────────────────────────────────

def mass(u: FieldState) -> float:
    return radial_integral(u.density, u.grid)


def lp_power(u: FieldState, alpha: float) -> float:
    """||u||_{alpha+2}^{alpha+2}."""
    return radial_integral(np.abs(u.values) ** (alpha + 2.0), u.grid)


def kinetic(u: FieldState) -> float:
    """||grad u||^2."""
    return grad_norm_sq(u.values, u.grid)


def potential_energy(u: FieldState, spec: PotentialSpec) -> float:
    """int V |u|^2."""
    if spec.is_zero:
        return 0.0
    return radial_integral(potential_on_nodes(spec, u.grid.nodes) * u.density, u.grid)


def energy(u: FieldState, spec: PotentialSpec, sign: Sign, alpha: float) -> float:
    """Conserved energy of the field for the given nonlinearity sign."""
    sign = Sign(sign)
    return (
        0.5 * kinetic(u)
        + 0.5 * potential_energy(u, spec)
        + sign.s / (alpha + 2.0) * lp_power(u, alpha)
    )


def scattering_quantity(u: FieldState, alpha: float) -> float:
    """||u||_{alpha+2}^{alpha+2} ||u||_2^{2 sigma_c}."""
    _, sigma_c = critical_exponents(alpha)
    return lp_power(u, alpha) * mass(u) ** sigma_c


def variance(u: FieldState) -> float:
    """Spatial spread int r^2 |u|^2 / int |u|^2.

    Raises:
        NLSDomainError: Zero field.
    """
    m = mass(u)
    if m == 0.0:
        raise NLSDomainError("variance of the zero field is undefined")
    return radial_integral(u.grid.nodes ** 2 * u.density, u.grid) / m


def virial_second_derivative(u: FieldState, spec: PotentialSpec, sign: Sign, alpha: float) -> float:
    """d^2/dt^2 of int |x|^2 |u|^2 for the current state.

    8 ||grad u||^2 + s 12 alpha/(alpha+2) ||u||^{alpha+2} - 4 int r V' |u|^2
    """
    sign = Sign(sign)
    value = 8.0 * kinetic(u) + sign.s * 12.0 * alpha / (alpha + 2.0) * lp_power(u, alpha)
    if not spec.is_zero:
        r = u.grid.nodes
        value -= 4.0 * radial_integral(r * radial_derivative(spec, r) * u.density, u.grid)
    return value


# ── Thresholds ───────────────────────────────────────────────────────────────

def classify_initial_data(u0: FieldState, gs, spec: PotentialSpec,
                          equality_tol: float = DEFAULT_EQUALITY_TOL) -> ThresholdReport:
    """Place *u0* relative to the ground-state thresholds (focusing energy).

    Rules, in order:

    * AtThreshold      |E M^sc - E0 M(Q)^sc| <= tol * threshold and the
                       gradient product does not exceed its threshold
                       beyond *equality_tol*;
    * BelowThreshold   both products below their thresholds by more than tol;
    * AboveGradProduct gradient product at or above its threshold;
    * Indeterminate    otherwise.

    Example::

        report = classify_initial_data(u0.scaled(0.5), gs, PotentialSpec.zero())
        report.verdict      # Verdict.BELOW_THRESHOLD
    """
    sigma_c = gs.sigma_c
    alpha = gs.alpha
    m = mass(u0)
    e = energy(u0, spec, Sign.FOCUSING, alpha)
    e_prod = e * m ** sigma_c
    g_prod = np.sqrt(kinetic(u0)) * m ** (sigma_c / 2.0)
    s_prod = lp_power(u0, alpha) * m ** sigma_c

    thr_e, thr_g, thr_s = gs.threshold_energy, gs.threshold_grad, gs.threshold_scat
    margins = {
        "energy": (thr_e - e_prod) / thr_e,
        "grad": (thr_g - g_prod) / thr_g,
        "scat": (thr_s - s_prod) / thr_s,
    }

    note = ""
    if abs(e_prod - thr_e) <= equality_tol * thr_e and g_prod < thr_g * (1.0 + equality_tol):
        verdict = Verdict.AT_THRESHOLD
    elif margins["energy"] > equality_tol and margins["grad"] > equality_tol:
        verdict = Verdict.BELOW_THRESHOLD
    elif g_prod >= thr_g:
        verdict = Verdict.ABOVE_GRAD_PRODUCT
        note = "complement of the scattering region; blow-up is not asserted"
    else:
        verdict = Verdict.INDETERMINATE

    logger.debug("classify: E*M^sc=%.6g (thr %.6g) grad=%.6g (thr %.6g) -> %s",
                 e_prod, thr_e, g_prod, thr_g, verdict.value)
    return ThresholdReport(e_prod, g_prod, s_prod, verdict, margins, note)


def lambda_zero(gs) -> float:
    """||grad Q|| ||Q||^sigma_c, the maximizer of G."""
    return gs.threshold_grad


def scattering_bound(gs, rho: float) -> float:
    """(1 - rho)^(3 alpha/2) times the scattering threshold.

    Below-threshold solutions with gradient product at most (1 - rho)
    times its threshold stay under this bound for all time.
    """
    if not 0.0 < rho <= 1.0:
        raise NLSDomainError(f"rho must lie in (0, 1], got {rho!r}")
    return (1.0 - rho) ** (1.5 * gs.alpha) * gs.threshold_scat


# ── Variational functions ────────────────────────────────────────────────────

def variational_G(lam: float, gs) -> float:
    """G(lambda) = lambda^2/2 - C_opt/(alpha+2) lambda^(3 alpha/2)."""
    if lam < 0.0:
        raise NLSDomainError(f"lambda must be non-negative, got {lam!r}")
    a = gs.alpha
    return 0.5 * lam ** 2 - gs.c_opt / (a + 2.0) * lam ** (1.5 * a)


def variational_H(lam_ratio: float, alpha: float) -> float:
    """H(l) = 3a/(3a-4) l^2 - 4/(3a-4) l^(3a/2); H(0) = 0, H(1) = 1."""
    if lam_ratio < 0.0:
        raise NLSDomainError(f"lambda ratio must be non-negative, got {lam_ratio!r}")
    d = 3.0 * alpha - 4.0
    return 3.0 * alpha / d * lam_ratio ** 2 - 4.0 / d * lam_ratio ** (1.5 * alpha)


def coercivity_nu(rho: float, alpha: float) -> float:
    """nu(rho) = 1 - (1 - rho)^((3a-4)/(3a))."""
    if not 0.0 < rho <= 1.0:
        raise NLSDomainError(f"rho must lie in (0, 1], got {rho!r}")
    return 1.0 - (1.0 - rho) ** ((3.0 * alpha - 4.0) / (3.0 * alpha))


def rho_from_energy_margin(vartheta: float, alpha: float) -> float:
    """rho such that energy product <= (1 - vartheta) E0 M(Q)^sc forces the
    gradient product below (1 - rho) times its threshold.

    Solves H(1 - rho) = 1 - vartheta on (0, 1).
    """
    if not 0.0 < vartheta < 1.0:
        raise NLSDomainError(f"vartheta must lie in (0, 1), got {vartheta!r}")
    target = 1.0 - vartheta
    lam = brentq(lambda x: variational_H(x, alpha) - target, 0.0, 1.0, xtol=1e-14)
    return 1.0 - lam


def gn_ratio(f: FieldState, alpha: float) -> float:
    """||f||_{a+2}^{a+2} / (||grad f||^{3a/2} ||f||^{(4-a)/2}).

    Raises:
        NLSDomainError: Zero field.
    """
    m = mass(f)
    if m == 0.0:
        raise NLSDomainError("GN ratio of the zero field is undefined")
    grad = np.sqrt(kinetic(f))
    return lp_power(f, alpha) / (grad ** (1.5 * alpha) * m ** ((4.0 - alpha) / 4.0))


def refined_gn_check(f: FieldState, xi_magnitude: float, alpha: float, gs):
    """Both sides of the refined GN inequality for the boost e^{i x.xi} f.

    ||grad(e^{i x.xi} f)||^2 = ||grad f||^2 + |xi|^2 ||f||^2 + 2 xi.P(f) and the
    momentum P(f) of a radial field is zero.

    Returns:
        ``(lhs, rhs)`` with lhs = ||f||_{a+2}^{a+2}.
    """
    m = mass(f)
    if m == 0.0:
        raise NLSDomainError("refined GN check needs a nonzero field")
    _, sigma_c = critical_exponents(alpha)
    k = kinetic(f)
    ratio = np.sqrt(k) * m ** (sigma_c / 2.0) / gs.threshold_grad
    boosted = k + xi_magnitude ** 2 * m
    rhs = (2.0 * (alpha + 2.0) / (3.0 * alpha)) * ratio ** ((3.0 * alpha - 4.0) / 2.0) * boosted
    return lp_power(f, alpha), rhs


def unlocalized_coercivity(f: FieldState, alpha: float, rho: float):
    """Both sides of ||grad f||^2 - 3a/(2(a+2)) ||f||^{a+2} >= nu ||grad f||^2.

    The bound is guaranteed when scattering_quantity(f) is at most
    (1 - rho) times the scattering threshold.

    Returns:
        ``(lhs, rhs)``.
    """
    k = kinetic(f)
    lhs = k - 3.0 * alpha / (2.0 * (alpha + 2.0)) * lp_power(f, alpha)
    return lhs, coercivity_nu(rho, alpha) * k
