"""
Potential families, their norms, and the hypotheses placed on them.

Three radial families are supported:

    Yukawa          V(r) = c r^-sigma e^(-a r),  0 < sigma < 2, a > 0
    InversePower    V(r) = c r^-sigma,           c > 0, 0 < sigma < 2
    Zero            V = 0

Norms come in two flavours: closed forms for the Yukawa family (through
the Gamma function) and QUADPACK quadrature that works for any family.
The quadrature treats the integrable power singularity at the origin with
an algebraic weight, so the integrands handed to scipy stay smooth.

Usage::

    spec = PotentialSpec.yukawa(c=1.0, sigma=0.5, a=1.0)
    report = validate_assumptions(spec, Theorem.BELOW_THRESHOLD)
    if not report.satisfied:
        print("\\n".join(report.messages))
"""

import logging
from dataclasses import dataclass, field, asdict
from enum import Enum

import numpy as np
from scipy import integrate
from scipy.special import gamma as scipy_gamma

from .exceptions import NLSDomainError, NLSDivergenceError

logger = logging.getLogger("nlskato.potentials")

FOUR_PI: float = 4.0 * np.pi
KATO_SMALLNESS: float = 4.0 * np.pi
SAMPLED_Q: tuple = (1.5, 2.0, 4.0, np.inf)


# ── Types ────────────────────────────────────────────────────────────────────

class PotentialFamily(str, Enum):
    YUKAWA = "yukawa"
    INVERSE_POWER = "inverse_power"
    ZERO = "zero"


class Theorem(str, Enum):
    """Results whose hypotheses on V can be checked."""

    SCATTERING_CRITERION_FOCUSING = "scattering-criterion-focusing"
    SCATTERING_CRITERION_DEFOCUSING = "scattering-criterion-defocusing"
    BELOW_THRESHOLD = "below-threshold"
    AT_THRESHOLD = "at-threshold"
    INVERSE_POWER_THEOREMS = "inverse-power"


@dataclass(frozen=True)
class PotentialSpec:
    """Parametrized radial potential.

    Prefer the constructors :meth:`yukawa`, :meth:`inverse_power` and
    :meth:`zero` to building the dataclass by hand.

    Raises:
        NLSDomainError: Parameters outside the admissible range of the family.

    Example::

        spec = PotentialSpec.yukawa(c=-0.5, sigma=1.0, a=1.0)
        spec.is_attractive      # True
    """

    family: PotentialFamily
    c: float = 0.0
    sigma: float = 0.0
    a: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", PotentialFamily(self.family))
        for name in ("c", "sigma", "a"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise NLSDomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

        if self.family is PotentialFamily.YUKAWA:
            if not 0.0 < self.sigma < 2.0:
                raise NLSDomainError(f"Yukawa sigma must lie in (0, 2), got {self.sigma}")
            if self.a <= 0.0:
                raise NLSDomainError(f"Yukawa decay rate a must be positive, got {self.a}")
        elif self.family is PotentialFamily.INVERSE_POWER:
            if self.c <= 0.0:
                raise NLSDomainError(f"inverse-power amplitude c must be positive, got {self.c}")
            if not 0.0 < self.sigma < 2.0:
                raise NLSDomainError(
                    f"inverse-power sigma must lie in (0, 2), got {self.sigma}"
                )

    @classmethod
    def yukawa(cls, c: float, sigma: float, a: float) -> "PotentialSpec":
        return cls(PotentialFamily.YUKAWA, c, sigma, a)

    @classmethod
    def inverse_power(cls, c: float, sigma: float) -> "PotentialSpec":
        return cls(PotentialFamily.INVERSE_POWER, c, sigma, 0.0)

    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls(PotentialFamily.ZERO)

    @property
    def is_zero(self) -> bool:
        return self.family is PotentialFamily.ZERO or self.c == 0.0

    @property
    def is_attractive(self) -> bool:
        return self.c < 0.0 and self.family is not PotentialFamily.ZERO

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PotentialSpec":
        return cls(
            PotentialFamily(d["family"]),
            float(d.get("c", 0.0)),
            float(d.get("sigma", 0.0)),
            float(d.get("a", 0.0)),
        )


@dataclass(frozen=True)
class QuadSettings:
    """Tolerances for QUADPACK integration and the Kato radius sweep.

    Args:
        epsrel:  Relative tolerance passed to :func:`scipy.integrate.quad`.
        epsabs:  Absolute tolerance.
        limit:   Maximum number of subintervals.
        n_radii: Radii sampled (besides the origin) for the Kato profile.
        r_split: Where the near-origin piece ends and the tail begins.
    """

    epsrel: float = 1e-9
    epsabs: float = 0.0
    limit: int = 200
    n_radii: int = 64
    r_split: float = 1.0


@dataclass
class AssumptionReport:
    """Outcome of :func:`validate_assumptions`.

    ``satisfied`` is true when every check in ``required`` passed.  The
    remaining fields are always filled so reports for different theorems
    can be compared side by side.
    """

    theorem: Theorem
    in_kato_class: bool
    in_L_3_2: bool
    kato_norm_of_negative_part: float
    smallness_4pi_satisfied: bool
    nonnegative: bool
    radially_symmetric: bool
    radial_derivative_nonpositive: bool
    radial_derivative_Lq_range: list = field(default_factory=list)
    required: tuple = ()
    satisfied: bool = False
    messages: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["theorem"] = self.theorem.value
        d["radial_derivative_Lq_range"] = [
            ["inf" if np.isinf(q) else q, ok] for q, ok in self.radial_derivative_Lq_range
        ]
        return d


# ── Evaluation ───────────────────────────────────────────────────────────────

def _positive_radii(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise NLSDomainError("potentials are singular at r = 0; radius must be positive")
    return r


def _scalar_or_array(values: np.ndarray):
    return float(values) if values.ndim == 0 else values


def eval_potential(spec: PotentialSpec, r):
    """Return V(r) for a positive radius or an array of radii.

    Raises:
        NLSDomainError: Any radius is <= 0.

    Example::

        eval_potential(PotentialSpec.yukawa(1.0, 1.0, 1.0), 1.0)   # 0.3679
    """
    r = _positive_radii(r)
    if spec.family is PotentialFamily.ZERO:
        return _scalar_or_array(np.zeros_like(r))
    values = spec.c * r ** (-spec.sigma)
    if spec.family is PotentialFamily.YUKAWA:
        values = values * np.exp(-spec.a * r)
    return _scalar_or_array(values)


def radial_derivative(spec: PotentialSpec, r):
    """Return dV/dr at a positive radius or an array of radii.

    Raises:
        NLSDomainError: Any radius is <= 0.
    """
    r = _positive_radii(r)
    if spec.family is PotentialFamily.ZERO:
        return _scalar_or_array(np.zeros_like(r))
    if spec.family is PotentialFamily.YUKAWA:
        values = spec.c * np.exp(-spec.a * r) * (
            -spec.sigma * r ** (-spec.sigma - 1.0) - spec.a * r ** (-spec.sigma)
        )
    else:
        values = -spec.c * spec.sigma * r ** (-spec.sigma - 1.0)
    return _scalar_or_array(values)


def potential_on_nodes(spec: PotentialSpec, nodes: np.ndarray) -> np.ndarray:
    """V sampled on grid nodes (all positive)."""
    return np.asarray(eval_potential(spec, nodes), dtype=float)


# ── Closed forms ─────────────────────────────────────────────────────────────

def _require_yukawa(spec: PotentialSpec) -> None:
    if spec.family is not PotentialFamily.YUKAWA:
        raise NLSDomainError(f"closed forms exist for the Yukawa family only, got {spec.family.value}")


def yukawa_lq_norm_closed(spec: PotentialSpec, q: float) -> float:
    """Closed-form L^q norm of a Yukawa potential.

    ||V||_q = |c| [4 pi (a q)^(q sigma - 3) Gamma(3 - q sigma)]^(1/q)

    Raises:
        NLSDomainError:     Not a Yukawa spec, or q < 1.
        NLSDivergenceError: q*sigma >= 3 (non-integrable at the origin).
    """
    _require_yukawa(spec)
    if not q >= 1.0:
        raise NLSDomainError(f"q must be >= 1, got {q}")
    if q * spec.sigma >= 3.0:
        raise NLSDivergenceError(
            f"L^{q} norm diverges: q*sigma = {q * spec.sigma} must be < 3"
        )
    if spec.c == 0.0:
        return 0.0
    inner = FOUR_PI * (spec.a * q) ** (q * spec.sigma - 3.0) * scipy_gamma(3.0 - q * spec.sigma)
    return abs(spec.c) * inner ** (1.0 / q)


def yukawa_kato_norm_closed(spec: PotentialSpec) -> float:
    """Closed-form Kato norm of a Yukawa potential.

    The supremum of the Kato profile sits at the origin, where it equals
    4 pi |c| a^(sigma - 2) Gamma(2 - sigma).

    Raises:
        NLSDomainError: Not a Yukawa spec, or sigma outside (0, 2).
    """
    _require_yukawa(spec)
    if not 0.0 < spec.sigma < 2.0:
        raise NLSDomainError(f"sigma must lie in (0, 2), got {spec.sigma}")
    return FOUR_PI * abs(spec.c) * spec.a ** (spec.sigma - 2.0) * scipy_gamma(2.0 - spec.sigma)


# ── Quadrature ───────────────────────────────────────────────────────────────

def _quad(func, lo, hi, quad: QuadSettings, **kwargs) -> float:
    value, _err = integrate.quad(
        func, lo, hi,
        epsabs=quad.epsabs, epsrel=quad.epsrel, limit=quad.limit, **kwargs,
    )
    return value


def _power_exp_integral(power: float, rate: float, lo: float, hi: float,
                        quad: QuadSettings) -> float:
    """Integral of r**power * exp(-rate*r) over [lo, hi], hi may be inf.

    The near-origin piece carries r**power as an algebraic weight.
    """
    total = 0.0
    split = min(max(quad.r_split, lo), hi)
    if lo == 0.0 and split > 0.0:
        total += _quad(lambda r: np.exp(-rate * r), 0.0, split, quad,
                       weight="alg", wvar=(power, 0.0))
    elif split > lo:
        total += _quad(lambda r: r ** power * np.exp(-rate * r), lo, split, quad)
    if hi > split:
        total += _quad(lambda r: r ** power * np.exp(-rate * r), split, hi, quad)
    return total


def lq_norm_numeric(spec: PotentialSpec, q: float, quad: QuadSettings = QuadSettings()) -> float:
    """||V||_q by radial quadrature of 4 pi |V|^q r^2.

    ``q = inf`` returns the supremum, which is infinite for both singular
    families.

    Raises:
        NLSDomainError:     q < 1.
        NLSDivergenceError: The integral diverges (inverse powers always do).
    """
    if not q >= 1.0:
        raise NLSDomainError(f"q must be >= 1, got {q}")
    if spec.is_zero:
        return 0.0
    if np.isinf(q):
        return np.inf
    if spec.family is PotentialFamily.INVERSE_POWER:
        raise NLSDivergenceError(
            "inverse-power potentials lie in no L^q: the origin needs q*sigma < 3, the tail q*sigma > 3"
        )
    power = 2.0 - q * spec.sigma
    if power <= -1.0:
        raise NLSDivergenceError(f"L^{q} norm diverges at the origin: q*sigma = {q * spec.sigma} >= 3")
    integral = _power_exp_integral(power, spec.a * q, 0.0, np.inf, quad)
    return abs(spec.c) * (FOUR_PI * integral) ** (1.0 / q)


def kato_profile(spec: PotentialSpec, radii, quad: QuadSettings = QuadSettings()) -> np.ndarray:
    """Evaluate g(x) = sup-candidate of the Kato integral at |x| in *radii*.

    g(x) = 4 pi [ (1/x) int_0^x |V| r^2 dr + int_x^inf |V| r dr ],
    g(0) = 4 pi int_0^inf |V| r dr.

    Raises:
        NLSDivergenceError: The tail integral diverges.
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(radii < 0.0):
        raise NLSDomainError("Kato profile radii must be non-negative")
    if spec.is_zero:
        return np.zeros_like(radii)
    if spec.family is PotentialFamily.INVERSE_POWER:
        raise NLSDivergenceError(
            "Kato integral diverges: int |V| r dr ~ int r^(1-sigma) dr is infinite for sigma < 2"
        )

    rate = spec.a
    out = np.empty_like(radii)
    for i, x in enumerate(radii):
        outer = _power_exp_integral(1.0 - spec.sigma, rate, x, np.inf, quad)
        inner = 0.0
        if x > 0.0:
            inner = _power_exp_integral(2.0 - spec.sigma, rate, 0.0, x, quad) / x
        out[i] = FOUR_PI * abs(spec.c) * (inner + outer)
    return out


def kato_norm_numeric(spec: PotentialSpec, quad: QuadSettings = QuadSettings()):
    """Kato norm as the supremum of :func:`kato_profile` over a radius sweep.

    Returns:
        ``(norm, maximizing_radius)``.

    Raises:
        NLSDivergenceError: The potential is not in the Kato class.

    Example::

        norm, where = kato_norm_numeric(PotentialSpec.yukawa(1.0, 1.0, 1.0))
        # norm ~ 4*pi, where == 0.0
    """
    if spec.is_zero:
        return 0.0, 0.0
    scale = 1.0 / spec.a if spec.family is PotentialFamily.YUKAWA else 1.0
    radii = np.concatenate(
        ([0.0], np.geomspace(1e-3 * scale, 50.0 * scale, quad.n_radii))
    )
    g = kato_profile(spec, radii, quad)
    k = int(np.argmax(g))
    logger.debug("Kato sweep over %d radii: max %.6g at r=%.3g", radii.size, g[k], radii[k])
    return float(g[k]), float(radii[k])


def negative_part_kato_norm(spec: PotentialSpec, quad: QuadSettings = QuadSettings()) -> float:
    """||V_-||_K; zero unless the potential is attractive."""
    if not spec.is_attractive:
        return 0.0
    if spec.family is PotentialFamily.YUKAWA:
        return kato_norm_numeric(spec, quad)[0]
    raise NLSDivergenceError("negative part is not in the Kato class")


# ── Hypotheses ───────────────────────────────────────────────────────────────

_CRITERION_CHECKS = (
    "radially_symmetric", "in_kato_class", "in_L_3_2", "nonnegative",
    "radial_derivative_nonpositive", "radial_derivative_L_3_2",
)

REQUIRED_CHECKS: dict = {
    Theorem.SCATTERING_CRITERION_FOCUSING: _CRITERION_CHECKS,
    Theorem.BELOW_THRESHOLD: _CRITERION_CHECKS,
    Theorem.AT_THRESHOLD: _CRITERION_CHECKS,
    Theorem.SCATTERING_CRITERION_DEFOCUSING: (
        "radially_symmetric", "in_kato_class", "in_L_3_2", "smallness_4pi",
        "radial_derivative_nonpositive", "radial_derivative_L_3_2",
    ),
    Theorem.INVERSE_POWER_THEOREMS: ("inverse_power_family", "c_positive", "sigma_range"),
}

_CHECK_MESSAGES: dict = {
    "radially_symmetric": "V must be radially symmetric",
    "in_kato_class": "V must lie in the Kato class K",
    "in_L_3_2": "V must lie in L^{3/2}",
    "nonnegative": "V must be non-negative",
    "smallness_4pi": "the Kato norm of V_- must be below 4*pi",
    "radial_derivative_nonpositive": "d_r V must be non-positive",
    "radial_derivative_L_3_2": "d_r V must lie in L^{3/2}",
    "inverse_power_family": "V must be an inverse-power potential c|x|^-sigma",
    "c_positive": "the inverse-power amplitude c must be positive",
    "sigma_range": "the inverse-power exponent sigma must lie in (0, 2)",
}


def radial_derivative_in_lq(spec: PotentialSpec, q: float,
                            quad: QuadSettings = QuadSettings()) -> bool:
    """Decide d_r V in L^q.

    Near the origin |d_r V| ~ r^-(sigma+1), so membership needs
    q*(sigma+1) < 3 there; the remainder is integrated on [delta, inf).
    q = inf needs boundedness, which fails for every singular family.
    """
    if spec.is_zero:
        return True
    exponent = spec.sigma + 1.0
    if np.isinf(q):
        return False
    if q * exponent >= 3.0:
        return False
    if spec.family is PotentialFamily.INVERSE_POWER:
        # tail ~ r^(2 - q(sigma+1)) needs q(sigma+1) > 3
        return False
    delta = min(quad.r_split, 1.0 / spec.a)
    tail = _quad(lambda r: abs(radial_derivative(spec, r)) ** q * r * r, delta, np.inf, quad)
    return bool(np.isfinite(tail))


def validate_assumptions(spec: PotentialSpec, theorem: Theorem,
                         quad: QuadSettings = QuadSettings()) -> AssumptionReport:
    """Check every hypothesis *theorem* places on V.

    Failures are reported in the returned :class:`AssumptionReport`;
    nothing is raised.

    Example::

        report = validate_assumptions(PotentialSpec.yukawa(-1.0, 1.0, 1.0),
                                      Theorem.BELOW_THRESHOLD)
        report.nonnegative     # False
        report.satisfied       # False
    """
    theorem = Theorem(theorem)
    checks: dict = {}

    try:
        kato_norm_numeric(spec, quad)
        checks["in_kato_class"] = True
    except NLSDivergenceError:
        checks["in_kato_class"] = False

    try:
        checks["in_L_3_2"] = bool(np.isfinite(lq_norm_numeric(spec, 1.5, quad)))
    except NLSDivergenceError:
        checks["in_L_3_2"] = False

    try:
        kato_neg = negative_part_kato_norm(spec, quad)
    except NLSDivergenceError:
        kato_neg = np.inf
    checks["smallness_4pi"] = bool(kato_neg < KATO_SMALLNESS)
    checks["nonnegative"] = spec.c >= 0.0 or spec.family is PotentialFamily.ZERO
    checks["radially_symmetric"] = True

    sample = np.geomspace(1e-4, 1e3, 400)
    checks["radial_derivative_nonpositive"] = bool(np.all(radial_derivative(spec, sample) <= 0.0))

    lq_range = [(q, radial_derivative_in_lq(spec, q, quad)) for q in SAMPLED_Q]
    checks["radial_derivative_L_3_2"] = lq_range[0][1]

    checks["inverse_power_family"] = spec.family is PotentialFamily.INVERSE_POWER
    checks["c_positive"] = spec.c > 0.0
    checks["sigma_range"] = 0.0 < spec.sigma < 2.0

    required = REQUIRED_CHECKS[theorem]
    messages = [_CHECK_MESSAGES[name] for name in required if not checks[name]]
    for q, ok in lq_range[1:]:
        if not ok:
            label = "inf" if np.isinf(q) else f"{q:g}"
            messages.append(f"note: d_r V is not in L^{label} (reported, not required)")

    report = AssumptionReport(
        theorem=theorem,
        in_kato_class=checks["in_kato_class"],
        in_L_3_2=checks["in_L_3_2"],
        kato_norm_of_negative_part=float(kato_neg),
        smallness_4pi_satisfied=checks["smallness_4pi"],
        nonnegative=bool(checks["nonnegative"]),
        radially_symmetric=True,
        radial_derivative_nonpositive=checks["radial_derivative_nonpositive"],
        radial_derivative_Lq_range=lq_range,
        required=tuple(required),
        satisfied=all(checks[name] for name in required),
        messages=messages,
    )
    logger.debug("validate_assumptions(%s, %s) -> satisfied=%s", spec.family.value,
                 theorem.value, report.satisfied)
    return report
