"""
Ground state Q of  -Q'' - (2/r) Q' + Q - Q^(alpha+1) = 0  by shooting.

The radial ODE is written as the first-order system

    Q' = P
    P' = -2P/r + Q - |Q|^alpha Q

and integrated with classical RK4 on the grid step, starting at r = h from
the series Q0 + a2 r^2 + a4 r^4.  Q(0) is bisected between shots that
undershoot (Q' turns positive, or the shot never crosses zero) and shots
that overshoot (Q crosses zero).  The converged lower and upper shots
agree out to some radius; from there on the profile continues with the
exact decaying solution of the linearized equation, Q_m (r_m/r) e^-(r-r_m).

Usage::

    grid = RadialGrid(r_max=20.0, n_points=4096)
    gs = solve_ground_state(2.0, grid)
    consts = sharp_constants(gs)
"""

import csv
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .cache import CacheKey, cached_profile
from .exceptions import NLSConfigurationError, NLSSolverError
from .functionals import check_alpha, critical_exponents
from .grid import RadialGrid, radial_integral

logger = logging.getLogger("nlskato.groundstate")

# ── Constants ────────────────────────────────────────────────────────────────

DEFAULT_TOL: float = 1e-8
BISECTION_TOL: float = 1e-12
MAX_Q0: float = 1e4
TAIL_MATCH_TOL: float = 1e-6

_UNDERSHOOT = 0
_OVERSHOOT = 1


# ── Types ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class GroundState:
    """Converged ground-state profile with its norms and constants.

    Attributes:
        q_values:  Q(r_j) at the grid nodes.
        dq_values: Q'(r_j) from the shooting integration.
        q0:        Q(0).
        mass:      ||Q||_2^2.
        grad_sq:   ||grad Q||_2^2.
        lp_norm:   ||Q||_{alpha+2}^{alpha+2}.
        c_opt:     Sharp Gagliardo-Nirenberg constant.
        e0:        Free energy E0(Q).
    """

    alpha: float
    grid: RadialGrid
    q_values: np.ndarray
    dq_values: np.ndarray
    q0: float
    mass: float
    grad_sq: float
    lp_norm: float
    c_opt: float
    e0: float
    sigma_c: float
    gamma_c: float
    tol: float = DEFAULT_TOL

    @property
    def threshold_energy(self) -> float:
        return self.e0 * self.mass ** self.sigma_c

    @property
    def threshold_grad(self) -> float:
        return np.sqrt(self.grad_sq) * self.mass ** (self.sigma_c / 2.0)

    @property
    def threshold_scat(self) -> float:
        return self.lp_norm * self.mass ** self.sigma_c

    @property
    def lambda_zero(self) -> float:
        """Maximizer of G; equal to threshold_grad."""
        return self.threshold_grad

    def summary(self) -> dict:
        """Scalars for the JSON run summary."""
        c = sharp_constants(self)
        return {
            "alpha": self.alpha,
            "r_max": self.grid.r_max,
            "n_points": self.grid.n_points,
            "q0": self.q0,
            "mass": self.mass,
            "grad_sq": self.grad_sq,
            "lp_norm": self.lp_norm,
            "sigma_c": self.sigma_c,
            "gamma_c": self.gamma_c,
            **c._asdict(),
        }


class SharpConstants(NamedTuple):
    c_opt: float
    e0_q: float
    threshold_energy: float
    threshold_grad: float
    threshold_scat: float


# ── Shooting ─────────────────────────────────────────────────────────────────

def _series_start(q0: float, alpha: float, r: float):
    a2 = q0 * (1.0 - q0 ** alpha) / 6.0
    a4 = (1.0 - (alpha + 1.0) * q0 ** alpha) * a2 / 20.0
    q = q0 + a2 * r * r + a4 * r ** 4
    p = 2.0 * a2 * r + 4.0 * a4 * r ** 3
    return q, p


def _shoot(q0: float, alpha: float, grid: RadialGrid):
    """Integrate one shot; stop at the first sign of over/undershoot.

    Returns:
        ``(q, p, kind)`` where q and p hold NaN past the stopping node.
    """
    n = grid.n_points
    h = grid.spacing
    qs = np.full(n, np.nan)
    ps = np.full(n, np.nan)

    def f(r, q, p):
        return -2.0 * p / r + q - abs(q) ** alpha * q

    q, p = _series_start(q0, alpha, h)
    qs[0], ps[0] = q, p
    for j in range(1, n):
        r = j * h
        k1q, k1p = p, f(r, q, p)
        k2q, k2p = p + 0.5 * h * k1p, f(r + 0.5 * h, q + 0.5 * h * k1q, p + 0.5 * h * k1p)
        k3q, k3p = p + 0.5 * h * k2p, f(r + 0.5 * h, q + 0.5 * h * k2q, p + 0.5 * h * k2p)
        k4q, k4p = p + h * k3p, f(r + h, q + h * k3q, p + h * k3p)
        q += h * (k1q + 2.0 * k2q + 2.0 * k3q + k4q) / 6.0
        p += h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
        qs[j], ps[j] = q, p
        if q < 0.0:
            return qs, ps, _OVERSHOOT
        if p > 0.0:
            return qs, ps, _UNDERSHOOT
    return qs, ps, _UNDERSHOOT


def _bracket(alpha: float, grid: RadialGrid):
    lo, hi = 1.0, 2.0
    while True:
        shot = _shoot(hi, alpha, grid)
        if shot[2] == _OVERSHOOT:
            return lo, hi
        lo, hi = hi, 2.0 * hi
        if hi > MAX_Q0:
            raise NLSConfigurationError(
                f"no overshooting Q(0) below {MAX_Q0:g} for alpha={alpha}; "
                f"r_max={grid.r_max} is too small to separate the shots"
            )


def _match_tail(lo_shot, hi_shot, grid: RadialGrid):
    """Join the agreeing part of two shots with the exponential tail."""
    q_lo, p_lo, _ = lo_shot
    q_hi, p_hi, _ = hi_shot
    with np.errstate(invalid="ignore"):
        ok = (
            (q_lo > 0.0) & (q_hi > 0.0) & (p_lo < 0.0) & (p_hi < 0.0)
            & (np.abs(q_hi - q_lo) <= TAIL_MATCH_TOL * q_lo)
        )
    m = grid.n_points - 1 if ok.all() else int(np.argmin(ok)) - 1
    if m < 1:
        raise NLSSolverError("bracketing shots disagree immediately; shooting did not converge")

    q = 0.5 * (q_lo + q_hi)
    p = 0.5 * (p_lo + p_hi)
    r = grid.nodes
    if m < grid.n_points - 1:
        r_m = r[m]
        tail = slice(m + 1, None)
        q[tail] = q[m] * (r_m / r[tail]) * np.exp(-(r[tail] - r_m))
        p[tail] = -q[tail] * (1.0 + 1.0 / r[tail])
    logger.debug("Tail matched at r=%.4f (index %d of %d)", r[m], m, grid.n_points)
    return q, p


def _assemble(alpha: float, grid: RadialGrid, q0: float,
              q: np.ndarray, p: np.ndarray, tol: float) -> GroundState:
    gamma_c, sigma_c = critical_exponents(alpha)
    mass = radial_integral(q * q, grid)
    grad_sq = radial_integral(p * p, grid)
    lp_norm = radial_integral(np.abs(q) ** (alpha + 2.0), grid)
    c_opt = (2.0 * (alpha + 2.0) / (3.0 * alpha)) * (
        np.sqrt(grad_sq) * mass ** (sigma_c / 2.0)
    ) ** (-(3.0 * alpha - 4.0) / 2.0)
    e0 = (3.0 * alpha - 4.0) / (6.0 * alpha) * grad_sq
    q.setflags(write=False)
    p.setflags(write=False)
    return GroundState(
        alpha=float(alpha), grid=grid, q_values=q, dq_values=p, q0=float(q0),
        mass=mass, grad_sq=grad_sq, lp_norm=lp_norm, c_opt=float(c_opt),
        e0=e0, sigma_c=sigma_c, gamma_c=gamma_c, tol=tol,
    )


def _solve_profile(alpha: float, grid: RadialGrid, tol: float):
    lo, hi = _bracket(alpha, grid)
    logger.debug("Bracket for Q(0): [%g, %g]", lo, hi)
    lo_shot = hi_shot = None
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        shot = _shoot(mid, alpha, grid)
        if shot[2] == _OVERSHOOT:
            hi, hi_shot = mid, shot
        else:
            lo, lo_shot = mid, shot
    lo_shot = lo_shot or _shoot(lo, alpha, grid)
    hi_shot = hi_shot or _shoot(hi, alpha, grid)

    q, p = _match_tail(lo_shot, hi_shot, grid)
    q0 = 0.5 * (lo + hi)
    if np.any(np.diff(q) > 0.0):
        raise NLSSolverError(f"converged profile for alpha={alpha} is not monotone")
    if not q[-1] < tol * q0:
        raise NLSConfigurationError(
            f"Q(r_max)={q[-1]:.3e} is not below tol*Q(0)={tol * q0:.3e}; increase r_max"
        )
    return q0, q, p


# ── Public API ───────────────────────────────────────────────────────────────

def solve_ground_state(alpha: float, grid: RadialGrid, tol: float = DEFAULT_TOL) -> GroundState:
    """Compute the positive radial ground state for exponent *alpha*.

    Args:
        alpha: Nonlinearity exponent in (4/3, 4).
        grid:  Radial grid; r_max around 20 is ample for alpha >= 1.5.
        tol:   Required decay Q(r_max) < tol * Q(0).

    Raises:
        NLSDomainError:        alpha outside (4/3, 4).
        NLSConfigurationError: No bracket, or r_max too small for *tol*.
        NLSSolverError:        Shots never agree, or the profile is not monotone.

    Example::

        gs = solve_ground_state(2.0, RadialGrid(20.0, 4096))
        gs.grad_sq / gs.mass     # ~ 3.0
    """
    check_alpha(alpha)
    q0, q, p = _solve_profile(alpha, grid, tol)
    gs = _assemble(alpha, grid, q0, q, p, tol)
    logger.info("Ground state alpha=%g on %r: Q(0)=%.12g", alpha, grid, q0)
    return gs


def ground_state_on(grid: RadialGrid, alpha: float, tol: float = DEFAULT_TOL,
                    cache_dir: str | None = None) -> GroundState:
    """Like :func:`solve_ground_state`, reusing an on-disk cache when given."""
    if cache_dir is None:
        return solve_ground_state(alpha, grid, tol)
    check_alpha(alpha)
    key = CacheKey(float(alpha), grid.r_max, grid.n_points, float(tol))
    q0, q, p = cached_profile(cache_dir, key, lambda: _solve_profile(alpha, grid, tol))
    return _assemble(alpha, grid, q0, np.array(q), np.array(p), tol)


def pohozaev_residuals(gs: GroundState):
    """Relative residuals of the two Pohozaev identities.

    Returns:
        ``(res1, res2)`` comparing ||Q||^2 with (4-a)/(3a) ||grad Q||^2 and
        with (4-a)/(2(a+2)) ||Q||_{a+2}^{a+2}.
    """
    a = gs.alpha
    res1 = abs(gs.mass - (4.0 - a) / (3.0 * a) * gs.grad_sq) / gs.mass
    res2 = abs(gs.mass - (4.0 - a) / (2.0 * (a + 2.0)) * gs.lp_norm) / gs.mass
    return res1, res2


def sharp_constants(gs: GroundState) -> SharpConstants:
    """Sharp GN constant, E0(Q) and the three threshold products."""
    return SharpConstants(
        c_opt=gs.c_opt,
        e0_q=gs.e0,
        threshold_energy=gs.threshold_energy,
        threshold_grad=gs.threshold_grad,
        threshold_scat=gs.threshold_scat,
    )


def export_profile_csv(gs: GroundState, path: str) -> None:
    """Write the two-column table r, Q."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "Q"])
        for r, q in zip(gs.grid.nodes, gs.q_values):
            writer.writerow([repr(float(r)), repr(float(q))])
    logger.info("Wrote ground-state profile to '%s'", path)
