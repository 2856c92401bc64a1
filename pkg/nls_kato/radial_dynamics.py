"""
Time evolution of radial solutions of  i u_t + Lap u - V u = s |u|^alpha u.

Working variable is v = r u, for which the radial Laplacian becomes d^2/dr^2
with v = 0 at r = 0 and at r_{n+1}.  Two schemes are available:

StrangSplit
    local half-step u <- u exp(-i dt/2 (V + s|u|^alpha)), kinetic step by
    implicit midpoint (I - i dt/2 D2) v' = (I + i dt/2 D2) v, local
    half-step.  |u| is invariant under the local flow, so that step is exact.

CrankNicolsonRelaxed
    one implicit-midpoint solve with the full operator D2 - W, where
    W = V + s phi and phi^{n+1/2} = 2|u^n|^alpha - phi^{n-1/2} is the
    relaxation variable (phi^{-1/2} = |u^0|^alpha).

Both are unitary for the discrete mass, so mass drift measures round-off.
Each step costs one tridiagonal solve (``scipy.linalg.solve_banded``).

Usage::

    cfg = SolverConfig(grid, dt=1e-3, t_end=2.0, sign=Sign.FOCUSING, alpha=2.0)
    traj = evolve(FieldState(grid, gs.q_values), cfg, PotentialSpec.zero())
    traj.outcome        # Outcome.COMPLETED
"""

import csv
import os
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np
from scipy.linalg import solve_banded

from .exceptions import NLSConfigurationError, NLSSolverError
from .functionals import FieldState, Sign, check_alpha, critical_exponents, variance
from .grid import RadialGrid, grad_norm_sq, radial_integral
from .potentials import PotentialSpec, potential_on_nodes
from .utils import ensure_dir

logger = logging.getLogger("nlskato.radial_dynamics")

SERIES_COLUMNS: tuple = (
    "t", "mass", "energy", "grad_norm", "lp_norm", "scat_quantity", "potential_fraction",
)
_COL = {name: i for i, name in enumerate(SERIES_COLUMNS)}

SCATTER_DECAY: float = 0.2
SOLITON_SPREAD: float = 0.05
MIN_SAMPLES_PER_DECADE: int = 5
BOUNDARY_FRACTION: float = 0.1


# ── Types ────────────────────────────────────────────────────────────────────

class Scheme(str, Enum):
    STRANG_SPLIT = "StrangSplit"
    CRANK_NICOLSON_RELAXED = "CrankNicolsonRelaxed"


class Outcome(str, Enum):
    COMPLETED = "Completed"
    BLOWUP_DETECTED = "BlowupDetected"
    TOLERANCE_VIOLATED = "ToleranceViolated"


class ProxyHint(str, Enum):
    SCATTER_LIKE = "ScatterLike"
    SOLITON_LIKE = "SolitonLike"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class SolverConfig:
    """Everything :func:`evolve` needs besides the data and the potential.

    Args:
        grid:                 Spatial grid (must match the data).
        dt:                   Base time step.
        t_end:                Horizon.
        scheme:               :class:`Scheme`.
        sign:                 Focusing or defocusing nonlinearity.
        alpha:                Exponent in (4/3, 4).
        blowup_grad_factor:   Immediate blow-up when ||grad u|| exceeds this
                              multiple of its initial value.
        mass_drift_tol:       Allowed relative mass drift.
        energy_drift_tol:     Allowed relative energy drift.
        nonlinear:            ``False`` evolves the linear flow with V only.
        snapshot_stride:      Steps between stored snapshots (and checkpoints).
        boundary_mass_tol:    Allowed mass fraction in the outer 10% of the grid.
        collapse_grad_factor: Gradient growth that turns a persistent drift
                              violation into BlowupDetected for focusing runs.
        max_refinements:      Times dt may be halved before a drift
                              violation is final.

    Raises:
        NLSConfigurationError: Invalid step, horizon or factors.
    """

    grid: RadialGrid
    dt: float
    t_end: float
    scheme: Scheme = Scheme.STRANG_SPLIT
    sign: Sign = Sign.FOCUSING
    alpha: float = 2.0
    blowup_grad_factor: float = 1e3
    mass_drift_tol: float = 1e-8
    energy_drift_tol: float = 1e-3
    nonlinear: bool = True
    snapshot_stride: int = 10
    boundary_mass_tol: float = 1e-6
    collapse_grad_factor: float = 2.0
    max_refinements: int = 2

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "sign", Sign(self.sign))
        check_alpha(self.alpha)
        if not self.dt > 0.0:
            raise NLSConfigurationError(f"dt must be positive, got {self.dt!r}")
        if not self.t_end > 0.0:
            raise NLSConfigurationError(f"t_end must be positive, got {self.t_end!r}")
        if not self.blowup_grad_factor > 1.0:
            raise NLSConfigurationError("blowup_grad_factor must exceed 1")
        if not 1.0 < self.collapse_grad_factor <= self.blowup_grad_factor:
            raise NLSConfigurationError(
                "collapse_grad_factor must lie in (1, blowup_grad_factor]"
            )
        if self.snapshot_stride < 1 or self.max_refinements < 0:
            raise NLSConfigurationError("snapshot_stride >= 1 and max_refinements >= 0 required")

    def to_dict(self) -> dict:
        return {
            "r_max": self.grid.r_max, "n_points": self.grid.n_points,
            "dt": self.dt, "t_end": self.t_end, "scheme": self.scheme.value,
            "sign": self.sign.value, "alpha": self.alpha,
            "blowup_grad_factor": self.blowup_grad_factor,
            "mass_drift_tol": self.mass_drift_tol,
            "energy_drift_tol": self.energy_drift_tol,
            "nonlinear": self.nonlinear, "snapshot_stride": self.snapshot_stride,
            "boundary_mass_tol": self.boundary_mass_tol,
            "collapse_grad_factor": self.collapse_grad_factor,
            "max_refinements": self.max_refinements,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SolverConfig":
        d = dict(d)
        grid = RadialGrid(d.pop("r_max"), d.pop("n_points"))
        return cls(grid=grid, **d)


@dataclass
class Trajectory:
    """Result of :func:`evolve`.

    ``series`` has one row per step (row 0 is the initial state) with the
    columns in :data:`SERIES_COLUMNS`.
    """

    snapshots: list
    series: np.ndarray
    outcome: Outcome
    cfg: SolverConfig
    final_dt: float
    refinements: int = 0
    message: str = ""
    events: list = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return self.series[:, _COL[name]]

    @property
    def times(self) -> np.ndarray:
        return self.column("t")

    @property
    def final(self) -> FieldState:
        return self.snapshots[-1]

    def max_drifts(self) -> dict:
        """Largest relative mass and energy drift along the series."""
        m = self.column("mass")
        e = self.column("energy")
        m0 = m[0] if m[0] != 0.0 else 1.0
        scale = _energy_scale(e[0], self.column("grad_norm")[0])
        return {
            "mass": float(np.max(np.abs(m - m[0])) / m0),
            "energy": float(np.max(np.abs(e - e[0])) / scale),
        }

    def to_dict(self) -> dict:
        return {
            "cfg": self.cfg.to_dict(),
            "series": self.series,
            "snapshot_times": np.array([s.time for s in self.snapshots]),
            "snapshot_values": np.array([s.values for s in self.snapshots]),
            "outcome": self.outcome.value,
            "final_dt": self.final_dt,
            "refinements": self.refinements,
            "message": self.message,
            "events": list(self.events),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Trajectory":
        cfg = SolverConfig.from_dict(d["cfg"])
        snapshots = [
            FieldState(cfg.grid, np.asarray(v), float(t))
            for t, v in zip(d["snapshot_times"], d["snapshot_values"])
        ]
        return cls(
            snapshots=snapshots,
            series=np.asarray(d["series"], dtype=float),
            outcome=Outcome(d["outcome"]),
            cfg=cfg,
            final_dt=float(d["final_dt"]),
            refinements=int(d["refinements"]),
            message=d.get("message", ""),
            events=list(d.get("events", [])),
        )


# ── Discrete operators ───────────────────────────────────────────────────────

def _energy_scale(e0: float, grad0: float) -> float:
    scale = max(abs(e0), 0.5 * grad0 * grad0)
    return scale if scale > 0.0 else 1.0


class _Stepper:
    """One time step of either scheme on v = r u.

    The relaxed scheme carries phi^{n-1/2} between calls; :meth:`state`
    and :meth:`restore` let :func:`evolve` roll back to a checkpoint.
    """

    def __init__(self, cfg: SolverConfig, spec: PotentialSpec):
        grid = cfg.grid
        self._r = grid.nodes
        self._h2 = grid.spacing ** 2
        self._potential = (
            np.zeros(grid.n_points) if spec.is_zero else potential_on_nodes(spec, grid.nodes)
        )
        self._s = cfg.sign.s if cfg.nonlinear else 0.0
        self._alpha = cfg.alpha
        self._scheme = cfg.scheme
        self._kinetic_lhs: dict = {}
        self._phi = None

    def reset(self, values: np.ndarray) -> None:
        self._phi = np.abs(values) ** self._alpha

    def state(self):
        return None if self._phi is None else self._phi.copy()

    def restore(self, state) -> None:
        self._phi = None if state is None else state.copy()

    def _d2(self, v: np.ndarray) -> np.ndarray:
        out = -2.0 * v
        out[:-1] += v[1:]
        out[1:] += v[:-1]
        return out / self._h2

    def _local(self, u: np.ndarray, tau: float) -> np.ndarray:
        w = self._potential + self._s * np.abs(u) ** self._alpha
        return u * np.exp(-1j * tau * w)

    def _kinetic(self, v: np.ndarray, dt: float) -> np.ndarray:
        ab = self._kinetic_lhs.get(dt)
        if ab is None:
            c = 0.5j * dt / self._h2
            ab = np.empty((3, v.size), dtype=complex)
            ab[0, :] = -c
            ab[1, :] = 1.0 + 2.0 * c
            ab[2, :] = -c
            self._kinetic_lhs[dt] = ab
        rhs = v + 0.5j * dt * self._d2(v)
        return solve_banded((1, 1), ab, rhs, check_finite=False)

    def _relaxed(self, u: np.ndarray, dt: float) -> np.ndarray:
        if self._phi is None:
            self.reset(u)
        phi_half = 2.0 * np.abs(u) ** self._alpha - self._phi
        self._phi = phi_half
        w = self._potential + self._s * phi_half
        v = self._r * u
        c = 0.5j * dt / self._h2
        ab = np.empty((3, v.size), dtype=complex)
        ab[0, :] = -c
        ab[1, :] = 1.0 + 2.0 * c + 0.5j * dt * w
        ab[2, :] = -c
        rhs = v + 0.5j * dt * (self._d2(v) - w * v)
        return solve_banded((1, 1), ab, rhs, check_finite=False) / self._r

    def __call__(self, u: np.ndarray, dt: float) -> np.ndarray:
        if self._scheme is Scheme.CRANK_NICOLSON_RELAXED:
            return self._relaxed(u, dt)
        u = self._local(u, 0.5 * dt)
        u = self._kinetic(self._r * u, dt) / self._r
        return self._local(u, 0.5 * dt)


class _Diagnostics:
    """Per-step series row for a field on a fixed grid."""

    def __init__(self, cfg: SolverConfig, spec: PotentialSpec):
        self._grid = cfg.grid
        self._alpha = cfg.alpha
        self._sigma_c = critical_exponents(cfg.alpha)[1]
        self._s = cfg.sign.s if cfg.nonlinear else 0.0
        self._potential = None if spec.is_zero else potential_on_nodes(spec, cfg.grid.nodes)
        self._outer = cfg.grid.outer_mask(BOUNDARY_FRACTION)

    def row(self, u: np.ndarray, t: float) -> np.ndarray:
        grid = self._grid
        density = np.abs(u) ** 2
        m = radial_integral(density, grid)
        k = grad_norm_sq(u, grid)
        lp = radial_integral(density ** (0.5 * self._alpha + 1.0), grid)
        pe = 0.0 if self._potential is None else 0.5 * radial_integral(self._potential * density, grid)
        e = 0.5 * k + pe + self._s / (self._alpha + 2.0) * lp
        denom = 0.5 * k + abs(pe) + lp / (self._alpha + 2.0)
        frac = abs(pe) / denom if denom > 0.0 else 0.0
        return np.array([t, m, e, np.sqrt(k), lp, lp * m ** self._sigma_c, frac])

    def boundary_fraction(self, u: np.ndarray, m0: float) -> float:
        if m0 == 0.0:
            return 0.0
        w = self._grid.weights[self._outer]
        return float(np.dot(w, np.abs(u[self._outer]) ** 2)) / m0


# ── Public API ───────────────────────────────────────────────────────────────

def step(u: FieldState, cfg: SolverConfig, spec: PotentialSpec) -> FieldState:
    """Advance *u* by one ``cfg.dt``.

    A single step has no trajectory to attach an outcome to, so non-finite
    values raise here; :func:`evolve` records the same event as
    BlowupDetected and returns the steps taken so far.

    Raises:
        NLSConfigurationError: *u* lives on a different grid.
        NLSSolverError:        The step produced non-finite values.
    """
    if u.grid != cfg.grid:
        raise NLSConfigurationError(f"field grid {u.grid!r} differs from solver grid {cfg.grid!r}")
    stepper = _Stepper(cfg, spec)
    stepper.reset(u.values)
    values = stepper(u.values, cfg.dt)
    if not np.all(np.isfinite(values)):
        raise NLSSolverError(f"non-finite amplitudes after one step at t={u.time + cfg.dt:g}")
    return FieldState(cfg.grid, values, u.time + cfg.dt)


def evolve(u0: FieldState, cfg: SolverConfig, spec: PotentialSpec) -> Trajectory:
    """Evolve *u0* to ``cfg.t_end`` with conservation monitoring.

    Outcomes:

    * BlowupDetected immediately on non-finite values or when ||grad u||
      exceeds ``blowup_grad_factor`` times its initial value;
    * a mass or energy drift violation re-integrates from the last
      checkpoint with dt/2, dt/4, ... (``max_refinements`` times); if it
      persists the outcome is BlowupDetected for focusing runs whose
      gradient grew by ``collapse_grad_factor``, otherwise
      ToleranceViolated;
    * ToleranceViolated when more than ``boundary_mass_tol`` of the mass
      reaches the outer tenth of the grid;
    * Completed otherwise.

    Raises:
        NLSConfigurationError: *u0* lives on a different grid.
    """
    if u0.grid != cfg.grid:
        raise NLSConfigurationError(f"field grid {u0.grid!r} differs from solver grid {cfg.grid!r}")

    stepper = _Stepper(cfg, spec)
    diag = _Diagnostics(cfg, spec)
    values = u0.values.copy()
    stepper.reset(values)

    first = diag.row(values, u0.time)
    rows = [first]
    snapshots = [FieldState(cfg.grid, values.copy(), u0.time)]
    m0, e0, g0 = first[_COL["mass"]], first[_COL["energy"]], first[_COL["grad_norm"]]
    m_scale = m0 if m0 > 0.0 else 1.0
    e_scale = _energy_scale(e0, g0)

    t_end = u0.time + cfg.t_end
    t_eps = 1e-12 * max(1.0, abs(t_end))
    level = 0
    dt = cfg.dt
    events: list = []
    checkpoint = (values.copy(), u0.time, stepper.state(), len(rows), len(snapshots))
    t_base, k = u0.time, 0
    t = t_base
    outcome, message = Outcome.COMPLETED, ""

    logger.info("evolve: %s %s alpha=%g dt=%g t_end=%g on %r", cfg.scheme.value,
                cfg.sign.value, cfg.alpha, cfg.dt, cfg.t_end, cfg.grid)

    while t < t_end - t_eps:
        h = min(dt, t_end - t)
        values = stepper(values, h)
        k += 1
        t = t_end if h < dt else t_base + k * dt

        if not np.all(np.isfinite(values)):
            outcome, message = Outcome.BLOWUP_DETECTED, f"non-finite amplitudes at t={t:.6g}"
            break
        row = diag.row(values, t)
        rows.append(row)
        grad = row[_COL["grad_norm"]]
        if g0 > 0.0 and grad > cfg.blowup_grad_factor * g0:
            outcome = Outcome.BLOWUP_DETECTED
            message = f"||grad u|| grew by {grad / g0:.3g} at t={t:.6g}"
            break

        if diag.boundary_fraction(values, m_scale) > cfg.boundary_mass_tol:
            outcome = Outcome.TOLERANCE_VIOLATED
            message = f"mass reached the outer grid region at t={t:.6g}"
            break

        mass_drift = abs(row[_COL["mass"]] - m0) / m_scale
        energy_drift = abs(row[_COL["energy"]] - e0) / e_scale
        if mass_drift > cfg.mass_drift_tol or energy_drift > cfg.energy_drift_tol:
            if level < cfg.max_refinements:
                level += 1
                dt = cfg.dt / 2 ** level
                ck_values, t_base, ck_state, n_rows, n_snaps = checkpoint
                values = ck_values.copy()
                stepper.restore(ck_state)
                del rows[n_rows:]
                del snapshots[n_snaps:]
                k, t = 0, t_base
                events.append(
                    f"drift (mass {mass_drift:.2e}, energy {energy_drift:.2e}) at t={row[0]:.6g}; "
                    f"restart from t={t_base:.6g} with dt={dt:g}"
                )
                logger.debug(events[-1])
                continue
            collapsed = cfg.sign is Sign.FOCUSING and g0 > 0.0 and grad >= cfg.collapse_grad_factor * g0
            outcome = Outcome.BLOWUP_DETECTED if collapsed else Outcome.TOLERANCE_VIOLATED
            message = (
                f"drift persists at dt={dt:g} (mass {mass_drift:.2e}, energy {energy_drift:.2e}) "
                f"at t={t:.6g}; ||grad u|| ratio {grad / g0 if g0 else np.nan:.3g}"
            )
            break

        if k % cfg.snapshot_stride == 0:
            snapshots.append(FieldState(cfg.grid, values.copy(), t))
            checkpoint = (values.copy(), t, stepper.state(), len(rows), len(snapshots))
            t_base, k = t, 0

    if outcome is Outcome.COMPLETED or np.all(np.isfinite(values)):
        if snapshots[-1].time < t:
            snapshots.append(FieldState(cfg.grid, values.copy(), t))

    logger.info("evolve finished: %s at t=%.6g (%d steps, %d refinements)%s",
                outcome.value, t, len(rows) - 1, level, f": {message}" if message else "")
    return Trajectory(
        snapshots=snapshots,
        series=np.vstack(rows),
        outcome=outcome,
        cfg=cfg,
        final_dt=dt,
        refinements=level,
        message=message,
        events=events,
    )


def time_reversal_defect(u0: FieldState, cfg: SolverConfig, spec: PotentialSpec) -> float:
    """Relative L2 distance between u0 and conj(S^N conj(S^N u0)).

    S is one step of ``cfg.dt`` and N = round(t_end / dt).
    """
    stepper = _Stepper(cfg, spec)
    n_steps = int(round(cfg.t_end / cfg.dt))
    values = u0.values.copy()
    stepper.reset(values)
    for _ in range(n_steps):
        values = stepper(values, cfg.dt)
    values = np.conj(values)
    stepper.reset(values)
    for _ in range(n_steps):
        values = stepper(values, cfg.dt)
    values = np.conj(values)
    grid = cfg.grid
    norm = np.sqrt(radial_integral(np.abs(u0.values) ** 2, grid))
    return float(np.sqrt(radial_integral(np.abs(values - u0.values) ** 2, grid)) / norm)


# ── Proxies ──────────────────────────────────────────────────────────────────

@dataclass
class ProxyResult:
    decay_factor_lp: float
    final_potential_fraction: float
    verdict_hint: ProxyHint

    def to_dict(self) -> dict:
        return {
            "decay_factor_lp": self.decay_factor_lp,
            "final_potential_fraction": self.final_potential_fraction,
            "verdict_hint": self.verdict_hint.value,
        }


def _spread(values: np.ndarray) -> float:
    mean = float(np.mean(values))
    return float(np.max(values) - np.min(values)) / mean if mean > 0.0 else np.inf


def scattering_proxy(traj: Trajectory) -> ProxyResult:
    """Observable stand-in for scattering along a completed trajectory.

    decay_factor_lp is the maximum of ||u||_{a+2}^{a+2} over the last
    quarter of the run divided by its initial value.  ScatterLike needs
    decay <= 0.2 and a negative trend over the last half; SolitonLike needs
    both that norm and the spatial variance to stay within 5% over the
    last half.
    """
    t = traj.times
    lp = traj.column("lp_norm")
    frac = float(traj.column("potential_fraction")[-1])
    if traj.outcome is not Outcome.COMPLETED:
        logger.warning("scattering_proxy on a %s trajectory", traj.outcome.value)
        return ProxyResult(np.nan, frac, ProxyHint.UNDETERMINED)
    if lp[0] == 0.0:
        return ProxyResult(np.nan, frac, ProxyHint.UNDETERMINED)

    t0, t1 = t[0], t[-1]
    quarter = t >= t0 + 0.75 * (t1 - t0)
    half = t >= t0 + 0.5 * (t1 - t0)
    decay = float(np.max(lp[quarter]) / lp[0])

    if half.sum() >= 2:
        slope = np.polyfit(t[half], lp[half], 1)[0]
    else:
        slope = 0.0
    if decay <= SCATTER_DECAY and slope < 0.0:
        return ProxyResult(decay, frac, ProxyHint.SCATTER_LIKE)

    snaps = [s for s in traj.snapshots if s.time >= t0 + 0.5 * (t1 - t0)]
    if len(snaps) >= 2:
        var = np.array([variance(s) for s in snaps])
        if _spread(lp[half]) <= SOLITON_SPREAD and _spread(var) <= SOLITON_SPREAD:
            return ProxyResult(decay, frac, ProxyHint.SOLITON_LIKE)
    return ProxyResult(decay, frac, ProxyHint.UNDETERMINED)


def linear_decay_exponent(f: FieldState, spec: PotentialSpec, t_window, cfg: SolverConfig,
                          samples_per_decade: int = 10):
    """Fit the decay rate of ||u(t)||_inf under the linear flow.

    The nonlinearity is switched off; the potential stays.  ||u||_inf is
    sampled at log-spaced times in *t_window* and the least-squares slope
    of log ||u||_inf against log t is returned.

    Returns:
        ``(exponent, fit_residual)`` with the residual the RMS of the fit.

    Raises:
        NLSConfigurationError: t1 < 1, an empty window, or fewer than five
            distinct samples per decade at this dt.
    """
    t1, t2 = map(float, t_window)
    if t1 < 1.0 or t2 <= t1:
        raise NLSConfigurationError(f"decay window must satisfy 1 <= t1 < t2, got [{t1}, {t2}]")
    if samples_per_decade < MIN_SAMPLES_PER_DECADE:
        raise NLSConfigurationError(
            f"at least {MIN_SAMPLES_PER_DECADE} samples per decade required"
        )
    decades = np.log10(t2 / t1)
    n_samples = int(np.ceil(samples_per_decade * decades)) + 1
    steps = np.unique(np.round(np.geomspace(t1, t2, n_samples) / cfg.dt).astype(int))
    if steps.size < MIN_SAMPLES_PER_DECADE * decades or steps.size < 3:
        raise NLSConfigurationError(
            f"decay window too short: {steps.size} distinct samples over {decades:.2f} decades"
        )

    linear_cfg = replace(cfg, nonlinear=False, t_end=t2)
    stepper = _Stepper(linear_cfg, spec)
    values = f.values.copy()
    stepper.reset(values)
    sup = np.empty(steps.size)
    done = 0
    for i, target in enumerate(steps):
        while done < target:
            values = stepper(values, cfg.dt)
            done += 1
        sup[i] = np.max(np.abs(values))

    log_t = np.log(steps * cfg.dt)
    log_sup = np.log(sup)
    slope, intercept = np.polyfit(log_t, log_sup, 1)
    residual = float(np.sqrt(np.mean((log_sup - (slope * log_t + intercept)) ** 2)))
    logger.info("linear decay exponent %.4f over [%g, %g] (rms %.2e)", slope, t1, t2, residual)
    return float(slope), residual


# ── Writers ──────────────────────────────────────────────────────────────────

def write_series_csv(traj: Trajectory, path: str, extra: Optional[dict] = None) -> None:
    """One row per step with the columns of :data:`SERIES_COLUMNS`.

    *extra* maps further column names to arrays of one value per row,
    appended after the standard columns.
    """
    extra = extra or {}
    for name, values in extra.items():
        if len(values) != traj.series.shape[0]:
            raise NLSConfigurationError(
                f"column '{name}' has {len(values)} rows, series has {traj.series.shape[0]}"
            )
    table = np.column_stack([traj.series] + [np.asarray(v, dtype=float) for v in extra.values()])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SERIES_COLUMNS + tuple(extra))
        for row in table:
            writer.writerow([repr(float(x)) for x in row])


def write_snapshots_csv(traj: Trajectory, directory: str) -> list:
    """Write ``snapshot_NNNN.csv`` files with columns r, abs_u.

    Returns:
        The written paths.
    """
    ensure_dir(directory)
    paths = []
    for i, snap in enumerate(traj.snapshots):
        path = os.path.join(directory, f"snapshot_{i:04d}.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"# t={snap.time!r}"])
            writer.writerow(["r", "abs_u"])
            for r, a in zip(snap.grid.nodes, np.abs(snap.values)):
                writer.writerow([repr(float(r)), repr(float(a))])
        paths.append(path)
    return paths
