"""
Experiment orchestration.

Single runs go validate -> ground state -> classify -> evolve -> diagnose
-> write.  Module errors never escape :func:`run_single`; they land in the
summary with an exit code (2 for validation failures, 1 otherwise).

Sweeps fan one run per beta out to a process pool; each run writes to its
own ``run_NNN_beta...`` directory and the ground-state profile is shared
through the on-disk cache.
"""

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from ..exceptions import (
    NLSConfigurationError, NLSDomainError, NLSKatoError, NLSSolverError,
)
from ..functionals import (
    FieldState, Sign, Verdict, classify_initial_data, energy, mass,
    rho_from_energy_margin, scattering_bound, virial_second_derivative,
)
from ..grid import RadialGrid, resample
from ..groundstate import (
    DEFAULT_TOL, GroundState, export_profile_csv, ground_state_on, pohozaev_residuals,
)
from ..morawetz import (
    INEQUALITY_TOL, build_cutoffs, coercivity_check, defocusing_inequality_slack,
    export_cutoffs_csv, focusing_inequality_slack, galilean_shift, interaction_action,
    interaction_integrand, localized_momentum, morawetz_identity_residual,
)
from ..potentials import (
    AssumptionReport, PotentialFamily, PotentialSpec, Theorem, validate_assumptions,
)
from ..radial_dynamics import (
    Outcome, ProxyHint, ProxyResult, Trajectory, evolve, linear_decay_exponent,
    scattering_proxy, write_snapshots_csv,
)
from ..serialize import is_msgpack_available
from ..utils import ensure_dir, run_dir_name
from .artifacts import (
    load_trajectory, save_trajectory, write_dat, write_dichotomy_csv, write_json,
    write_series, write_summary,
)
from .config import ExperimentConfig, InitialDataKind, save_config

logger = logging.getLogger("nlskato.experiments.runner")

EXIT_OK: int = 0
EXIT_RUNTIME: int = 1
EXIT_VALIDATION: int = 2
EXIT_USAGE: int = 64

MORAWETZ_RESIDUAL_TOL: float = 1e-2
INVARIANCE_TOL: float = 1e-8
MOMENTUM_TOL: float = 1e-10
DECAY_TARGET: float = -1.5
DECAY_TOL_FREE: float = 0.1
DECAY_TOL_POTENTIAL: float = 0.15
COERCIVITY_SAMPLES: int = 10
COERCIVITY_RADII: tuple = (10.0, 20.0)
SCAT_BOUND_SLACK: float = 1e-6
N_RANDOM_SHIFTS: int = 10


# ── Summary types ────────────────────────────────────────────────────────────

@dataclass
class DiagnosticRow:
    """One diagnostic outcome.

    ``applicable`` is False when the data does not meet the hypothesis the
    check relies on; such a row is reported as not passed and was not run.
    """

    name: str
    passed: bool
    value: float
    detail: str = ""
    applicable: bool = True

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class RunSummary:
    """Everything a run reports.

    ``wall_clock`` is excluded from :meth:`to_dict` so summary.json is
    identical across repeated runs; it goes to timing.json instead.
    ``tables`` holds the per-radius Morawetz columns that end up in
    series.csv and is not part of the summary either.
    """

    config: dict
    assumptions: Optional[AssumptionReport] = None
    threshold: Optional[object] = None
    outcome: str = ""
    proxy: Optional[ProxyResult] = None
    drifts: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK
    error: str = ""
    wall_clock: float = 0.0
    tables: dict = field(default_factory=dict)

    def row(self, name: str) -> DiagnosticRow:
        for r in self.diagnostics:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK

    def fail(self, code: int, exc: BaseException) -> None:
        self.exit_code = code
        self.error = f"{type(exc).__name__}: {exc}"

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "assumptions": None if self.assumptions is None else self.assumptions.to_dict(),
            "threshold": None if self.threshold is None else self.threshold.to_dict(),
            "outcome": self.outcome,
            "proxy": None if self.proxy is None else self.proxy.to_dict(),
            "drifts": dict(self.drifts),
            "diagnostics": [r.to_dict() for r in self.diagnostics],
            "extras": dict(self.extras),
            "exit_code": self.exit_code,
            "error": self.error,
        }


@dataclass
class SweepResult:
    rows: list
    crossing: float
    summaries: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        codes = [s.exit_code for s in self.summaries]
        return max(codes) if codes else EXIT_OK


# ── Building blocks ──────────────────────────────────────────────────────────

def theorem_for(cfg: ExperimentConfig, at_threshold: bool = False) -> Theorem:
    """The result whose hypotheses a run relies on."""
    if cfg.potential.family is PotentialFamily.INVERSE_POWER:
        return Theorem.INVERSE_POWER_THEOREMS
    if cfg.sign is Sign.DEFOCUSING:
        return Theorem.SCATTERING_CRITERION_DEFOCUSING
    return Theorem.AT_THRESHOLD if at_threshold else Theorem.BELOW_THRESHOLD


def ground_state_for(cfg: ExperimentConfig) -> GroundState:
    """Ground state on the solver grid, cached when ``cfg.cache_dir`` is set."""
    return ground_state_on(cfg.grid, cfg.alpha, cfg.gs_tol, cfg.cache_dir or None)


def load_profile_csv(path: str, grid: RadialGrid) -> np.ndarray:
    """Read ``r, re[, im]`` columns and resample them onto *grid*."""
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise NLSConfigurationError(f"cannot read profile '{path}': {exc}") from exc
    if data.shape[1] < 2:
        raise NLSConfigurationError(f"profile '{path}' needs at least two columns")
    values = data[:, 1] + (1j * data[:, 2] if data.shape[1] > 2 else 0.0)
    return resample(data[:, 0], values, grid)


def build_initial_data(cfg: ExperimentConfig, gs: Optional[GroundState] = None) -> FieldState:
    init = cfg.initial_data
    grid = cfg.grid
    r = grid.nodes
    if init.kind is InitialDataKind.SCALED_GROUND_STATE:
        if gs is None:
            raise NLSConfigurationError("scaled ground-state data needs the ground state")
        values = init.beta * gs.q_values
    elif init.kind is InitialDataKind.GAUSSIAN:
        values = init.beta * init.amplitude * np.exp(-(r / init.width) ** 2)
    else:
        values = init.beta * load_profile_csv(init.path, grid)
    return FieldState(grid, values, 0.0)


def threshold_amplitude(gs: GroundState, spec: PotentialSpec) -> float:
    """beta in (0, 1) with E(beta Q) M(beta Q)^sc equal to the threshold.

    Raises:
        NLSSolverError: No sign change (the potential term cannot be balanced
            with the gradient product kept below its threshold).
    """
    base = FieldState(gs.grid, gs.q_values)
    m_q = mass(base)
    thr = gs.threshold_energy

    def gap(beta: float) -> float:
        u = base.scaled(beta)
        return energy(u, spec, Sign.FOCUSING, gs.alpha) * (beta * beta * m_q) ** gs.sigma_c - thr

    lo, hi = 1e-3, 1.0 - 1e-12
    g_lo, g_hi = gap(lo), gap(hi)
    if np.sign(g_lo) == np.sign(g_hi):
        raise NLSSolverError(
            f"threshold amplitude not bracketed: gap({lo})={g_lo:.3e}, gap({hi})={g_hi:.3e}"
        )
    beta = brentq(gap, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    logger.info("threshold amplitude beta=%.12f", beta)
    return float(beta)


def grad_threshold_crossing(rows: list, sigma_c: float) -> float:
    """beta at which the gradient-product margin vanishes.

    Each row gives beta_c = beta (1 - grad_margin)^(-1/(1+sigma_c)) by
    homogeneity; the median over usable rows is returned.

    Raises:
        NLSSolverError: No row has a finite margin.
    """
    estimates = [
        row["beta"] * (1.0 - row["grad_margin"]) ** (-1.0 / (1.0 + sigma_c))
        for row in rows
        if np.isfinite(row["grad_margin"]) and row["grad_margin"] < 1.0
    ]
    if not estimates:
        raise NLSSolverError("no sweep row has a usable gradient margin")
    return float(np.median(estimates))


# ── Diagnostics ──────────────────────────────────────────────────────────────

def _guarded(name: str, func) -> DiagnosticRow:
    try:
        return func()
    except NLSKatoError as exc:
        logger.warning("diagnostic %s failed: %s", name, exc)
        return DiagnosticRow(name, False, float("nan"), f"{type(exc).__name__}: {exc}")


class _Cutoffs:
    """build_cutoffs memoized by radius for one run."""

    def __init__(self, eta: float, alpha: float):
        self.eta = eta
        self.alpha = alpha
        self._built = {}

    def __call__(self, radius: float):
        if radius not in self._built:
            self._built[radius] = build_cutoffs(self.eta, radius, alpha=self.alpha)
        return self._built[radius]

    def items(self):
        return self._built.items()


def _scattering_bound_row(traj: Trajectory, cfg: ExperimentConfig, gs: GroundState,
                          threshold) -> DiagnosticRow:
    theta = threshold.margins["energy"]
    rho = rho_from_energy_margin(min(theta, 1.0 - 1e-12), cfg.alpha)
    bound = scattering_bound(gs, rho)
    observed = float(np.max(traj.column("scat_quantity")))
    passed = observed <= bound * (1.0 + SCAT_BOUND_SLACK)
    return DiagnosticRow(
        "scattering_bound", bool(passed), observed,
        f"sup scat {observed:.6e} vs bound {bound:.6e} (rho={rho:.6f})",
    )


def _morawetz_row(traj: Trajectory, cfg: ExperimentConfig, cutoffs: _Cutoffs,
                  gate_inequality: bool, tables: dict) -> DiagnosticRow:
    worst_res, worst_slack = 0.0, np.inf
    parts = []
    slack_fn = focusing_inequality_slack if cfg.sign is Sign.FOCUSING else defocusing_inequality_slack
    for radius in cfg.diagnostics.morawetz_radii:
        p = cutoffs(radius)
        series = morawetz_identity_residual(traj, p, cfg.potential, cfg.sign, cfg.alpha)
        times, slack = slack_fn(traj, p, cfg.potential, cfg.alpha)
        res = float(np.max(series.residual))
        worst_res = max(worst_res, res)
        worst_slack = min(worst_slack, float(np.min(slack)))
        parts.append(f"R={radius:g}: residual {res:.3e}, min slack {np.min(slack):.3e}")
        tag = f"mora_R{radius:g}"
        tables[tag] = {
            "t": series.interior_times,
            f"{tag}_action": series.action[1:-1],
            f"{tag}_dM_dt": series.dM_dt,
            f"{tag}_residual": series.residual,
            f"{tag}_slack": slack,
        }
    passed = worst_res <= MORAWETZ_RESIDUAL_TOL
    if gate_inequality:
        passed = passed and worst_slack >= -INEQUALITY_TOL
    else:
        parts.append("inequality reported, not gated")
    return DiagnosticRow("morawetz", bool(passed), worst_res, "; ".join(parts))


def _interaction_row(traj: Trajectory, cfg: ExperimentConfig, cutoffs: _Cutoffs) -> DiagnosticRow:
    radii = cfg.diagnostics.morawetz_radii or COERCIVITY_RADII
    p = cutoffs(max(radii))
    u = traj.final
    z = 0.5 * p.radius
    rng = np.random.default_rng(cfg.seed)
    base = interaction_integrand(u, p, z, 0.0)
    scale = abs(base) if base != 0.0 else 1.0
    shifts = rng.uniform(-2.0, 2.0, N_RANDOM_SHIFTS)
    invariance = max(abs(interaction_integrand(u, p, z, float(xi)) - base) / scale for xi in shifts)

    xi = galilean_shift(u, p, z)
    momentum = abs(localized_momentum(u, p, z, xi))
    unshifted = abs(localized_momentum(u, p, z, 0.0))
    momentum_rel = momentum / unshifted if unshifted > 0.0 else momentum

    action = interaction_action(u, p)
    passed = (
        invariance <= INVARIANCE_TOL and momentum_rel <= MOMENTUM_TOL
        and abs(action.value) <= action.bound
    )
    return DiagnosticRow(
        "interaction", bool(passed), float(invariance),
        f"xi={xi:.6e}, momentum {momentum_rel:.2e}, action {action.value:.6e} "
        f"(bound {action.bound:.6e})",
    )


def _coercivity_row(traj: Trajectory, cfg: ExperimentConfig, gs: GroundState,
                    cutoffs: _Cutoffs) -> DiagnosticRow:
    rho = cfg.diagnostics.coercivity_rho
    observed = float(np.max(traj.column("scat_quantity")))
    admissible = (1.0 - rho) * gs.threshold_scat
    if observed > admissible * (1.0 + SCAT_BOUND_SLACK):
        rho_max = 1.0 - observed / gs.threshold_scat
        return DiagnosticRow(
            "coercivity", False, observed,
            f"not applicable: sup scat {observed:.6e} exceeds (1 - rho) threshold "
            f"{admissible:.6e} at rho={rho:g}; largest admissible rho is {rho_max:.6f}, "
            "coercivity not checked",
            applicable=False,
        )
    snaps = traj.snapshots
    idx = np.unique(np.linspace(0, len(snaps) - 1, min(COERCIVITY_SAMPLES, len(snaps))).astype(int))
    radii = cfg.diagnostics.morawetz_radii or COERCIVITY_RADII
    worst = np.inf
    failures = 0
    for i in idx:
        for radius in radii:
            res = coercivity_check(snaps[i], cutoffs(radius), 0.0, gs, rho)
            worst = min(worst, res.lhs - res.rhs)
            failures += not res.holds
    return DiagnosticRow(
        "coercivity", failures == 0, float(worst),
        f"{idx.size} times x {len(radii)} radii, rho={rho:g}, {failures} failures",
    )


def _decay_row(traj: Trajectory, cfg: ExperimentConfig) -> DiagnosticRow:
    exponent, rms = linear_decay_exponent(
        traj.snapshots[0], cfg.potential, cfg.diagnostics.decay_window, cfg.solver
    )
    tol = DECAY_TOL_FREE if cfg.potential.is_zero else DECAY_TOL_POTENTIAL
    passed = abs(exponent - DECAY_TARGET) <= tol
    return DiagnosticRow("decay_test", bool(passed), exponent, f"rms {rms:.3e}, tolerance {tol:g}")


def run_diagnostics(traj: Trajectory, cfg: ExperimentConfig, gs: GroundState,
                    threshold, out_dir: Optional[str] = None,
                    tables: Optional[dict] = None) -> list:
    """One row per enabled diagnostic, plus the scattering bound for
    below-threshold focusing runs with a non-negative potential.

    Morawetz tables are collected into *tables* (keyed ``mora_R<radius>``)
    when it is given.
    """
    rows = []
    below = threshold is not None and threshold.verdict is Verdict.BELOW_THRESHOLD
    focusing = cfg.sign is Sign.FOCUSING
    cutoffs = _Cutoffs(cfg.diagnostics.eta, cfg.alpha)
    tables = {} if tables is None else tables

    if focusing and below and not cfg.potential.is_attractive:
        rows.append(_guarded("scattering_bound",
                             lambda: _scattering_bound_row(traj, cfg, gs, threshold)))
    for name in cfg.diagnostics.enabled:
        if name == "morawetz":
            gate = below or not focusing
            rows.append(_guarded(name, lambda: _morawetz_row(traj, cfg, cutoffs, gate, tables)))
        elif name == "interaction":
            rows.append(_guarded(name, lambda: _interaction_row(traj, cfg, cutoffs)))
        elif name == "coercivity":
            rows.append(_guarded(name, lambda: _coercivity_row(traj, cfg, gs, cutoffs)))
        elif name == "decay_test":
            rows.append(_guarded(name, lambda: _decay_row(traj, cfg)))

    if out_dir is not None:
        for radius, p in cutoffs.items():
            export_cutoffs_csv(p, os.path.join(out_dir, f"cutoffs_R{radius:g}.csv"))
        for tag, columns in tables.items():
            write_dat(os.path.join(out_dir, f"{tag}.dat"), columns)
    return rows


# ── Runs ─────────────────────────────────────────────────────────────────────

def _finish(cfg: ExperimentConfig, gs: GroundState, traj: Trajectory,
            summary: RunSummary, out_dir: Optional[str]) -> None:
    summary.outcome = traj.outcome.value
    summary.proxy = scattering_proxy(traj)
    summary.drifts = traj.max_drifts()
    summary.extras.update(
        refinements=traj.refinements,
        final_dt=traj.final_dt,
        message=traj.message,
        events=list(traj.events),
        snapshot_stride=cfg.solver.snapshot_stride,
        virial_initial=virial_second_derivative(traj.snapshots[0], cfg.potential, cfg.sign, cfg.alpha),
    )
    if cfg.sign is Sign.FOCUSING and traj.outcome is Outcome.BLOWUP_DETECTED:
        summary.extras["regime"] = "complement of the scattering region"
    summary.diagnostics = run_diagnostics(traj, cfg, gs, summary.threshold, out_dir,
                                          summary.tables)


def _write_run(cfg: ExperimentConfig, summary: RunSummary, traj: Optional[Trajectory]) -> None:
    out = ensure_dir(cfg.output_dir)
    save_config(cfg, os.path.join(out, "config.ini"))
    if traj is not None:
        write_series(traj, out, summary.tables)
        write_snapshots_csv(traj, os.path.join(out, "snapshots"))
        method = "msgpack" if is_msgpack_available() else "pickle"
        save_trajectory(traj, os.path.join(out, "trajectory.bin"), method=method)
    write_summary(summary, out)
    logger.info("Run '%s' written to '%s' (exit %d)", cfg.name, out, summary.exit_code)


def _execute(cfg: ExperimentConfig, write: bool, body) -> RunSummary:
    started = time.perf_counter()
    summary = RunSummary(config=cfg.to_dict())
    traj = None
    out_dir = ensure_dir(cfg.output_dir) if write else None
    try:
        traj = body(summary, out_dir)
    except (NLSDomainError, NLSConfigurationError) as exc:
        summary.fail(EXIT_VALIDATION, exc)
        logger.error("run '%s' rejected: %s", cfg.name, exc)
    except NLSKatoError as exc:
        summary.fail(EXIT_RUNTIME, exc)
        logger.error("run '%s' failed: %s", cfg.name, exc)
    summary.wall_clock = time.perf_counter() - started
    if write:
        _write_run(cfg, summary, traj)
    return summary


def _validated(cfg: ExperimentConfig, summary: RunSummary, at_threshold: bool = False) -> bool:
    report = validate_assumptions(cfg.potential, theorem_for(cfg, at_threshold))
    summary.assumptions = report
    if not report.satisfied:
        summary.exit_code = EXIT_VALIDATION
        summary.error = "assumptions not satisfied: " + "; ".join(report.messages)
        logger.error("run '%s': %s", cfg.name, summary.error)
    return report.satisfied


def run_single(cfg: ExperimentConfig, write: bool = True) -> RunSummary:
    """Validate, classify, evolve and diagnose one configuration.

    Example::

        summary = run_single(load_config("below.cfg"))
        summary.threshold.verdict, summary.outcome, summary.proxy.verdict_hint
    """
    def body(summary: RunSummary, out_dir):
        if not _validated(cfg, summary):
            return None
        gs = ground_state_for(cfg)
        summary.extras["ground_state"] = gs.summary()
        u0 = build_initial_data(cfg, gs)
        summary.threshold = classify_initial_data(u0, gs, cfg.potential)
        traj = evolve(u0, cfg.solver, cfg.potential)
        _finish(cfg, gs, traj, summary, out_dir)
        return traj

    return _execute(cfg, write, body)


def run_threshold_case(cfg: ExperimentConfig, write: bool = True) -> RunSummary:
    """Evolve data sitting on the energy threshold and report the branch.

    With V = 0 the data is beta*Q (beta = 1 by default, the standing wave);
    otherwise the amplitude is root-found so that the energy product equals
    its threshold.  The run reports ScatterLike or SolitonLike and asserts
    neither.
    """
    def body(summary: RunSummary, out_dir):
        if not _validated(cfg, summary, at_threshold=True):
            return None
        gs = ground_state_for(cfg)
        summary.extras["ground_state"] = gs.summary()
        if cfg.potential.is_zero:
            amplitude = cfg.initial_data.beta
        else:
            amplitude = threshold_amplitude(gs, cfg.potential)
        summary.extras["amplitude"] = amplitude
        u0 = FieldState(cfg.grid, amplitude * gs.q_values)
        summary.threshold = classify_initial_data(u0, gs, cfg.potential)
        if summary.threshold.verdict is Verdict.BELOW_THRESHOLD:
            summary.extras["note"] = "below-threshold fallback: data lies strictly below the threshold"
        traj = evolve(u0, cfg.solver, cfg.potential)
        _finish(cfg, gs, traj, summary, out_dir)
        summary.extras["branch"] = summary.proxy.verdict_hint.value
        return traj

    return _execute(cfg, write, body)


def run_diagnose(cfg: ExperimentConfig, trajectory_path: str, write: bool = True) -> RunSummary:
    """Run the diagnostics of *cfg* on a saved trajectory."""
    def body(summary: RunSummary, out_dir):
        traj = load_trajectory(trajectory_path)
        if traj.cfg.grid != cfg.grid:
            raise NLSConfigurationError(
                f"trajectory grid {traj.cfg.grid!r} differs from config grid {cfg.grid!r}"
            )
        gs = ground_state_for(cfg)
        summary.threshold = classify_initial_data(traj.snapshots[0], gs, cfg.potential)
        summary.outcome = traj.outcome.value
        summary.proxy = scattering_proxy(traj)
        summary.drifts = traj.max_drifts()
        summary.extras["trajectory"] = os.path.abspath(trajectory_path)
        summary.diagnostics = run_diagnostics(traj, cfg, gs, summary.threshold, out_dir,
                                          summary.tables)
        return None

    return _execute(cfg, write, body)


def run_decay_test(cfg: ExperimentConfig, write: bool = True) -> dict:
    """Fit the linear L-infinity decay exponent of the configured data.

    The window comes from ``[diagnostics] decay_window`` (default [1, 10]).
    """
    window = cfg.diagnostics.decay_window or (1.0, 10.0)
    gs = ground_state_for(cfg) if cfg.initial_data.kind is InitialDataKind.SCALED_GROUND_STATE else None
    u0 = build_initial_data(cfg, gs)
    exponent, rms = linear_decay_exponent(u0, cfg.potential, window, cfg.solver)
    tol = DECAY_TOL_FREE if cfg.potential.is_zero else DECAY_TOL_POTENTIAL
    result = {
        "exponent": exponent,
        "fit_rms": rms,
        "window": list(window),
        "target": DECAY_TARGET,
        "tolerance": tol,
        "passed": abs(exponent - DECAY_TARGET) <= tol,
        "potential": cfg.potential.to_dict(),
    }
    if write:
        write_json(result, ensure_dir(cfg.output_dir), "decay.json")
    return result


def run_ground_state(alpha: float, grid: RadialGrid, tol: float = DEFAULT_TOL,
                     out_dir: Optional[str] = None, cache_dir: Optional[str] = None) -> dict:
    """Solve for Q and write Q.csv, Q.dat and constants.json."""
    gs = ground_state_on(grid, alpha, tol, cache_dir)
    res1, res2 = pohozaev_residuals(gs)
    constants = {
        **gs.summary(),
        "pohozaev_residuals": [res1, res2],
        "grad_mass_ratio": gs.grad_sq / gs.mass,
    }
    if out_dir is not None:
        ensure_dir(out_dir)
        export_profile_csv(gs, os.path.join(out_dir, "Q.csv"))
        write_dat(os.path.join(out_dir, "Q.dat"), {"r": grid.nodes, "Q": gs.q_values})
        write_json(constants, out_dir, "constants.json")
    return constants


def run_validate_potential(cfg: ExperimentConfig, theorem: Optional[Theorem] = None,
                           write: bool = True) -> AssumptionReport:
    report = validate_assumptions(cfg.potential, theorem or theorem_for(cfg))
    if write:
        write_json(report, ensure_dir(cfg.output_dir), "assumptions.json")
    return report


# ── Sweeps ───────────────────────────────────────────────────────────────────

def _sweep_worker(cfg: ExperimentConfig, write: bool) -> RunSummary:
    return run_single(cfg, write=write)


def _dichotomy_row(beta: float, summary: Optional[RunSummary]) -> dict:
    nan = float("nan")
    if summary is None or summary.threshold is None:
        return {
            "beta": float(beta), "energy_margin": nan, "grad_margin": nan,
            "verdict": Verdict.INDETERMINATE.value,
            "outcome": summary.outcome if summary and summary.outcome else "Failed",
            "proxy": ProxyHint.UNDETERMINED.value,
        }
    t = summary.threshold
    return {
        "beta": float(beta),
        "energy_margin": float(t.margins["energy"]),
        "grad_margin": float(t.margins["grad"]),
        "verdict": t.verdict.value,
        "outcome": summary.outcome or "Failed",
        "proxy": summary.proxy.verdict_hint.value if summary.proxy else ProxyHint.UNDETERMINED.value,
    }


def run_sweep(cfg: ExperimentConfig, workers: Optional[int] = None, write: bool = True) -> SweepResult:
    """One run per beta of ``cfg.sweep``; writes dichotomy.csv and .dat.

    ``workers=1`` runs serially in this process; otherwise a
    ProcessPoolExecutor with *workers* processes (default: CPU count).
    A failing run becomes a row with NaN margins and the sweep continues.

    Raises:
        NLSConfigurationError: No ``[sweep]`` section.
    """
    if cfg.sweep is None:
        raise NLSConfigurationError("run_sweep needs a [sweep] section")
    betas = cfg.sweep.betas()
    out = ensure_dir(cfg.output_dir) if write else cfg.output_dir
    cache_dir = cfg.cache_dir or os.path.join(cfg.output_dir, "cache")
    base = replace(cfg, cache_dir=cache_dir) if write else cfg
    gs = ground_state_for(base)  # warm the cache before workers start

    jobs = {
        i: base.with_beta(beta, os.path.join(out, run_dir_name(i, beta)))
        for i, beta in enumerate(betas)
    }
    summaries: dict = {}
    logger.info("Sweep '%s': %d runs, workers=%s", cfg.name, len(jobs), workers)
    if workers == 1:
        for i, job in jobs.items():
            summaries[i] = _sweep_worker(job, write)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_sweep_worker, job, write): i for i, job in jobs.items()}
            for fut in as_completed(futures):
                i = futures[fut]
                try:
                    summaries[i] = fut.result()
                except Exception as exc:
                    logger.error("sweep run %d (beta=%g) crashed: %s", i, betas[i], exc)
                    summaries[i] = None

    rows = [_dichotomy_row(betas[i], summaries.get(i)) for i in sorted(jobs)]
    try:
        crossing = grad_threshold_crossing(rows, gs.sigma_c)
    except NLSSolverError:
        crossing = float("nan")

    if write:
        write_dichotomy_csv(rows, os.path.join(out, "dichotomy.csv"))
        write_dat(os.path.join(out, "dichotomy.dat"), {
            "beta": [r["beta"] for r in rows],
            "energy_margin": [r["energy_margin"] for r in rows],
            "grad_margin": [r["grad_margin"] for r in rows],
        })
        write_json({"crossing_beta": crossing, "rows": rows}, out, "sweep.json")
    logger.info("Sweep '%s' done; gradient threshold crossing at beta=%.9f", cfg.name, crossing)
    return SweepResult(rows, crossing, [s for s in (summaries.get(i) for i in sorted(jobs)) if s])
