"""
Experiment configuration files.

A config is INI text with the sections ``[run]``, ``[potential]``,
``[initial_data]``, ``[solver]`` and the optional ``[diagnostics]`` and
``[sweep]``::

    [run]
    name = below
    alpha = 2.0
    sign = focusing
    output_dir = out/below

    [potential]
    family = yukawa
    c = 0.01
    sigma = 0.5
    a = 1.0

    [initial_data]
    kind = scaled_ground_state
    beta = 0.5

    [solver]
    r_max = 40.0
    n_points = 2048
    dt = 0.001
    t_end = 2.0

Floats are written with ``repr`` so that parse -> write -> parse returns
the same text.
"""

import configparser
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from ..exceptions import NLSConfigurationError, NLSDomainError
from ..functionals import Sign, check_alpha
from ..grid import RadialGrid
from ..groundstate import DEFAULT_TOL
from ..potentials import PotentialFamily, PotentialSpec
from ..radial_dynamics import Scheme, SolverConfig

logger = logging.getLogger("nlskato.experiments.config")

_SOLVER_DEFAULTS = SolverConfig(RadialGrid(40.0, 2048), dt=1e-3, t_end=1.0)


class InitialDataKind(str, Enum):
    SCALED_GROUND_STATE = "scaled_ground_state"
    GAUSSIAN = "gaussian"
    FROM_FILE = "from_file"


@dataclass(frozen=True)
class InitialData:
    """One of beta*Q, A*exp(-(r/w)^2), or a profile read from CSV.

    Only the fields of the chosen *kind* are meaningful; ``beta`` scales
    every variant so sweeps work on Gaussians too.
    """

    kind: InitialDataKind = InitialDataKind.SCALED_GROUND_STATE
    beta: float = 1.0
    amplitude: float = 1.0
    width: float = 1.0
    path: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", InitialDataKind(self.kind))
        if self.kind is InitialDataKind.GAUSSIAN and not self.width > 0.0:
            raise NLSConfigurationError(f"gaussian width must be positive, got {self.width!r}")
        if self.kind is InitialDataKind.FROM_FILE and not self.path:
            raise NLSConfigurationError("from_file initial data needs a path")

    def with_beta(self, beta: float) -> "InitialData":
        return replace(self, beta=float(beta))


@dataclass(frozen=True)
class DiagnosticsConfig:
    """Diagnostics run after the evolution; empty or ``None`` disables one."""

    morawetz_radii: tuple = ()
    eta: float = 0.1
    interaction: bool = False
    coercivity_rho: Optional[float] = None
    decay_window: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "morawetz_radii", tuple(float(r) for r in self.morawetz_radii))
        if any(r <= 0.0 for r in self.morawetz_radii):
            raise NLSConfigurationError("morawetz radii must be positive")
        if not 0.0 < self.eta < 1.0:
            raise NLSConfigurationError(f"eta must lie in (0, 1), got {self.eta!r}")
        if self.coercivity_rho is not None and not 0.0 < self.coercivity_rho <= 1.0:
            raise NLSConfigurationError(f"coercivity rho must lie in (0, 1], got {self.coercivity_rho!r}")
        if self.decay_window is not None:
            window = tuple(float(t) for t in self.decay_window)
            if len(window) != 2 or not 1.0 <= window[0] < window[1]:
                raise NLSConfigurationError(f"decay window must be 1 <= t1 < t2, got {window}")
            object.__setattr__(self, "decay_window", window)

    @property
    def enabled(self) -> list:
        """Names of the enabled diagnostics, in run order."""
        names = []
        if self.morawetz_radii:
            names.append("morawetz")
        if self.interaction:
            names.append("interaction")
        if self.coercivity_rho is not None:
            names.append("coercivity")
        if self.decay_window is not None:
            names.append("decay_test")
        return names


@dataclass(frozen=True)
class SweepConfig:
    beta_start: float
    beta_stop: float
    beta_step: float

    def __post_init__(self):
        if not self.beta_step > 0.0 or self.beta_stop < self.beta_start or self.beta_start <= 0.0:
            raise NLSConfigurationError(
                f"sweep needs 0 < start <= stop and step > 0, got "
                f"{self.beta_start}, {self.beta_stop}, {self.beta_step}"
            )

    def betas(self) -> np.ndarray:
        """Inclusive beta grid, rounded to 12 digits so 0.2 + 3*0.2 prints as 0.8."""
        n = int(np.floor((self.beta_stop - self.beta_start) / self.beta_step + 1e-9)) + 1
        return np.round(self.beta_start + self.beta_step * np.arange(n), 12)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one run (or one sweep) needs.

    Raises:
        NLSConfigurationError: A sweep over FROM_FILE data, or a solver whose
            sign/alpha disagree with the run section.
    """

    alpha: float
    potential: PotentialSpec
    sign: Sign
    initial_data: InitialData
    solver: SolverConfig
    diagnostics: DiagnosticsConfig = field(default_factory=DiagnosticsConfig)
    sweep: Optional[SweepConfig] = None
    output_dir: str = "out"
    seed: int = 0
    name: str = "run"
    gs_tol: float = DEFAULT_TOL
    cache_dir: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sign", Sign(self.sign))
        check_alpha(self.alpha)
        if self.solver.sign is not self.sign or self.solver.alpha != self.alpha:
            raise NLSConfigurationError("solver sign/alpha must match the run section")
        if self.sweep is not None and self.initial_data.kind is InitialDataKind.FROM_FILE:
            raise NLSConfigurationError("sweeps need scaled_ground_state or gaussian initial data")

    @property
    def grid(self) -> RadialGrid:
        return self.solver.grid

    def with_beta(self, beta: float, output_dir: Optional[str] = None) -> "ExperimentConfig":
        return replace(
            self,
            initial_data=self.initial_data.with_beta(beta),
            sweep=None,
            output_dir=self.output_dir if output_dir is None else output_dir,
        )

    def with_output_dir(self, output_dir: str) -> "ExperimentConfig":
        return replace(self, output_dir=output_dir)

    def to_dict(self) -> dict:
        return {
            section: dict(values)
            for section, values in _to_parser(self).items()
            if section != configparser.DEFAULTSECT
        }


# ── Parsing ──────────────────────────────────────────────────────────────────

def _floats(text: str) -> tuple:
    return tuple(float(x) for x in text.replace(",", " ").split())


def _get(parser, section, key, conv, default=None):
    if not parser.has_option(section, key):
        if default is None:
            raise NLSConfigurationError(f"missing [{section}] {key}")
        return default
    raw = parser.get(section, key).strip()
    try:
        return conv(raw)
    except ValueError as exc:
        raise NLSConfigurationError(f"[{section}] {key} = {raw!r}: {exc}") from exc


def _bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError("not a boolean")


def _from_parser(parser: configparser.ConfigParser) -> ExperimentConfig:
    for section in ("run", "potential", "initial_data", "solver"):
        if not parser.has_section(section):
            raise NLSConfigurationError(f"missing section [{section}]")

    alpha = _get(parser, "run", "alpha", float)
    sign = Sign(_get(parser, "run", "sign", str, Sign.FOCUSING.value))

    family = PotentialFamily(_get(parser, "potential", "family", str))
    potential = PotentialSpec(
        family,
        _get(parser, "potential", "c", float, 0.0),
        _get(parser, "potential", "sigma", float, 0.0),
        _get(parser, "potential", "a", float, 0.0),
    )

    initial = InitialData(
        kind=InitialDataKind(_get(parser, "initial_data", "kind", str)),
        beta=_get(parser, "initial_data", "beta", float, 1.0),
        amplitude=_get(parser, "initial_data", "amplitude", float, 1.0),
        width=_get(parser, "initial_data", "width", float, 1.0),
        path=_get(parser, "initial_data", "path", str, ""),
    )

    d = _SOLVER_DEFAULTS
    grid = RadialGrid(
        _get(parser, "solver", "r_max", float),
        _get(parser, "solver", "n_points", int),
    )
    solver = SolverConfig(
        grid=grid,
        dt=_get(parser, "solver", "dt", float),
        t_end=_get(parser, "solver", "t_end", float),
        scheme=Scheme(_get(parser, "solver", "scheme", str, d.scheme.value)),
        sign=sign,
        alpha=alpha,
        blowup_grad_factor=_get(parser, "solver", "blowup_grad_factor", float, d.blowup_grad_factor),
        mass_drift_tol=_get(parser, "solver", "mass_drift_tol", float, d.mass_drift_tol),
        energy_drift_tol=_get(parser, "solver", "energy_drift_tol", float, d.energy_drift_tol),
        nonlinear=_get(parser, "solver", "nonlinear", _bool, d.nonlinear),
        snapshot_stride=_get(parser, "solver", "snapshot_stride", int, d.snapshot_stride),
        boundary_mass_tol=_get(parser, "solver", "boundary_mass_tol", float, d.boundary_mass_tol),
        collapse_grad_factor=_get(parser, "solver", "collapse_grad_factor", float,
                                  d.collapse_grad_factor),
        max_refinements=_get(parser, "solver", "max_refinements", int, d.max_refinements),
    )

    diagnostics = DiagnosticsConfig()
    if parser.has_section("diagnostics"):
        rho = _get(parser, "diagnostics", "coercivity_rho", str, "")
        window = _get(parser, "diagnostics", "decay_window", str, "")
        diagnostics = DiagnosticsConfig(
            morawetz_radii=_floats(_get(parser, "diagnostics", "morawetz_radii", str, "")),
            eta=_get(parser, "diagnostics", "eta", float, 0.1),
            interaction=_get(parser, "diagnostics", "interaction", _bool, False),
            coercivity_rho=float(rho) if rho else None,
            decay_window=_floats(window) if window else None,
        )

    sweep = None
    if parser.has_section("sweep"):
        sweep = SweepConfig(
            _get(parser, "sweep", "beta_start", float),
            _get(parser, "sweep", "beta_stop", float),
            _get(parser, "sweep", "beta_step", float),
        )

    return ExperimentConfig(
        alpha=alpha,
        potential=potential,
        sign=sign,
        initial_data=initial,
        solver=solver,
        diagnostics=diagnostics,
        sweep=sweep,
        output_dir=_get(parser, "run", "output_dir", str, "out"),
        seed=_get(parser, "run", "seed", int, 0),
        name=_get(parser, "run", "name", str, "run"),
        gs_tol=_get(parser, "run", "gs_tol", float, DEFAULT_TOL),
        cache_dir=_get(parser, "run", "cache_dir", str, ""),
    )


def parse_config(text: str) -> ExperimentConfig:
    """Build an :class:`ExperimentConfig` from INI text.

    Raises:
        NLSConfigurationError: Syntax errors, missing keys, bad values.
        NLSDomainError:        Values outside the mathematical domain
                               (e.g. sigma >= 2, alpha outside (4/3, 4)).
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise NLSConfigurationError(f"unreadable config: {exc}") from exc
    try:
        return _from_parser(parser)
    except NLSDomainError:
        raise
    except ValueError as exc:
        if isinstance(exc, NLSConfigurationError):
            raise
        raise NLSConfigurationError(str(exc)) from exc


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise NLSConfigurationError(f"cannot read config '{path}': {exc}") from exc
    cfg = parse_config(text)
    logger.debug("Loaded config '%s' (%s)", path, cfg.name)
    return cfg


# ── Writing ──────────────────────────────────────────────────────────────────

def _r(x) -> str:
    return repr(float(x))


def _to_parser(cfg: ExperimentConfig) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    run = {
        "name": cfg.name,
        "alpha": _r(cfg.alpha),
        "sign": cfg.sign.value,
        "output_dir": cfg.output_dir,
        "seed": str(int(cfg.seed)),
        "gs_tol": _r(cfg.gs_tol),
    }
    if cfg.cache_dir:
        run["cache_dir"] = cfg.cache_dir
    parser["run"] = run

    p = cfg.potential
    parser["potential"] = {"family": p.family.value, "c": _r(p.c), "sigma": _r(p.sigma), "a": _r(p.a)}

    init = cfg.initial_data
    section = {"kind": init.kind.value, "beta": _r(init.beta)}
    if init.kind is InitialDataKind.GAUSSIAN:
        section.update(amplitude=_r(init.amplitude), width=_r(init.width))
    elif init.kind is InitialDataKind.FROM_FILE:
        section["path"] = init.path
    parser["initial_data"] = section

    s = cfg.solver
    parser["solver"] = {
        "r_max": _r(s.grid.r_max),
        "n_points": str(s.grid.n_points),
        "dt": _r(s.dt),
        "t_end": _r(s.t_end),
        "scheme": s.scheme.value,
        "blowup_grad_factor": _r(s.blowup_grad_factor),
        "mass_drift_tol": _r(s.mass_drift_tol),
        "energy_drift_tol": _r(s.energy_drift_tol),
        "nonlinear": "true" if s.nonlinear else "false",
        "snapshot_stride": str(s.snapshot_stride),
        "boundary_mass_tol": _r(s.boundary_mass_tol),
        "collapse_grad_factor": _r(s.collapse_grad_factor),
        "max_refinements": str(s.max_refinements),
    }

    d = cfg.diagnostics
    parser["diagnostics"] = {
        "morawetz_radii": ", ".join(_r(r) for r in d.morawetz_radii),
        "eta": _r(d.eta),
        "interaction": "true" if d.interaction else "false",
        "coercivity_rho": "" if d.coercivity_rho is None else _r(d.coercivity_rho),
        "decay_window": "" if d.decay_window is None else ", ".join(_r(t) for t in d.decay_window),
    }

    if cfg.sweep is not None:
        parser["sweep"] = {
            "beta_start": _r(cfg.sweep.beta_start),
            "beta_stop": _r(cfg.sweep.beta_stop),
            "beta_step": _r(cfg.sweep.beta_step),
        }
    return parser


def dumps_config(cfg: ExperimentConfig) -> str:
    """INI text for *cfg*; :func:`parse_config` reads it back unchanged."""
    parser = _to_parser(cfg)
    lines = []
    for section in parser.sections():
        lines.append(f"[{section}]")
        for key, value in parser.items(section):
            lines.append(f"{key} = {value}".rstrip())
        lines.append("")
    return "\n".join(lines)


def save_config(cfg: ExperimentConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_config(cfg))
