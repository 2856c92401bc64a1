"""
Tests for nls_kato.experiments.config — INI parsing, validation, writing.
"""

import numpy as np
import pytest

from nls_kato.exceptions import NLSConfigurationError, NLSDomainError
from nls_kato.experiments.config import (
    DiagnosticsConfig,
    InitialData,
    InitialDataKind,
    SweepConfig,
    dumps_config,
    load_config,
    parse_config,
    save_config,
)
from nls_kato.functionals import Sign
from nls_kato.potentials import PotentialFamily, PotentialSpec
from nls_kato.radial_dynamics import Scheme


# ── Helpers ───────────────────────────────────────────────────────────────────

_TEXT = """
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
"""


# ── Parsing ───────────────────────────────────────────────────────────────────

def test_parse_minimal():
    cfg = parse_config(_TEXT)
    assert cfg.name == "below"
    assert cfg.alpha == 2.0
    assert cfg.sign is Sign.FOCUSING
    assert cfg.potential == PotentialSpec.yukawa(0.01, 0.5, 1.0)
    assert cfg.initial_data.kind is InitialDataKind.SCALED_GROUND_STATE
    assert cfg.initial_data.beta == 0.5
    assert cfg.grid.n_points == 2048
    assert cfg.solver.scheme is Scheme.STRANG_SPLIT
    assert cfg.solver.sign is Sign.FOCUSING
    assert cfg.diagnostics.enabled == []
    assert cfg.sweep is None
    assert cfg.cache_dir == ""


def test_round_trip_is_stable():
    cfg = parse_config(_TEXT)
    text = dumps_config(cfg)
    again = parse_config(text)
    assert again == cfg
    assert dumps_config(again) == text


def test_full_round_trip(tmp_path):
    text = _TEXT + """
[diagnostics]
morawetz_radii = 10, 20
eta = 0.2
interaction = yes
coercivity_rho = 0.5
decay_window = 1 10

[sweep]
beta_start = 0.2
beta_stop = 1.4
beta_step = 0.2
"""
    cfg = parse_config(text)
    assert cfg.diagnostics.morawetz_radii == (10.0, 20.0)
    assert cfg.diagnostics.interaction
    assert cfg.diagnostics.decay_window == (1.0, 10.0)
    assert cfg.diagnostics.enabled == ["morawetz", "interaction", "coercivity", "decay_test"]
    path = tmp_path / "exp.cfg"
    save_config(cfg, str(path))
    assert load_config(str(path)) == cfg


def test_solver_options():
    text = _TEXT + "scheme = CrankNicolsonRelaxed\nnonlinear = off\nsnapshot_stride = 4\n"
    cfg = parse_config(text)
    assert cfg.solver.scheme is Scheme.CRANK_NICOLSON_RELAXED
    assert not cfg.solver.nonlinear
    assert cfg.solver.snapshot_stride == 4


def test_zero_potential_section():
    text = _TEXT.replace("family = yukawa\nc = 0.01\nsigma = 0.5\na = 1.0", "family = zero")
    cfg = parse_config(text)
    assert cfg.potential.family is PotentialFamily.ZERO
    assert cfg.potential.is_zero


@pytest.mark.parametrize("text", [
    _TEXT.replace("[solver]", "[solverx]"),
    _TEXT.replace("dt = 0.001\n", ""),
    _TEXT.replace("dt = 0.001", "dt = fast"),
    _TEXT.replace("family = yukawa", "family = coulomb"),
    _TEXT.replace("sign = focusing", "sign = sideways"),
    _TEXT.replace("n_points = 2048", "n_points = 16"),
    _TEXT + "nonlinear = maybe\n",
    "not an ini file",
])
def test_configuration_errors(text):
    with pytest.raises(NLSConfigurationError):
        parse_config(text)


@pytest.mark.parametrize("text", [
    _TEXT.replace("sigma = 0.5", "sigma = 2.5"),
    _TEXT.replace("alpha = 2.0", "alpha = 5.0"),
    _TEXT.replace("family = yukawa\nc = 0.01", "family = inverse_power\nc = -1.0"),
])
def test_domain_errors(text):
    with pytest.raises(NLSDomainError):
        parse_config(text)


def test_missing_file(tmp_path):
    with pytest.raises(NLSConfigurationError):
        load_config(str(tmp_path / "absent.cfg"))


# ── Sections ──────────────────────────────────────────────────────────────────

def test_sweep_betas_are_inclusive():
    assert np.array_equal(SweepConfig(0.2, 0.8, 0.2).betas(), [0.2, 0.4, 0.6, 0.8])
    assert SweepConfig(1.0, 1.0, 0.1).betas().tolist() == [1.0]


@pytest.mark.parametrize("args", [(0.0, 1.0, 0.1), (1.0, 0.5, 0.1), (0.2, 1.0, 0.0)])
def test_sweep_validation(args):
    with pytest.raises(NLSConfigurationError):
        SweepConfig(*args)


@pytest.mark.parametrize("kwargs", [
    {"morawetz_radii": (10.0, -1.0)},
    {"eta": 1.0},
    {"coercivity_rho": 0.0},
    {"decay_window": (0.5, 10.0)},
    {"decay_window": (5.0, 2.0)},
])
def test_diagnostics_validation(kwargs):
    with pytest.raises(NLSConfigurationError):
        DiagnosticsConfig(**kwargs)


def test_initial_data_validation():
    with pytest.raises(NLSConfigurationError):
        InitialData(kind="gaussian", width=0.0)
    with pytest.raises(NLSConfigurationError):
        InitialData(kind="from_file")
    assert InitialData(kind="gaussian").with_beta(0.3).beta == 0.3


def test_sweep_over_file_data_rejected():
    text = _TEXT.replace("kind = scaled_ground_state", "kind = from_file\npath = u0.csv")
    text += "\n[sweep]\nbeta_start = 0.5\nbeta_stop = 1.0\nbeta_step = 0.5\n"
    with pytest.raises(NLSConfigurationError):
        parse_config(text)


def test_with_beta_drops_sweep():
    text = _TEXT + "\n[sweep]\nbeta_start = 0.5\nbeta_stop = 1.0\nbeta_step = 0.5\n"
    cfg = parse_config(text)
    run = cfg.with_beta(0.75, "out/run_001")
    assert run.sweep is None
    assert run.initial_data.beta == 0.75
    assert run.output_dir == "out/run_001"
    assert cfg.with_output_dir("elsewhere").output_dir == "elsewhere"


def test_to_dict_sections():
    d = parse_config(_TEXT).to_dict()
    assert set(d) == {"run", "potential", "initial_data", "solver", "diagnostics"}
    assert d["potential"]["family"] == "yukawa"
