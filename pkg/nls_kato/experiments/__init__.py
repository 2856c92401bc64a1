"""Experiment plumbing: configs, runs, sweeps, artifacts and the CLI."""

from .config import (
    DiagnosticsConfig,
    ExperimentConfig,
    InitialData,
    InitialDataKind,
    SweepConfig,
    dumps_config,
    load_config,
    parse_config,
    save_config,
)
from .runner import (
    RunSummary,
    SweepResult,
    grad_threshold_crossing,
    run_decay_test,
    run_diagnose,
    run_ground_state,
    run_single,
    run_sweep,
    run_threshold_case,
    run_validate_potential,
)
from .artifacts import load_trajectory, save_trajectory

__all__ = [
    "DiagnosticsConfig",
    "ExperimentConfig",
    "InitialData",
    "InitialDataKind",
    "SweepConfig",
    "dumps_config",
    "load_config",
    "parse_config",
    "save_config",
    "RunSummary",
    "SweepResult",
    "grad_threshold_crossing",
    "run_decay_test",
    "run_diagnose",
    "run_ground_state",
    "run_single",
    "run_sweep",
    "run_threshold_case",
    "run_validate_potential",
    "load_trajectory",
    "save_trajectory",
]
