"""
Shared test fixtures and helpers for nls_kato tests.

Ground states and trajectories are session-scoped: solving for Q or
evolving a few hundred steps is cheap once but adds up across modules.
"""

import numpy as np
import pytest

from nls_kato.functionals import FieldState, Sign
from nls_kato.grid import RadialGrid
from nls_kato.groundstate import solve_ground_state
from nls_kato.morawetz import build_cutoffs
from nls_kato.potentials import PotentialSpec
from nls_kato.radial_dynamics import SolverConfig, evolve


def gaussian(grid, amplitude=1.0, width=1.0, phase=0.0):
    """amplitude * exp(-(r/width)^2) * exp(i phase r^2) on *grid*."""
    r = grid.nodes
    return FieldState(grid, amplitude * np.exp(-(r / width) ** 2 + 1j * phase * r * r))


def relative(a, b):
    """|a - b| / |b|."""
    return abs(a - b) / abs(b)


@pytest.fixture(scope="session")
def gs_grid():
    return RadialGrid(20.0, 4096)


@pytest.fixture(scope="session")
def ground_state(gs_grid):
    """Cubic (alpha = 2) ground state on the fine grid."""
    return solve_ground_state(2.0, gs_grid)


@pytest.fixture(scope="session")
def sim_grid():
    return RadialGrid(40.0, 2048)


@pytest.fixture(scope="session")
def sim_ground_state(sim_grid):
    """Cubic ground state on the evolution grid."""
    return solve_ground_state(2.0, sim_grid)


@pytest.fixture(scope="session")
def cutoffs_10():
    return build_cutoffs(0.1, 10.0)


@pytest.fixture(scope="session")
def defocusing_trajectory(sim_grid):
    """Defocusing cubic Gaussian with a chirp, V = 0, t in [0, 0.5]."""
    cfg = SolverConfig(sim_grid, dt=1e-3, t_end=0.5, sign=Sign.DEFOCUSING, alpha=2.0)
    return evolve(gaussian(sim_grid, 1.0, 1.5, 0.3), cfg, PotentialSpec.zero())


@pytest.fixture(scope="session")
def yukawa_trajectory(sim_grid):
    """Focusing cubic Gaussian in a repulsive Yukawa potential."""
    cfg = SolverConfig(sim_grid, dt=1e-3, t_end=0.5, sign=Sign.FOCUSING, alpha=2.0)
    return evolve(gaussian(sim_grid, 0.5, 1.5), cfg, PotentialSpec.yukawa(1.0, 0.5, 1.0))
