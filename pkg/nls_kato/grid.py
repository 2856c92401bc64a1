"""
Radial grids and quadrature for spherically symmetric fields in 3D.

A field u(r) is sampled at r_j = j*h, j = 1..n, h = r_max/n.  The
substituted variable v = r*u closes with v(0) = v(r_{n+1}) = 0, which is
the Dirichlet problem the kinetic step of the solver works on.

Integrals use the uniform rule::

    4*pi * h * sum_j r_j**2 * f_j

i.e. the trapezoid rule on [0, r_{n+1}] with vanishing end values.  For
radial integrands (even in r) this rule is spectrally accurate, and it is
exactly the discrete mass conserved by the implicit-midpoint kinetic step.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import NLSConfigurationError

logger = logging.getLogger("nlskato.grid")

# ── Constants ────────────────────────────────────────────────────────────────

MIN_POINTS: int = 64
FOUR_PI: float = 4.0 * np.pi


# ── Grid ─────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid excluding the origin.

    Args:
        r_max:    Outermost node.
        n_points: Number of nodes (at least 64).

    Raises:
        NLSConfigurationError: On a non-positive radius or too few nodes.

    Example::

        grid = RadialGrid(r_max=20.0, n_points=4096)
        grid.spacing      # 0.0048828125
    """

    r_max: float
    n_points: int

    def __post_init__(self):
        if not np.isfinite(self.r_max) or self.r_max <= 0.0:
            raise NLSConfigurationError(
                f"r_max must be a positive finite radius, got {self.r_max!r}"
            )
        if int(self.n_points) != self.n_points or self.n_points < MIN_POINTS:
            raise NLSConfigurationError(
                f"n_points must be an integer >= {MIN_POINTS}, got {self.n_points!r}"
            )
        object.__setattr__(self, "r_max", float(self.r_max))
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def spacing(self) -> float:
        """Uniform step h = r_max / n_points."""
        return self.r_max / self.n_points

    @cached_property
    def nodes(self) -> np.ndarray:
        """Read-only array of the n radii r_1..r_n."""
        r = self.spacing * np.arange(1, self.n_points + 1, dtype=float)
        r.setflags(write=False)
        return r

    @cached_property
    def weights(self) -> np.ndarray:
        """Quadrature weights 4*pi*h*r_j**2."""
        w = FOUR_PI * self.spacing * self.nodes ** 2
        w.setflags(write=False)
        return w

    def outer_mask(self, fraction: float = 0.1) -> np.ndarray:
        """Boolean mask of the nodes in the outermost *fraction* of the grid."""
        return self.nodes > (1.0 - fraction) * self.r_max

    def __repr__(self) -> str:
        return f"RadialGrid(r_max={self.r_max!r}, n_points={self.n_points})"


# ── Quadrature ───────────────────────────────────────────────────────────────

def radial_integral(values: np.ndarray, grid: RadialGrid) -> float:
    """Return the integral over R^3 of a radial function sampled on *grid*."""
    return float(np.dot(grid.weights, np.asarray(values, dtype=float)))


def radial_derivative_v(v: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order derivative of v = r*u at r_0, r_1, ..., r_{n+1}.

    v is reflected oddly about r = 0 and about r_{n+1}, which encodes the
    Dirichlet closure and the even extension of u through the origin.

    Returns:
        Array of length n + 2.
    """
    n = v.shape[0]
    ext = np.empty(n + 6, dtype=v.dtype)
    ext[0] = -v[1]
    ext[1] = -v[0]
    ext[2] = 0.0
    ext[3:n + 3] = v
    ext[n + 3] = 0.0
    ext[n + 4] = -v[n - 1]
    ext[n + 5] = -v[n - 2]
    return (
        -ext[4:n + 6] + 8.0 * ext[3:n + 5] - 8.0 * ext[1:n + 3] + ext[0:n + 2]
    ) / (12.0 * h)


def radial_gradient(values: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Return d/dr of a radial field at the grid nodes."""
    r = grid.nodes
    dv = radial_derivative_v(r * values, grid.spacing)[1:-1]
    return (dv - values) / r


def grad_norm_sq(values: np.ndarray, grid: RadialGrid) -> float:
    """Return ||grad u||^2 = 4*pi * int |d/dr (r u)|^2 dr.

    The identity holds for radial fields vanishing at both ends; the
    integral is the trapezoid rule over r_0..r_{n+1}.
    """
    dv = radial_derivative_v(grid.nodes * values, grid.spacing)
    sq = np.abs(dv) ** 2
    total = np.sum(sq) - 0.5 * (sq[0] + sq[-1])
    return float(FOUR_PI * grid.spacing * total)


def resample(r_src: np.ndarray, values: np.ndarray, grid: RadialGrid) -> np.ndarray:
    """Linearly interpolate a (possibly complex) radial profile onto *grid*.

    Values beyond the last source radius are set to zero.
    """
    r_src = np.asarray(r_src, dtype=float)
    values = np.asarray(values)
    if r_src.ndim != 1 or r_src.shape != values.shape or r_src.size < 2:
        raise NLSConfigurationError("profile radii and values must be 1-D and equal length")
    if np.any(np.diff(r_src) <= 0.0):
        raise NLSConfigurationError("profile radii must be strictly increasing")
    re = np.interp(grid.nodes, r_src, values.real, right=0.0)
    if np.iscomplexobj(values):
        return re + 1j * np.interp(grid.nodes, r_src, values.imag, right=0.0)
    return re.astype(complex)
