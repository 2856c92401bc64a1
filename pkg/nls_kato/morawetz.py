"""
Localized Morawetz machinery: cutoffs, actions, identity terms, Galilean shift.

Cutoffs
    chi is a quintic smoothstep, 1 on [0, 1-eta] and 0 beyond 1.  With
    omega_3 the volume of the unit ball,

        phi_R(x)  = 1/(omega_3 R^3) int chi_R^2(x - z) chi_R^2(z) dz
        phi1_R(x) = 1/(omega_3 R^3) int chi_R^2(x - z) chi_R^(alpha+2)(z) dz
        psi_R(r)  = (1/r) int_0^r phi_R

    All three are scale invariant, so they are tabulated once on the unit
    table rho in [0, 2] and read at r/R.  The autocorrelation is a 2D
    quadrature in (|z|, cos theta): the cos-theta integral is exact where
    chi(x - z) is 0 or 1 and Gauss-Legendre across the transition shell.

Morawetz action
    M_R = int psi_R(x) x . 2 Im(conj(u) grad u) dx, and for radial u

        dM_R/dt = s 2a/(a+2) int (phi + 2 psi) |u|^(a+2)      (nonlinear)
                + int grad(phi + 2 psi) . grad |u|^2            (dispersive)
                + 4 int phi |d_r u|^2                          (kinetic)
                - 2 int psi r d_r V |u|^2                      (potential)

    The angular-derivative part of the kinetic term vanishes identically for
    radial fields; :func:`angular_remainder` evaluates it for boosted ones.

Galilean shift
    For the axisymmetric field e^{i k x_3} u(r) and a cutoff centred at
    z = d e_3 every integral is a 2D quadrature in (r, cos theta).
"""

import csv
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import cumulative_trapezoid

from .exceptions import NLSConfigurationError, NLSDomainError, NLSSolverError
from .functionals import FieldState, Sign, coercivity_nu, kinetic, mass
from .grid import radial_gradient, radial_integral
from .potentials import PotentialSpec, radial_derivative

logger = logging.getLogger("nlskato.morawetz")

MIN_RESOLUTION: int = 128
DEFAULT_RESOLUTION: int = 513
DEFAULT_N_S: int = 512
DEFAULT_N_MU: int = 256
COERCIVITY_SLACK: float = 1e-8
SHIFT_FLOOR: float = 1e-14
INEQUALITY_TOL: float = 1e-3
DPSI_IDENTITY_TOL: float = 1e-2
BEYOND_SAMPLES: int = 25


# ── Cutoff profile ───────────────────────────────────────────────────────────

def smoothstep_chi(x, eta: float):
    """chi(x): 1 for x <= 1-eta, 0 for x >= 1, quintic in between."""
    t = np.clip((1.0 - np.asarray(x, dtype=float)) / eta, 0.0, 1.0)
    return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)


def smoothstep_dchi(x, eta: float):
    """d chi / dx."""
    t = np.clip((1.0 - np.asarray(x, dtype=float)) / eta, 0.0, 1.0)
    return -30.0 * t * t * (1.0 - t) ** 2 / eta


@dataclass(frozen=True, eq=False)
class CutoffProfile:
    """Tabulated phi_R, phi1_R, psi_R for one (eta, R, alpha).

    The tables live on the unit radius ``rho``; every ``*_at`` accessor
    takes physical radii.
    """

    eta: float
    radius: float
    alpha: float
    rho: np.ndarray
    chi: np.ndarray
    phi: np.ndarray
    phi1: np.ndarray
    psi: np.ndarray
    dphi: np.ndarray
    n_s: int = DEFAULT_N_S
    n_mu: int = DEFAULT_N_MU

    @property
    def radii(self) -> np.ndarray:
        """Physical radii R*rho of the table (out to 2R)."""
        return self.radius * self.rho

    @property
    def phi_integral(self) -> float:
        """int_0^2 phi on the unit table; psi_1(rho) = phi_integral/rho beyond 2."""
        return float(self.psi[-1] * self.rho[-1])

    @property
    def sup_psi_r(self) -> float:
        """sup_r psi_R(r) r = R int_0^2 phi."""
        return self.radius * self.phi_integral

    def chi_at(self, r):
        return smoothstep_chi(np.asarray(r) / self.radius, self.eta)

    def dchi_at(self, r):
        """d/dr chi_R(r)."""
        return smoothstep_dchi(np.asarray(r) / self.radius, self.eta) / self.radius

    def phi_at(self, r):
        return np.interp(np.asarray(r) / self.radius, self.rho, self.phi, right=0.0)

    def phi1_at(self, r):
        return np.interp(np.asarray(r) / self.radius, self.rho, self.phi1, right=0.0)

    def direct(self, r) -> tuple:
        """phi_R and phi1_R at *r* from the autocorrelation quadrature itself,
        without the table (so also at and beyond 2R)."""
        x = np.atleast_1d(np.asarray(r, dtype=float)) / self.radius
        return _autocorrelations(x, self.eta, self.alpha, self.n_s, self.n_mu)

    def dphi_at(self, r):
        return np.interp(np.asarray(r) / self.radius, self.rho, self.dphi, right=0.0) / self.radius

    def psi_at(self, r):
        x = np.asarray(r, dtype=float) / self.radius
        inside = np.interp(x, self.rho, self.psi)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = self.phi_integral / x
        return np.where(x <= self.rho[-1], inside, tail)

    def dpsi_at(self, r):
        """d/dr psi_R = (phi_R - psi_R)/r."""
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = (self.phi_at(r) - self.psi_at(r)) / r
        return np.where(r > 0.0, d, 0.0)

    def weight_at(self, r):
        """phi + 2 psi = div(x psi_R)."""
        return self.phi_at(r) + 2.0 * self.psi_at(r)

    def dweight_at(self, r):
        return self.dphi_at(r) + 2.0 * self.dpsi_at(r)


def _gauss_pieces(breaks: np.ndarray, order: int):
    """Gauss-Legendre nodes and weights over consecutive [breaks[i], breaks[i+1]]."""
    x, w = leggauss(order)
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b - a <= 0.0:
            continue
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _angular_overlap(rho: float, s: np.ndarray, eta: float, gl_mu) -> np.ndarray:
    """int_{-1}^{1} chi^2(|x - z|) d(cos theta) for |x| = rho, |z| = s."""
    if rho == 0.0:
        return 2.0 * smoothstep_chi(s, eta) ** 2
    x, w = gl_mu
    two_rs = 2.0 * rho * s
    base = rho * rho + s * s
    upper = np.clip((base - (1.0 - eta) ** 2) / two_rs, -1.0, 1.0)
    lower = np.clip((base - 1.0) / two_rs, -1.0, 1.0)
    half = 0.5 * (upper - lower)
    mu = lower[:, None] + half[:, None] * (x[None, :] + 1.0)
    dist = np.sqrt(np.maximum(base[:, None] - two_rs[:, None] * mu, 0.0))
    shell = half * np.sum(w[None, :] * smoothstep_chi(dist, eta) ** 2, axis=1)
    return (1.0 - upper) + shell


def _autocorrelations(rho: np.ndarray, eta: float, alpha: float, n_s: int, n_mu: int):
    gl_mu = leggauss(n_mu)
    phi = np.empty_like(rho)
    phi1 = np.empty_like(rho)
    for i, x in enumerate(rho):
        breaks = np.unique(np.clip(
            [0.0, 1.0 - eta, 1.0, abs(x - (1.0 - eta)), x + 1.0 - eta, abs(x - 1.0), x + 1.0],
            0.0, 1.0,
        ))
        order = max(16, n_s // max(1, breaks.size - 1))
        s, ws = _gauss_pieces(breaks, order)
        overlap = _angular_overlap(x, s, eta, gl_mu)
        chi_s = smoothstep_chi(s, eta)
        kernel = ws * 1.5 * s * s * overlap
        phi[i] = np.sum(kernel * chi_s ** 2)
        phi1[i] = np.sum(kernel * chi_s ** (alpha + 2.0))
    return phi, phi1


def build_cutoffs(eta: float, radius: float, resolution: int = DEFAULT_RESOLUTION,
                  alpha: float = 2.0, n_s: int = DEFAULT_N_S,
                  n_mu: int = DEFAULT_N_MU) -> CutoffProfile:
    """Tabulate chi, phi_R, phi1_R and psi_R.

    Args:
        eta:        Width of the smoothing shell, in (0, 1).
        radius:     R > 0.
        resolution: Table points on [0, 2R] (at least 128).
        alpha:      Exponent used in phi1_R.
        n_s, n_mu:  Gauss-Legendre budget for |z| and cos(theta).

    Raises:
        NLSDomainError:        eta or radius out of range.
        NLSConfigurationError: resolution below 128.

    Example::

        p = build_cutoffs(0.1, 10.0)
        p.phi_at(0.0)          # ~ 3 int_0^1 chi^4 s^2 ds
    """
    if not 0.0 < eta < 1.0:
        raise NLSDomainError(f"eta must lie in (0, 1), got {eta!r}")
    if not radius > 0.0:
        raise NLSDomainError(f"radius must be positive, got {radius!r}")
    if resolution < MIN_RESOLUTION:
        raise NLSConfigurationError(
            f"cutoff resolution must be >= {MIN_RESOLUTION}, got {resolution}"
        )
    rho = np.linspace(0.0, 2.0, int(resolution))
    phi, phi1 = _autocorrelations(rho, eta, alpha, n_s, n_mu)
    cumulative = cumulative_trapezoid(phi, rho, initial=0.0)
    psi = np.empty_like(phi)
    psi[0] = phi[0]
    psi[1:] = cumulative[1:] / rho[1:]
    dphi = np.gradient(phi, rho, edge_order=2)
    dphi[0] = 0.0
    for arr in (rho, phi, phi1, psi, dphi):
        arr.setflags(write=False)
    chi = smoothstep_chi(rho, eta)
    chi.setflags(write=False)
    logger.info("Cutoffs eta=%g R=%g: phi(0)=%.10f, int phi=%.6f",
                eta, radius, phi[0], cumulative[-1])
    return CutoffProfile(float(eta), float(radius), float(alpha), rho, chi, phi, phi1, psi, dphi,
                         int(n_s), int(n_mu))


def export_cutoffs_csv(p: CutoffProfile, path: str) -> None:
    """Columns r, chi, phi, phi1, psi on the physical table."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "chi", "phi", "phi1", "psi"])
        for row in zip(p.radii, p.chi, p.phi, p.phi1, p.psi):
            writer.writerow([repr(float(x)) for x in row])


@dataclass
class CutoffReport:
    """Fitted constants of the cutoff bounds for one profile."""

    c_psi: float
    dpsi_identity_error: float
    c_grad_phi: float
    c_phi_minus_phi1: float
    psi_r_over_R_range: tuple
    c_psi_minus_phi: float
    c_grad_psi: float
    psi_minus_phi_min: float
    phi_beyond_2R_max: float
    holds: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def verify_cutoff_properties(p: CutoffProfile) -> CutoffReport:
    """Fit the constants in the pointwise bounds on phi_R and psi_R.

    Bounds checked (C fitted as the max ratio over a radius sweep to 8R):
    |psi| <= C min(1, R/r); d_r psi = (phi - psi)/r against numerical
    differentiation; |d_r phi| <= C/R; |phi - phi1| <= C eta;
    psi r/R in [c1, c2] for r >= R; |psi - phi| <= C min(r/R, R/r);
    |d_r psi| <= C min(1/R, R/r^2).

    ``holds`` also needs the derivative identity within
    :data:`DPSI_IDENTITY_TOL` and phi_R, phi1_R to vanish at and beyond 2R
    when evaluated by quadrature rather than read from the table.
    """
    R = p.radius
    r = np.linspace(R * 1e-3, 8.0 * R, 4001)
    phi, psi = p.phi_at(r), p.psi_at(r)
    dpsi = p.dpsi_at(r)

    c_psi = float(np.max(np.abs(psi) / np.minimum(1.0, R / r)))
    numeric = np.gradient(psi, r, edge_order=2)
    dpsi_err = float(np.max(np.abs(numeric - dpsi)) * R)
    c_grad_phi = float(np.max(np.abs(p.dphi_at(r))) * R)
    c_phi_phi1 = float(np.max(np.abs(p.phi - p.phi1)) / p.eta)
    far = r >= R
    ratio = psi[far] * r[far] / R
    c_diff = float(np.max(np.abs(psi - phi) / np.minimum(r / R, R / r)))
    c_grad_psi = float(np.max(np.abs(dpsi) / np.minimum(1.0 / R, R / r ** 2)))
    diff_min = float(np.min(p.psi - p.phi))
    far_phi, far_phi1 = p.direct(np.linspace(2.0 * R, 8.0 * R, BEYOND_SAMPLES))
    beyond = float(max(np.max(np.abs(far_phi)), np.max(np.abs(far_phi1))))

    constants = (c_psi, c_grad_phi, c_phi_phi1, c_diff, c_grad_psi)
    holds = (
        all(np.isfinite(constants)) and diff_min >= -1e-12 and beyond == 0.0
        and float(np.min(ratio)) > 0.0 and dpsi_err <= DPSI_IDENTITY_TOL
    )
    return CutoffReport(
        c_psi=c_psi,
        dpsi_identity_error=dpsi_err,
        c_grad_phi=c_grad_phi,
        c_phi_minus_phi1=c_phi_phi1,
        psi_r_over_R_range=(float(np.min(ratio)), float(np.max(ratio))),
        c_psi_minus_phi=c_diff,
        c_grad_psi=c_grad_psi,
        psi_minus_phi_min=diff_min,
        phi_beyond_2R_max=beyond,
        holds=bool(holds),
    )


# ── Morawetz action and identity ─────────────────────────────────────────────

def _current(u: FieldState):
    """(u_r, Im(conj(u) u_r)) on the grid."""
    u_r = radial_gradient(u.values, u.grid)
    return u_r, np.imag(np.conj(u.values) * u_r)


def morawetz_action(u: FieldState, p: CutoffProfile) -> float:
    """M_R = 4 pi int psi_R r 2 Im(conj(u) u_r) r^2 dr."""
    r = u.grid.nodes
    _, j = _current(u)
    return radial_integral(p.psi_at(r) * r * 2.0 * j, u.grid)


def morawetz_action_bound(u: FieldState, p: CutoffProfile) -> float:
    """2 sup(psi_R r) ||u||_2 ||grad u||_2, an upper bound for |M_R|."""
    return 2.0 * p.sup_psi_r * np.sqrt(mass(u) * kinetic(u))


def angular_remainder(u: FieldState, p: CutoffProfile, boost: float = 0.0,
                      n_mu: int = 32) -> float:
    """4 int (psi_R - phi_R) |grad_ang w|^2 for w = e^{i boost x_3} u.

    grad_ang w = grad w - x^ (x^ . grad w) is formed on an (r, cos theta)
    mesh.  It vanishes for radial fields; a boost leaves
    boost^2 |u|^2 sin^2(theta).
    """
    grid = u.grid
    r = grid.nodes
    u_r = radial_gradient(u.values, grid)[:, None]
    values = u.values[:, None]
    x, w = leggauss(n_mu)
    mu = x[None, :]
    sin = np.sqrt(1.0 - mu * mu)
    # e^{-i boost x_3} grad w in (x_1, x_3) components; x_2 is zero in this plane
    g1 = u_r * sin
    g3 = u_r * mu + 1j * boost * values
    g_r = sin * g1 + mu * g3
    ang_sq = np.abs(g1 - sin * g_r) ** 2 + np.abs(g3 - mu * g_r) ** 2
    excess = (p.psi_at(r) - p.phi_at(r))[:, None]
    weight = 0.5 * grid.weights[:, None] * w[None, :]
    return 4.0 * float(np.sum(weight * excess * ang_sq))


class MorawetzTerms(NamedTuple):
    nonlinear: float
    dispersive: float
    kinetic: float
    potential: float


def morawetz_terms(u: FieldState, p: CutoffProfile, spec: PotentialSpec,
                   sign: Sign, alpha: float, include_angular: bool = False) -> MorawetzTerms:
    """The four terms of dM_R/dt evaluated at one state.

    ``include_angular`` adds :func:`angular_remainder`, which is zero for
    radial fields up to rounding.
    """
    sign = Sign(sign)
    grid = u.grid
    r = grid.nodes
    u_r, _ = _current(u)
    density = np.abs(u.values) ** 2
    nonlinear = sign.s * 2.0 * alpha / (alpha + 2.0) * radial_integral(
        p.weight_at(r) * density ** (0.5 * alpha + 1.0), grid
    )
    d_density = 2.0 * np.real(np.conj(u.values) * u_r)
    dispersive = radial_integral(p.dweight_at(r) * d_density, grid)
    kin = 4.0 * radial_integral(p.phi_at(r) * np.abs(u_r) ** 2, grid)
    if include_angular:
        kin += angular_remainder(u, p)
    pot = 0.0
    if not spec.is_zero:
        pot = -2.0 * radial_integral(p.psi_at(r) * r * radial_derivative(spec, r) * density, grid)
    return MorawetzTerms(nonlinear, dispersive, kin, pot)


@dataclass
class MorawetzSeries:
    """Action and identity terms along a trajectory.

    ``times``/``action`` cover every snapshot; the remaining arrays cover
    interior snapshots where the central difference exists.
    """

    times: np.ndarray
    action: np.ndarray
    interior_times: np.ndarray
    dM_dt: np.ndarray
    terms: np.ndarray
    residual: np.ndarray
    absolute: np.ndarray
    stride: int = 0
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "times": self.times, "action": self.action,
            "interior_times": self.interior_times, "dM_dt": self.dM_dt,
            "terms": self.terms, "residual": self.residual,
            "absolute": self.absolute, "stride": self.stride,
        }


def _central_differences(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    return (values[2:] - values[:-2]) / (times[2:] - times[:-2])


def morawetz_identity_residual(traj, p: CutoffProfile, spec: PotentialSpec,
                               sign: Sign, alpha: float,
                               include_angular: bool = False) -> MorawetzSeries:
    """Compare dM_R/dt (central differences over snapshots) with the sum of
    the identity terms at each interior snapshot.

    residual = |dM/dt - sum T| / sum |T|, absolute = |dM/dt - sum T|.

    Raises:
        NLSSolverError: Fewer than three snapshots.
    """
    snaps = traj.snapshots
    if len(snaps) < 3:
        raise NLSSolverError(f"identity residual needs >= 3 snapshots, got {len(snaps)}")
    times = np.array([s.time for s in snaps])
    action = np.array([morawetz_action(s, p) for s in snaps])
    dM = _central_differences(times, action)
    terms = np.array([
        morawetz_terms(s, p, spec, sign, alpha, include_angular) for s in snaps[1:-1]
    ])
    total = terms.sum(axis=1)
    scale = np.abs(terms).sum(axis=1)
    absolute = np.abs(dM - total)
    with np.errstate(divide="ignore", invalid="ignore"):
        residual = np.where(scale > 0.0, absolute / scale, 0.0)
    logger.debug("Morawetz residual R=%g: max %.3e over %d points",
                 p.radius, float(np.max(residual)), residual.size)
    return MorawetzSeries(
        times=times, action=action, interior_times=times[1:-1], dM_dt=dM,
        terms=terms, residual=residual, absolute=absolute,
        stride=getattr(traj.cfg, "snapshot_stride", 0),
    )


def _inequality_slack(traj, p: CutoffProfile, spec: PotentialSpec, alpha: float,
                      error_sign: float) -> tuple:
    snaps = traj.snapshots
    if len(snaps) < 3:
        raise NLSSolverError(f"Morawetz inequality needs >= 3 snapshots, got {len(snaps)}")
    times = np.array([s.time for s in snaps])
    action = np.array([morawetz_action(s, p) for s in snaps])
    dM = _central_differences(times, action)
    slack = np.empty(dM.size)
    c6 = 6.0 * alpha / (alpha + 2.0)
    c4 = 4.0 * alpha / (alpha + 2.0)
    for i, s in enumerate(snaps[1:-1]):
        grid = s.grid
        r = grid.nodes
        u_r, _ = _current(s)
        density = np.abs(s.values) ** 2
        lp = density ** (0.5 * alpha + 1.0)
        dispersive = radial_integral(p.dweight_at(r) * 2.0 * np.real(np.conj(s.values) * u_r), grid)
        errors = (
            c6 * radial_integral((p.phi_at(r) - p.phi1_at(r)) * lp, grid)
            + c4 * radial_integral((p.psi_at(r) - p.phi_at(r)) * lp, grid)
        )
        potential = 0.0
        if not spec.is_zero:
            potential = 2.0 * radial_integral(
                p.psi_at(r) * r * radial_derivative(spec, r) * density, grid
            )
        slack[i] = dM[i] - dispersive + error_sign * errors + potential
    return times[1:-1], slack


def focusing_inequality_slack(traj, p: CutoffProfile, spec: PotentialSpec, alpha: float):
    """Right side minus left side of the focusing Morawetz inequality

        -2 int psi_R r d_r V |u|^2 <= dM/dt - int grad(phi + 2 psi).grad|u|^2
                                      + 6a/(a+2) int (phi - phi1)|u|^(a+2)
                                      + 4a/(a+2) int (psi - phi)|u|^(a+2)

    at each interior snapshot (the O(R^-2) remainder is left out).  The
    left side is often quoted as -R int d_r V |u|^2; psi_R r is only
    comparable to R, and for data concentrated inside r << R the R-weighted
    form fails even though the estimate holds.

    Returns:
        ``(times, slack)``; the inequality holds where slack >= -1e-3.
    """
    return _inequality_slack(traj, p, spec, alpha, +1.0)


def defocusing_inequality_slack(traj, p: CutoffProfile, spec: PotentialSpec, alpha: float):
    """Defocusing counterpart of :func:`focusing_inequality_slack`; the
    phi - phi1 and psi - phi terms enter with a minus sign."""
    return _inequality_slack(traj, p, spec, alpha, -1.0)


# ── Galilean machinery ───────────────────────────────────────────────────────

class _AxialMesh(NamedTuple):
    """Quadrature mesh in (r, cos theta) restricted to the cutoff support."""

    r: np.ndarray
    mu: np.ndarray
    weight: np.ndarray
    chi: np.ndarray
    dchi: np.ndarray
    alignment: np.ndarray
    u: np.ndarray
    u_r: np.ndarray


def _axial_mesh(u: FieldState, p: CutoffProfile, z_offset: float, n_mu: int) -> _AxialMesh:
    grid = u.grid
    keep = grid.nodes <= abs(z_offset) + p.radius
    r = grid.nodes[keep]
    u_r = radial_gradient(u.values, grid)[keep]
    values = u.values[keep]
    x, w = leggauss(n_mu)
    rr, mu = r[:, None], x[None, :]
    dist = np.sqrt(np.maximum(rr * rr + z_offset * z_offset - 2.0 * rr * z_offset * mu, 0.0))
    weight = 2.0 * np.pi * grid.spacing * rr * rr * w[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        alignment = np.where(dist > 0.0, (rr - z_offset * mu) / dist, 1.0)
    return _AxialMesh(
        r=rr, mu=mu, weight=weight, chi=p.chi_at(dist), dchi=p.dchi_at(dist),
        alignment=alignment, u=values[:, None], u_r=u_r[:, None],
    )


def _localized_moments(m: _AxialMesh):
    """A = int chi^2 |u|^2, B = int chi^2 |u_r|^2, J = int chi^2 j mu."""
    chi2 = m.chi ** 2
    density = np.abs(m.u) ** 2
    j = np.imag(np.conj(m.u) * m.u_r)
    a = float(np.sum(m.weight * chi2 * density))
    b = float(np.sum(m.weight * chi2 * np.abs(m.u_r) ** 2))
    jm = float(np.sum(m.weight * chi2 * j * m.mu))
    return a, b, jm


def galilean_shift(u: FieldState, p: CutoffProfile, center_offset: float,
                   boost: float = 0.0, n_mu: int = 128) -> float:
    """Axial xi zeroing the localized momentum of e^{i boost x_3} u around
    z = center_offset e_3.

    xi = -boost - int chi_R^2(x - z) j mu / int chi_R^2(x - z) |u|^2 with
    j = Im(conj(u) u_r); zero when the denominator is below 1e-14 mass(u).
    """
    m = _axial_mesh(u, p, center_offset, n_mu)
    a, _, jm = _localized_moments(m)
    total = mass(u)
    if total == 0.0 or a < SHIFT_FLOOR * total:
        return 0.0
    return -boost - jm / a


def localized_momentum(u: FieldState, p: CutoffProfile, z_offset: float, xi: float,
                       boost: float = 0.0, n_mu: int = 128) -> float:
    """Axial int chi_R^2(x - z) Im(conj(u^xi) grad u^xi) for u^xi = e^{i(boost+xi) x_3} u."""
    m = _axial_mesh(u, p, z_offset, n_mu)
    a, _, jm = _localized_moments(m)
    return (boost + xi) * a + jm


def interaction_integrand(u: FieldState, p: CutoffProfile, z_offset: float, xi: float,
                          boost: float = 0.0, n_mu: int = 128) -> float:
    """A B - |P|^2 for the boosted field, all localized by chi_R^2(x - z).

    A = int chi^2 |u^xi|^2, B = int chi^2 |grad u^xi|^2,
    P = int chi^2 Im(conj(u^xi) grad u^xi).  Only the axial component of P
    survives; the combination does not depend on xi.
    """
    m = _axial_mesh(u, p, z_offset, n_mu)
    a, b0, jm = _localized_moments(m)
    kappa = boost + xi
    b = b0 + kappa * kappa * a + 2.0 * kappa * jm
    pz = kappa * a + jm
    return a * b - pz * pz


@dataclass
class CoercivityResult:
    lhs: float
    rhs: float
    holds: bool
    xi: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def coercivity_check(u: FieldState, p: CutoffProfile, z_offset: float, gs, rho: float,
                     boost: float = 0.0, n_mu: int = 128) -> CoercivityResult:
    """Localized coercivity for w = chi_R(. - z) u^xi with xi from
    :func:`galilean_shift`.

    lhs = ||grad w||^2 - 3a/(2(a+2)) ||w||_{a+2}^{a+2},
    rhs = nu(rho) ||grad w||^2, holds when lhs >= rhs - 1e-8.
    """
    alpha = gs.alpha
    xi = galilean_shift(u, p, z_offset, boost, n_mu)
    kappa = boost + xi
    m = _axial_mesh(u, p, z_offset, n_mu)
    density = np.abs(m.u) ** 2
    j = np.imag(np.conj(m.u) * m.u_r)
    radial_part = (
        m.chi ** 2 * np.abs(m.u_r) ** 2
        + density * m.dchi ** 2
        + 2.0 * m.chi * m.dchi * np.real(np.conj(m.u) * m.u_r) * m.alignment
    )
    grad_w = radial_part + m.chi ** 2 * (kappa * kappa * density + 2.0 * kappa * j * m.mu)
    k = float(np.sum(m.weight * grad_w))
    lp = float(np.sum(m.weight * (m.chi * np.sqrt(density)) ** (alpha + 2.0)))
    lhs = k - 3.0 * alpha / (2.0 * (alpha + 2.0)) * lp
    rhs = coercivity_nu(rho, alpha) * k
    return CoercivityResult(lhs, rhs, bool(lhs >= rhs - COERCIVITY_SLACK), xi)


# ── Interaction action ───────────────────────────────────────────────────────

@dataclass(frozen=True)
class InteractionQuad:
    """Coarse quadrature for the interaction action.

    ``n_r`` radial nodes are taken as an evenly strided subset of the grid.
    """

    n_r: int = 256
    n_mu: int = 64

    def __post_init__(self):
        if self.n_r < 32 or self.n_mu < 16:
            raise NLSConfigurationError(
                f"interaction quadrature needs n_r >= 32 and n_mu >= 16, got {self.n_r}, {self.n_mu}"
            )


@dataclass
class InteractionResult:
    value: float
    bound: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def interaction_action(u: FieldState, p: CutoffProfile,
                       quad: InteractionQuad = InteractionQuad()) -> InteractionResult:
    """Interaction Morawetz action for a radial field.

        M = int int |u(y)|^2 psi_R(x - y) (x - y) . 2 Im(conj(u) grad u)(x) dx dy

    reduced to (r_x, r_y, cos angle).  ``bound`` is
    2 sup(psi_R r) ||u||_2^3 ||grad u||_2.
    """
    grid = u.grid
    stride = max(1, grid.n_points // quad.n_r)
    idx = np.arange(stride - 1, grid.n_points, stride)
    r = grid.nodes[idx]
    h = grid.spacing * stride
    _, j_full = _current(u)
    j = j_full[idx]
    density = np.abs(u.values[idx]) ** 2

    x, w = leggauss(quad.n_mu)
    rx = r[:, None, None]
    ry = r[None, :, None]
    mu = x[None, None, :]
    dist = np.sqrt(np.maximum(rx * rx + ry * ry - 2.0 * rx * ry * mu, 0.0))
    integrand = p.psi_at(dist) * (rx - ry * mu)
    inner = np.tensordot(integrand, w, axes=([2], [0]))
    weights = 8.0 * np.pi ** 2 * h * h * (r ** 2)[:, None] * (r ** 2)[None, :]
    value = float(np.sum(weights * inner * (2.0 * j)[:, None] * density[None, :]))
    m = mass(u)
    bound = 2.0 * p.sup_psi_r * m ** 1.5 * np.sqrt(kinetic(u))
    return InteractionResult(value, float(bound))
