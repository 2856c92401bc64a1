"""
Tests for nls_kato.morawetz — cutoff tables, Morawetz identity, inequality
slack, Galilean shift, interaction action.
"""

import csv
import dataclasses

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import gaussian
from nls_kato.exceptions import NLSConfigurationError, NLSDomainError, NLSSolverError
from nls_kato.functionals import FieldState, Sign
from nls_kato.grid import radial_integral
from nls_kato.morawetz import (
    InteractionQuad,
    angular_remainder,
    build_cutoffs,
    coercivity_check,
    defocusing_inequality_slack,
    export_cutoffs_csv,
    focusing_inequality_slack,
    galilean_shift,
    interaction_action,
    interaction_integrand,
    localized_momentum,
    morawetz_action,
    morawetz_action_bound,
    morawetz_identity_residual,
    morawetz_terms,
    smoothstep_chi,
    smoothstep_dchi,
    verify_cutoff_properties,
)
from nls_kato.potentials import PotentialSpec
from nls_kato.radial_dynamics import SolverConfig, evolve


# ── Helpers ───────────────────────────────────────────────────────────────────

_YUKAWA = PotentialSpec.yukawa(1.0, 0.5, 1.0)


def _short_trajectory(grid):
    cfg = SolverConfig(grid, dt=0.01, t_end=0.01, snapshot_stride=10)
    return evolve(gaussian(grid, 0.5), cfg, PotentialSpec.zero())


# ── Cutoffs ───────────────────────────────────────────────────────────────────

def test_smoothstep_values():
    eta = 0.1
    x = np.array([0.0, 0.5, 0.9, 1.0, 1.5])
    assert np.allclose(smoothstep_chi(x, eta), [1.0, 1.0, 1.0, 0.0, 0.0])
    shell = np.linspace(0.9, 1.0, 21)
    assert np.all(np.diff(smoothstep_chi(shell, eta)) <= 0.0)
    assert smoothstep_chi(0.95, eta) == pytest.approx(0.5)


def test_smoothstep_derivative():
    eta = 0.2
    x = np.linspace(0.81, 0.99, 10)
    h = 1e-6
    fd = (smoothstep_chi(x + h, eta) - smoothstep_chi(x - h, eta)) / (2.0 * h)
    assert np.allclose(smoothstep_dchi(x, eta), fd, atol=1e-6)


@pytest.mark.parametrize("eta, radius", [(0.0, 1.0), (1.0, 1.0), (0.1, 0.0), (0.1, -2.0)])
def test_build_rejects_domain(eta, radius):
    with pytest.raises(NLSDomainError):
        build_cutoffs(eta, radius)


def test_build_rejects_coarse_table():
    with pytest.raises(NLSConfigurationError):
        build_cutoffs(0.1, 1.0, resolution=100)


def test_phi_at_origin(cutoffs_10):
    expected, _ = quad(lambda s: 3.0 * smoothstep_chi(s, 0.1) ** 4 * s * s, 0.0, 1.0,
                       points=[0.9], epsabs=1e-14, epsrel=1e-13)
    assert cutoffs_10.phi_at(0.0) == pytest.approx(expected, rel=1e-9)


def test_phi_vanishes_beyond_2r(cutoffs_10):
    # straight from the quadrature, not the table
    phi, phi1 = cutoffs_10.direct([20.0, 20.5, 25.0, 100.0])
    assert np.all(phi == 0.0)
    assert np.all(phi1 == 0.0)
    assert cutoffs_10.phi[-1] == 0.0
    inside, _ = cutoffs_10.direct([19.0])
    assert inside[0] > 0.0


def test_direct_matches_table(cutoffs_10):
    k = [0, 128, 300]
    phi, phi1 = cutoffs_10.direct(cutoffs_10.radii[k])
    assert phi == pytest.approx(cutoffs_10.phi[k], rel=1e-10)
    assert phi1 == pytest.approx(cutoffs_10.phi1[k], rel=1e-10)


def test_psi_tail(cutoffs_10):
    for r in (30.0, 80.0):
        assert cutoffs_10.psi_at(r) == pytest.approx(cutoffs_10.phi_integral * 10.0 / r)


def test_psi_dominates_phi(cutoffs_10):
    assert np.all(cutoffs_10.psi - cutoffs_10.phi >= -1e-12)
    assert cutoffs_10.psi[0] == cutoffs_10.phi[0]


def test_cutoff_properties(cutoffs_10):
    report = verify_cutoff_properties(cutoffs_10)
    assert report.holds
    assert report.c_phi_minus_phi1 <= 3.0
    assert report.dpsi_identity_error < 1e-2
    lo, hi = report.psi_r_over_R_range
    assert 0.0 < lo <= hi <= cutoffs_10.phi_integral + 1e-6
    assert report.phi_beyond_2R_max == 0.0
    assert set(report.to_dict()) >= {"c_psi", "c_grad_psi", "holds"}


def test_broken_psi_table_fails_properties(cutoffs_10):
    broken = dataclasses.replace(cutoffs_10, psi=cutoffs_10.psi * 1.05)
    report = verify_cutoff_properties(broken)
    assert report.dpsi_identity_error > 1e-2
    assert not report.holds


def test_phi_minus_phi1_constant_stable_under_eta_halving():
    coarse = verify_cutoff_properties(build_cutoffs(0.1, 1.0)).c_phi_minus_phi1
    fine = verify_cutoff_properties(build_cutoffs(0.05, 1.0)).c_phi_minus_phi1
    assert coarse > 0.0
    assert abs(fine - coarse) <= 0.2 * coarse


def test_cutoffs_are_scale_invariant():
    small = build_cutoffs(0.1, 1.0, resolution=129)
    large = build_cutoffs(0.1, 5.0, resolution=129)
    x = np.linspace(0.0, 3.0, 31)
    assert np.allclose(small.phi_at(x), large.phi_at(5.0 * x))
    assert np.allclose(small.psi_at(x[1:]), large.psi_at(5.0 * x[1:]))
    assert large.sup_psi_r == pytest.approx(5.0 * small.sup_psi_r)


def test_export_cutoffs_csv(tmp_path):
    p = build_cutoffs(0.1, 2.0, resolution=129)
    path = tmp_path / "cutoffs.csv"
    export_cutoffs_csv(p, str(path))
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["r", "chi", "phi", "phi1", "psi"]
    assert len(rows) == 130
    assert float(rows[-1][0]) == pytest.approx(4.0)


# ── Morawetz action and identity ──────────────────────────────────────────────

def test_real_field_has_no_action(sim_grid, cutoffs_10):
    assert morawetz_action(gaussian(sim_grid), cutoffs_10) == 0.0


def test_action_bound(sim_grid, cutoffs_10):
    for phase in (0.1, -0.5, 1.0):
        u = gaussian(sim_grid, 1.0, 2.0, phase)
        assert abs(morawetz_action(u, cutoffs_10)) <= morawetz_action_bound(u, cutoffs_10)


def test_outgoing_chirp_has_positive_action(sim_grid, cutoffs_10):
    assert morawetz_action(gaussian(sim_grid, 1.0, 1.5, 0.3), cutoffs_10) > 0.0


def test_identity_defocusing(defocusing_trajectory, cutoffs_10):
    series = morawetz_identity_residual(defocusing_trajectory, cutoffs_10,
                                        PotentialSpec.zero(), Sign.DEFOCUSING, 2.0)
    assert np.max(series.residual) <= 1e-2
    assert series.terms.shape == (series.dM_dt.size, 4)
    assert np.all(series.terms[:, 3] == 0.0)
    assert series.stride == 10


def test_identity_with_potential(yukawa_trajectory, cutoffs_10):
    series = morawetz_identity_residual(yukawa_trajectory, cutoffs_10, _YUKAWA, Sign.FOCUSING, 2.0)
    assert np.max(series.residual) <= 1e-2
    # repulsive V with d_r V <= 0 makes the potential term non-negative
    assert np.all(series.terms[:, 3] >= 0.0)


def _identity_defect(grid, p, dt):
    cfg = SolverConfig(grid, dt=dt, t_end=1.0, snapshot_stride=20, sign=Sign.DEFOCUSING,
                       energy_drift_tol=0.1)
    traj = evolve(gaussian(grid, 1.0, 1.5, 0.3), cfg, PotentialSpec.zero())
    series = morawetz_identity_residual(traj, p, PotentialSpec.zero(), Sign.DEFOCUSING, 2.0)
    return series.interior_times, series.absolute


@pytest.mark.slow
def test_identity_defect_shrinks_fourfold_when_dt_halves(sim_grid, cutoffs_10):
    # fixed stride, so the snapshot spacing halves along with dt
    t1, coarse = _identity_defect(sim_grid, cutoffs_10, 0.01)
    t2, fine = _identity_defect(sim_grid, cutoffs_10, 0.005)
    shared = np.isclose(t2[:, None], t1[None, :], atol=1e-9).any(axis=1)
    assert np.count_nonzero(shared) == t1.size == 4
    ratio = np.linalg.norm(coarse) / np.linalg.norm(fine[shared])
    assert 3.0 <= ratio <= 5.0


def test_angular_term_is_zero_for_radial_fields(sim_grid, cutoffs_10):
    u = gaussian(sim_grid, 1.0, 1.5, 0.3)
    plain = morawetz_terms(u, cutoffs_10, _YUKAWA, Sign.FOCUSING, 2.0)
    angular = morawetz_terms(u, cutoffs_10, _YUKAWA, Sign.FOCUSING, 2.0, include_angular=True)
    assert abs(angular_remainder(u, cutoffs_10)) <= 1e-12 * plain.kinetic
    assert angular.kinetic == pytest.approx(plain.kinetic, rel=1e-12)
    assert angular.nonlinear == plain.nonlinear


@pytest.mark.parametrize("boost", [0.5, 2.0])
def test_angular_term_of_boosted_field(sim_grid, cutoffs_10, boost):
    # |grad_ang e^{i k x_3} u|^2 = k^2 |u|^2 sin^2(theta); the mean of sin^2 is 2/3
    u = gaussian(sim_grid, 1.0, 3.0, 0.2)
    r = sim_grid.nodes
    excess = cutoffs_10.psi_at(r) - cutoffs_10.phi_at(r)
    expected = 4.0 * boost ** 2 * (2.0 / 3.0) * radial_integral(excess * np.abs(u.values) ** 2, sim_grid)
    assert expected > 0.0
    assert angular_remainder(u, cutoffs_10, boost) == pytest.approx(expected, rel=1e-10)


def test_too_few_snapshots(sim_grid, cutoffs_10):
    traj = _short_trajectory(sim_grid)
    assert len(traj.snapshots) == 2
    with pytest.raises(NLSSolverError):
        morawetz_identity_residual(traj, cutoffs_10, PotentialSpec.zero(), Sign.FOCUSING, 2.0)
    with pytest.raises(NLSSolverError):
        focusing_inequality_slack(traj, cutoffs_10, PotentialSpec.zero(), 2.0)


def test_focusing_inequality_below_threshold(yukawa_trajectory, cutoffs_10):
    times, slack = focusing_inequality_slack(yukawa_trajectory, cutoffs_10, _YUKAWA, 2.0)
    assert times.size == slack.size > 0
    assert np.all(slack >= -1e-3)


def test_defocusing_inequality(defocusing_trajectory, cutoffs_10):
    _, slack = defocusing_inequality_slack(defocusing_trajectory, cutoffs_10,
                                           PotentialSpec.zero(), 2.0)
    assert np.all(slack >= -1e-3)


# ── Galilean machinery ────────────────────────────────────────────────────────

@pytest.mark.parametrize("boost", [0.0, 0.7])
def test_shift_zeroes_localized_momentum(sim_grid, cutoffs_10, boost):
    u = gaussian(sim_grid, 1.0, 2.0, 0.4)
    xi = galilean_shift(u, cutoffs_10, 5.0, boost)
    assert localized_momentum(u, cutoffs_10, 5.0, xi, boost) == pytest.approx(0.0, abs=1e-10)


def test_shift_of_real_field_cancels_boost(sim_grid, cutoffs_10):
    assert galilean_shift(gaussian(sim_grid), cutoffs_10, 5.0, boost=1.3) == pytest.approx(-1.3)


def test_shift_of_empty_window_is_zero(sim_grid, cutoffs_10):
    u = gaussian(sim_grid, 1.0, 0.5)
    assert galilean_shift(u, cutoffs_10, 30.0) == 0.0


def test_interaction_integrand_ignores_xi(sim_grid, cutoffs_10):
    u = gaussian(sim_grid, 1.0, 2.0, 0.4)
    values = [interaction_integrand(u, cutoffs_10, 5.0, xi) for xi in (-2.0, 0.0, 0.5, 3.0)]
    assert np.allclose(values, values[0], rtol=1e-10)
    assert values[0] >= 0.0


def test_localized_coercivity_for_half_q(ground_state, cutoffs_10):
    u = FieldState(ground_state.grid, 0.5 * ground_state.q_values)
    result = coercivity_check(u, cutoffs_10, 5.0, ground_state, rho=0.5)
    assert result.holds
    assert result.lhs >= result.rhs > 0.0
    assert result.xi == 0.0


# ── Interaction action ────────────────────────────────────────────────────────

@pytest.mark.parametrize("n_r, n_mu", [(16, 64), (256, 8)])
def test_interaction_quadrature_validation(n_r, n_mu):
    with pytest.raises(NLSConfigurationError):
        InteractionQuad(n_r, n_mu)


def test_interaction_action_bounded(sim_grid, cutoffs_10):
    quad_ = InteractionQuad(128, 32)
    for phase in (0.2, -0.6):
        res = interaction_action(gaussian(sim_grid, 1.0, 2.0, phase), cutoffs_10, quad_)
        assert abs(res.value) <= res.bound
        assert res.value != 0.0
    real = interaction_action(gaussian(sim_grid), cutoffs_10, quad_)
    assert real.value == 0.0
