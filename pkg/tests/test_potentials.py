"""
Tests for nls_kato.potentials — evaluation, norms, hypothesis checks.
"""

import numpy as np
import pytest

from nls_kato.exceptions import NLSDivergenceError, NLSDomainError
from nls_kato.potentials import (
    PotentialFamily,
    PotentialSpec,
    Theorem,
    eval_potential,
    kato_norm_numeric,
    kato_profile,
    lq_norm_numeric,
    negative_part_kato_norm,
    radial_derivative,
    radial_derivative_in_lq,
    validate_assumptions,
    yukawa_kato_norm_closed,
    yukawa_lq_norm_closed,
)


# ── Helpers ───────────────────────────────────────────────────────────────────

_YUKAWAS = [(1.0, 0.5, 2.0), (1.0, 1.0, 1.0), (2.0, 1.5, 0.5)]


# ── Evaluation ────────────────────────────────────────────────────────────────

def test_yukawa_value_at_one():
    spec = PotentialSpec.yukawa(2.0, 1.0, 0.5)
    assert eval_potential(spec, 1.0) == pytest.approx(2.0 * np.exp(-0.5))


def test_inverse_power_value():
    spec = PotentialSpec.inverse_power(3.0, 1.5)
    assert eval_potential(spec, 4.0) == pytest.approx(3.0 / 8.0)


def test_zero_potential_everywhere_zero():
    r = np.linspace(0.1, 10.0, 50)
    assert np.all(eval_potential(PotentialSpec.zero(), r) == 0.0)


def test_origin_is_rejected():
    with pytest.raises(NLSDomainError):
        eval_potential(PotentialSpec.yukawa(1.0, 1.0, 1.0), 0.0)


@pytest.mark.parametrize("sigma", [0.0, 2.0, 2.5])
def test_sigma_outside_range_rejected(sigma):
    with pytest.raises(NLSDomainError):
        PotentialSpec.yukawa(1.0, sigma, 1.0)


def test_yukawa_needs_positive_rate():
    with pytest.raises(NLSDomainError):
        PotentialSpec.yukawa(1.0, 1.0, 0.0)


@pytest.mark.parametrize("spec", [
    PotentialSpec.yukawa(1.0, 0.5, 2.0),
    PotentialSpec.yukawa(-0.3, 1.2, 0.7),
    PotentialSpec.inverse_power(2.0, 1.5),
])
def test_radial_derivative_matches_finite_difference(spec):
    r = np.array([0.3, 1.0, 2.5, 6.0])
    h = 1e-6
    fd = (eval_potential(spec, r + h) - eval_potential(spec, r - h)) / (2.0 * h)
    assert np.allclose(radial_derivative(spec, r), fd, rtol=1e-6)


def test_spec_dict_round_trip():
    spec = PotentialSpec.yukawa(0.01, 0.5, 1.0)
    assert PotentialSpec.from_dict(spec.to_dict()) == spec
    assert spec.to_dict()["family"] == "yukawa"


# ── Norms ─────────────────────────────────────────────────────────────────────

def test_kato_closed_form_value():
    spec = PotentialSpec.yukawa(1.0, 0.5, 2.0)
    assert yukawa_kato_norm_closed(spec) == pytest.approx(3.93740, abs=1e-5)


def test_lq_closed_form_value():
    spec = PotentialSpec.yukawa(1.0, 1.0, 1.0)
    assert yukawa_lq_norm_closed(spec, 1.5) == pytest.approx(3.3246, abs=1e-4)


@pytest.mark.parametrize("c, sigma, a", _YUKAWAS)
def test_kato_quadrature_matches_closed_form(c, sigma, a):
    spec = PotentialSpec.yukawa(c, sigma, a)
    norm, where = kato_norm_numeric(spec)
    assert norm == pytest.approx(yukawa_kato_norm_closed(spec), rel=1e-6)
    assert where == 0.0


@pytest.mark.parametrize("c, sigma, a", _YUKAWAS)
@pytest.mark.parametrize("q", [1.5, 1.8])
def test_lq_quadrature_matches_closed_form(c, sigma, a, q):
    spec = PotentialSpec.yukawa(c, sigma, a)
    assert lq_norm_numeric(spec, q) == pytest.approx(yukawa_lq_norm_closed(spec, q), rel=1e-5)


def test_lq_divergence_reported():
    spec = PotentialSpec.yukawa(2.0, 1.5, 0.5)
    with pytest.raises(NLSDivergenceError):
        yukawa_lq_norm_closed(spec, 2.0)
    with pytest.raises(NLSDivergenceError):
        lq_norm_numeric(spec, 2.0)


def test_lq_needs_q_at_least_one():
    with pytest.raises(NLSDomainError):
        lq_norm_numeric(PotentialSpec.yukawa(1.0, 1.0, 1.0), 0.5)


def test_inverse_power_is_not_in_kato_class():
    spec = PotentialSpec.inverse_power(1.0, 1.0)
    with pytest.raises(NLSDivergenceError):
        kato_norm_numeric(spec)
    with pytest.raises(NLSDivergenceError):
        lq_norm_numeric(spec, 1.5)


def test_kato_profile_decreases_for_repulsive_yukawa():
    spec = PotentialSpec.yukawa(1.0, 1.0, 1.0)
    g = kato_profile(spec, [0.0, 0.5, 1.0, 4.0, 20.0])
    assert np.all(np.diff(g) < 0.0)


def test_linear_in_amplitude():
    small = yukawa_kato_norm_closed(PotentialSpec.yukawa(0.5, 1.0, 1.0))
    large = yukawa_kato_norm_closed(PotentialSpec.yukawa(-1.0, 1.0, 1.0))
    assert large == pytest.approx(2.0 * small)


def test_negative_part_only_for_attractive():
    assert negative_part_kato_norm(PotentialSpec.yukawa(1.0, 1.0, 1.0)) == 0.0
    attractive = PotentialSpec.yukawa(-1.0, 1.0, 1.0)
    assert negative_part_kato_norm(attractive) == pytest.approx(4.0 * np.pi, rel=1e-6)


def test_radial_derivative_lq_membership():
    spec = PotentialSpec.yukawa(1.0, 0.5, 1.0)
    assert radial_derivative_in_lq(spec, 1.5)
    assert not radial_derivative_in_lq(spec, 2.0)
    assert not radial_derivative_in_lq(spec, np.inf)
    assert not radial_derivative_in_lq(PotentialSpec.yukawa(1.0, 1.0, 1.0), 1.5)


# ── Hypotheses ────────────────────────────────────────────────────────────────

def test_repulsive_yukawa_satisfies_below_threshold():
    report = validate_assumptions(PotentialSpec.yukawa(0.01, 0.5, 1.0), Theorem.BELOW_THRESHOLD)
    assert report.satisfied
    assert report.in_kato_class and report.in_L_3_2 and report.nonnegative
    assert report.radial_derivative_nonpositive


def test_attractive_yukawa_fails_nonnegativity():
    report = validate_assumptions(PotentialSpec.yukawa(-1.0, 0.5, 1.0), Theorem.BELOW_THRESHOLD)
    assert not report.satisfied
    assert not report.nonnegative
    assert any("non-negative" in m for m in report.messages)


def test_defocusing_smallness_condition():
    weak = validate_assumptions(PotentialSpec.yukawa(-0.1, 0.5, 1.0),
                                Theorem.SCATTERING_CRITERION_DEFOCUSING)
    assert weak.smallness_4pi_satisfied
    strong = validate_assumptions(PotentialSpec.yukawa(-5.0, 0.5, 1.0),
                                  Theorem.SCATTERING_CRITERION_DEFOCUSING)
    assert not strong.smallness_4pi_satisfied
    assert not strong.satisfied


def test_inverse_power_theorems():
    report = validate_assumptions(PotentialSpec.inverse_power(1.0, 1.0),
                                  Theorem.INVERSE_POWER_THEOREMS)
    assert report.satisfied
    assert not report.in_kato_class
    with pytest.raises(NLSDomainError):
        PotentialSpec.inverse_power(-1.0, 1.0)


def test_inverse_power_fails_kato_based_theorem():
    report = validate_assumptions(PotentialSpec.inverse_power(1.0, 1.0), Theorem.BELOW_THRESHOLD)
    assert not report.satisfied
    assert report.theorem is Theorem.BELOW_THRESHOLD


def test_zero_potential_report():
    report = validate_assumptions(PotentialSpec.zero(), Theorem.BELOW_THRESHOLD)
    assert report.satisfied
    assert report.kato_norm_of_negative_part == 0.0
    assert PotentialSpec.zero().family is PotentialFamily.ZERO
