import itertools

import numpy as np
import pytest
from hypothesis import given

from mnar_bounds import (
    CausalModel,
    ContrastKind,
    NotNormalized,
    ObservedLaw,
    UndefinedContrast,
    complete_case,
    contrast,
    fusion_estimate,
    multiple_imputation,
    observed_law,
    true_potential,
)
from mnar_bounds.estimands import imputation_weights

import oracle
from conftest import models

RR, RD, OR, OD = ContrastKind.RISK_RATIO, ContrastKind.RISK_DIFFERENCE, ContrastKind.ODDS_RATIO, ContrastKind.ODDS_DIFFERENCE


def test_true_potential_hand_sum(model):
    # 0.8*0.4 + 0.3*0.5 + 0.2*0.1
    assert true_potential(model, 1) == pytest.approx(0.49, abs=1e-15)
    assert true_potential(model, 0) == pytest.approx(0.56, abs=1e-15)


def test_true_risk_ratio(model):
    assert round(true_potential(model, 1) / true_potential(model, 0), 2) == 0.88


def test_true_potential_constant_strata():
    m = CausalModel([0.2, 0.3, 0.5], [0.4, 0.5, 0.6], [[0.35] * 3, [0.6] * 3], [[0.3, 0.4, 0.5]] * 2)
    assert true_potential(m, 0) == pytest.approx(0.35, abs=1e-15)
    assert true_potential(m, 1) == pytest.approx(0.6, abs=1e-15)


@given(models())
def test_true_potential_matches_enumeration(m):
    t = oracle.joint(m)
    for e in (0, 1):
        assert abs(true_potential(m, e) - oracle.potential(t, e)) < 1e-12


@pytest.mark.parametrize(
    "kind, p1, p0, want",
    [
        (RD, 0.3, 0.3, 0.0),
        (RR, 0.49, 0.56, 0.875),
        (OR, 0.5, 0.5, 1.0),
        (OD, 0.5, 0.5, 0.0),
        (OR, 0.75, 0.5, 3.0),
        (OD, 0.75, 0.5, 2.0),
        (RR, 0.2, 0.0, np.inf),
        (OR, 1.0, 0.5, np.inf),
        (OR, 0.5, 1.0, 0.0),
        (OD, 0.5, 1.0, -np.inf),
        (OR, 0.5, 0.0, np.inf),
    ],
)
def test_contrast_values(kind, p1, p0, want):
    assert contrast(kind, p1, p0) == pytest.approx(want, abs=1e-15)


@pytest.mark.parametrize("kind, p1, p0", [(RR, 0.0, 0.0), (OR, 1.0, 1.0), (OR, 0.0, 0.0), (OD, 1.0, 1.0)])
def test_indeterminate_contrasts_raise(kind, p1, p0):
    with pytest.raises(UndefinedContrast):
        contrast(kind, p1, p0)


def test_contrast_rejects_non_probabilities():
    with pytest.raises(ValueError):
        contrast(RD, 1.2, 0.5)


def test_contrast_parse():
    assert ContrastKind.parse("RR") is RR
    assert ContrastKind.parse("odds-ratio") is OR
    with pytest.raises(ValueError):
        ContrastKind.parse("hazard")


@pytest.mark.parametrize("kind", list(ContrastKind))
def test_contrasts_are_monotone(kind):
    grid = np.linspace(0.01, 0.99, 41)
    for a, b in itertools.combinations(grid, 2):  # a < b
        for other in grid:
            assert contrast(kind, b, other) > contrast(kind, a, other)
            assert contrast(kind, other, b) < contrast(kind, other, a)


def test_complete_case_ratio(law):
    assert round(complete_case(law, 1) / complete_case(law, 0), 2) == 3.94


def test_multiple_imputation_ratio(law):
    assert round(multiple_imputation(law, 1) / multiple_imputation(law, 0), 2) == 2.01


def test_imputation_weight_on_low_income(law):
    assert round(imputation_weights(law)[0], 2) == 0.70


def test_imputation_weights_normalize(law):
    assert imputation_weights(law).sum() == pytest.approx(1.0, abs=1e-12)


def test_complete_case_single_stratum():
    law = ObservedLaw(np.array([[[0.1], [0.2]], [[0.3], [0.15]]]), np.full((2, 2), 0.0625))
    assert complete_case(law, 0) == pytest.approx(0.3 / 0.4, abs=1e-15)
    assert complete_case(law, 1) == pytest.approx(0.15 / 0.35, abs=1e-15)


@given(models())
def test_naive_estimands_match_enumeration(m):
    law, t = observed_law(m), oracle.joint(m)
    for e in (0, 1):
        assert abs(complete_case(law, e) - oracle.complete_case(t, e)) < 1e-12
        assert abs(multiple_imputation(law, e) - oracle.multiple_imputation(t, e)) < 1e-12


@given(models(missingness="mcar"))
def test_mcar_naive_estimands_unbiased(m):
    law = observed_law(m)
    for e in (0, 1):
        assert abs(complete_case(law, e) - true_potential(m, e)) < 1e-10
        assert abs(multiple_imputation(law, e) - true_potential(m, e)) < 1e-10


@given(models(missingness="mar"))
def test_mar_imputation_unbiased(m):
    law = observed_law(m)
    for e in (0, 1):
        assert abs(multiple_imputation(law, e) - true_potential(m, e)) < 1e-10


@given(models(missingness="none"))
def test_imputation_without_missingness_is_adjustment(m):
    law = observed_law(m)
    for e in (0, 1):
        assert abs(multiple_imputation(law, e) - true_potential(m, e)) < 1e-12


def _u_given_e(m):
    j = m.joint.sum(axis=(0, 3))  # [e, u]
    return j / j.sum(axis=1, keepdims=True)


def _u_given_e_r1(m):
    j = m.joint[..., 1].sum(axis=0)
    return j / j.sum(axis=1, keepdims=True)


@given(models(missingness="mar"))
def test_fusion_exact_under_mar(m):
    law = observed_law(m)
    for e in (0, 1):
        assert abs(fusion_estimate(law, _u_given_e(m), e) - true_potential(m, e)) < 1e-10


@given(models())
def test_fusion_with_true_missing_stratum_distribution(m):
    law = observed_law(m)
    for e in (0, 1):
        assert abs(fusion_estimate(law, _u_given_e_r1(m), e) - true_potential(m, e)) < 1e-10


def test_fusion_ignores_auxiliary_without_missingness():
    m = CausalModel([0.3, 0.7], [0.4, 0.6], [[0.2, 0.7], [0.5, 0.1]], [[0.0, 0.0], [0.0, 0.0]])
    law = observed_law(m)
    a = fusion_estimate(law, [[0.5, 0.5], [0.5, 0.5]], 1)
    b = fusion_estimate(law, [[0.9, 0.1], [0.05, 0.95]], 1)
    assert a == b == pytest.approx(true_potential(m, 1), abs=1e-12)


def test_fusion_rejects_bad_table(law):
    with pytest.raises(NotNormalized):
        fusion_estimate(law, [[0.5, 0.4, 0.2], [0.3, 0.3, 0.4]], 1)
    with pytest.raises(ValueError):
        fusion_estimate(law, [[0.5, 0.5], [0.5, 0.5]], 1)
