"""Sensitivity analysis over the unrecoverable p(U | E, R=1).

The analyst supplies, for each exposure level e, a floor alpha(e) and a
ceiling beta(e) on p(U=u | E=e, R=1) across u. Each contrast bound only
involves two of the four parameters: the lower bound uses (alpha(0), beta(1))
and the upper bound uses (alpha(1), beta(0)).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .bounds import PotentialOutcomeBounds, _bounds_from_missing_term
from .errors import STRUCTURAL_TOL, ZeroConditioningEvent
from .estimands import ContrastKind, _contrast, contrast
from .probcore import CausalModel, Interval, ObservedLaw, _d1_given_eu_r0

__all__ = [
    "SensitivityParams",
    "FeasibleRegion",
    "SensitivityGrid",
    "feasible_region",
    "true_sensitivity_params",
    "analyst_params",
    "sa_po_bounds",
    "sa_contrast_bounds",
    "sensitivity_grid",
    "DEFAULT_RESOLUTION",
]

DEFAULT_RESOLUTION = 101


@dataclass(frozen=True)
class SensitivityParams:
    """alpha(e) <= beta(e), both in [0, 1], for e = 0, 1."""

    alpha: tuple[float, float]
    beta: tuple[float, float]

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        beta = tuple(float(b) for b in self.beta)
        if len(alpha) != 2 or len(beta) != 2:
            raise ValueError("alpha and beta must each hold one value per exposure level")
        for e in (0, 1):
            if not 0.0 <= alpha[e] <= beta[e] <= 1.0:
                raise ValueError(f"need 0 <= alpha({e}) <= beta({e}) <= 1, got {alpha[e]}, {beta[e]}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def two_parameter(cls, alpha: float, beta: float) -> "SensitivityParams":
        """Single floor and ceiling shared by both exposure levels."""
        return cls((alpha, alpha), (beta, beta))

    @classmethod
    def extreme(cls) -> "SensitivityParams":
        """The least informative choice, alpha = 0 and beta = 1."""
        return cls.two_parameter(0.0, 1.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        """(alpha(0), alpha(1), beta(0), beta(1))."""
        return (*self.alpha, *self.beta)

    def to_dict(self) -> dict:
        return {"alpha": list(self.alpha), "beta": list(self.beta)}

    @classmethod
    def from_dict(cls, doc: dict) -> "SensitivityParams":
        return cls(tuple(doc["alpha"]), tuple(doc["beta"]))


@dataclass(frozen=True)
class FeasibleRegion:
    """alpha(e) in [0, alpha_max] and beta(e) in [beta_min, 1].

    When no unit with E=e has U missing the data say nothing about p(U|E=e,R=1);
    the region is then ``unconstrained`` with alpha_max = 1, beta_min = 0.
    """

    e: int
    alpha_max: float
    beta_min: float
    unconstrained: bool = False

    def admits(self, alpha: float, beta: float, slack: float = 0.0) -> bool:
        return alpha <= self.alpha_max + slack and beta >= self.beta_min - slack


def _threshold(law: ObservedLaw, e: int) -> Optional[float]:
    r1 = law.p_de_r1[:, e]
    if r1.sum() <= STRUCTURAL_TOL:
        return None
    stratum_sum = law.d1_given_eu_r0[e].sum()
    return float(min(1.0, (r1[1] / r1.sum()) / stratum_sum))


def feasible_region(law: ObservedLaw, e: int) -> FeasibleRegion:
    c = _threshold(law, e)
    if c is None:
        return FeasibleRegion(e, 1.0, 0.0, unconstrained=True)
    return FeasibleRegion(e, c, c)


def true_sensitivity_params(model: CausalModel) -> SensitivityParams:
    """Minimum and maximum over u of the generating p(U=u | E=e, R=1)."""
    u_e_r1 = model.joint[..., 1].sum(axis=0)  # [e, u]
    mass = u_e_r1.sum(axis=1)
    alpha, beta = [], []
    for e in (0, 1):
        if mass[e] <= STRUCTURAL_TOL:
            raise ZeroConditioningEvent(f"p(E={e}, R=1) = {mass[e]!r}")
        cond = u_e_r1[e] / mass[e]
        alpha.append(cond.min())
        beta.append(cond.max())
    return SensitivityParams(tuple(alpha), tuple(beta))


def analyst_params(true_params: SensitivityParams, f: float) -> SensitivityParams:
    """Shrink the floors by ``f`` and stretch the ceilings by ``f``, capped at 1.

    ``f > 1`` is conservative, ``f < 1`` risky.
    """
    if not f > 0:
        raise ValueError(f"factor must be positive, got {f!r}")
    return SensitivityParams(
        tuple(min(1.0, a / f) for a in true_params.alpha),
        tuple(min(1.0, b * f) for b in true_params.beta),
    )


def _sa_po_bounds(r0, r1, e, alpha_other, beta_other):
    stratum_sum = _d1_given_eu_r0(r0)[..., e, :].sum(axis=-1)
    return _bounds_from_missing_term(r0, r1, e, alpha_other * stratum_sum, beta_other * stratum_sum)


def sa_po_bounds(law: ObservedLaw, e: int, params: SensitivityParams) -> PotentialOutcomeBounds:
    lb, ub = _sa_po_bounds(law.p_deu_r0, law.p_de_r1, e, params.alpha[1 - e], params.beta[1 - e])
    return PotentialOutcomeBounds(e, Interval(float(lb), float(ub)))


def sa_contrast_bounds(law: ObservedLaw, kind: ContrastKind, params: SensitivityParams) -> Interval:
    b1, b0 = sa_po_bounds(law, 1, params), sa_po_bounds(law, 0, params)
    return Interval(contrast(kind, b1.lb, b0.ub), contrast(kind, b1.ub, b0.lb))


@dataclass(frozen=True, eq=False)
class SensitivityGrid:
    """Contrast bounds over a rectangle of two sensitivity parameters.

    ``values[i, j]`` is the bound at ``(alpha_axis[i], beta_axis[j])``.
    """

    bound: str  # "lower" or "upper"
    alpha_axis: np.ndarray
    beta_axis: np.ndarray
    values: np.ndarray
    degenerate: bool = False

    def nearest(self, alpha: float, beta: float) -> float:
        i = int(np.argmin(np.abs(self.alpha_axis - alpha)))
        j = int(np.argmin(np.abs(self.beta_axis - beta)))
        return float(self.values[i, j])

    def to_csv(self, path: Union[str, Path, None] = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["axis1", "axis2", "value"])
        for i, a in enumerate(self.alpha_axis):
            for j, b in enumerate(self.beta_axis):
                writer.writerow([repr(float(a)), repr(float(b)), repr(float(self.values[i, j]))])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


def _axes(law: ObservedLaw, e: int, resolution: int):
    c = _threshold(law, e)
    if c is None:
        # parameters of an exposure level with no missing U carry zero weight
        return np.array([0.0]), np.array([1.0])
    return np.linspace(0.0, c, resolution), np.linspace(c, 1.0, resolution)


def sensitivity_grid(
    law: ObservedLaw, kind: ContrastKind, resolution: int = DEFAULT_RESOLUTION
) -> tuple[SensitivityGrid, SensitivityGrid]:
    """Lower-bound grid over (alpha(0), beta(1)) and upper-bound grid over (alpha(1), beta(0)).

    Axes span exactly the feasible regions, endpoints included.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    r0, r1 = law.p_deu_r0, law.p_de_r1
    alpha0, beta0 = _axes(law, 0, resolution)
    alpha1, beta1 = _axes(law, 1, resolution)

    # lower: LB(1) depends on alpha(0), UB(0) on beta(1)
    lb1, _ = _sa_po_bounds(r0, r1, 1, alpha0, beta0[:1])
    _, ub0 = _sa_po_bounds(r0, r1, 0, alpha1[:1], beta1)
    lower = _contrast(kind, lb1[:, None], ub0[None, :])
    # upper: UB(1) depends on beta(0), LB(0) on alpha(1)
    _, ub1 = _sa_po_bounds(r0, r1, 1, alpha0[:1], beta0)
    lb0, _ = _sa_po_bounds(r0, r1, 0, alpha1, beta1[:1])
    upper = _contrast(kind, ub1[None, :], lb0[:, None])

    return (
        SensitivityGrid("lower", alpha0, beta1, lower, degenerate=lower.size == 1),
        SensitivityGrid("upper", alpha1, beta0, upper, degenerate=upper.size == 1),
    )
