"""Assumption-free bounds on p(D_e=1) and on contrasts between exposure levels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation
from .estimands import ContrastKind, _contrast, contrast
from .probcore import Interval, ObservedLaw, _decompose, _d1_given_eu_r0

__all__ = [
    "PotentialOutcomeBounds",
    "stratum_extremes",
    "po_bounds",
    "contrast_bounds",
    "compose_contrast",
]


@dataclass(frozen=True)
class PotentialOutcomeBounds:
    e: int
    interval: Interval

    def __post_init__(self):
        lb, ub = self.interval
        if lb < 0.0 or ub > 1.0:
            raise InvariantViolation(f"potential-outcome bounds left [0, 1]: {self.interval}")

    @property
    def lb(self) -> float:
        return self.interval.lb

    @property
    def ub(self) -> float:
        return self.interval.ub


def stratum_extremes(law: ObservedLaw, e: int) -> tuple[float, float]:
    """(min_u, max_u) of p(D=1 | E=e, U=u, R=0)."""
    row = law.d1_given_eu_r0[e]
    return float(row.min()), float(row.max())


def _bounds_from_missing_term(r0, r1, e, low, high):
    """Plug bounds on p(D_e=1|E=1-e,R=1) into the observed decomposition."""
    known, weight = _decompose(r0, r1, e)
    return known + weight * low, np.minimum(1.0, known + weight * high)


def _po_bounds(r0, r1, e):
    row = _d1_given_eu_r0(r0)[..., e, :]
    return _bounds_from_missing_term(r0, r1, e, row.min(axis=-1), row.max(axis=-1))


def po_bounds(law: ObservedLaw, e: int) -> PotentialOutcomeBounds:
    lb, ub = _po_bounds(law.p_deu_r0, law.p_de_r1, e)
    return PotentialOutcomeBounds(e, Interval(float(lb), float(ub)))


def compose_contrast(kind: ContrastKind, lb1, ub1, lb0, ub0):
    """Cross-compose potential-outcome bounds into contrast bounds.

    Valid because every contrast is increasing in p1 and decreasing in p0:
    the lower bound pairs LB(1) with UB(0), the upper bound UB(1) with LB(0).
    Works on scalars and arrays; indeterminate forms are NaN.
    """
    return _contrast(kind, lb1, ub0), _contrast(kind, ub1, lb0)


def contrast_bounds(law: ObservedLaw, kind: ContrastKind) -> Interval:
    b1, b0 = po_bounds(law, 1), po_bounds(law, 0)
    return Interval(contrast(kind, b1.lb, b0.ub), contrast(kind, b1.ub, b0.lb))
