"""Causal estimand by adjustment, contrasts, and naive pseudo-estimands."""

from __future__ import annotations

import enum

import numpy as np

from .errors import STRUCTURAL_TOL, NotNormalized, UndefinedContrast, ZeroConditioningEvent
from .probcore import CausalModel, ObservedLaw, _decompose, _d1_given_eu_r0

__all__ = [
    "ContrastKind",
    "true_potential",
    "contrast",
    "complete_case",
    "multiple_imputation",
    "imputation_weights",
    "fusion_estimate",
]


class ContrastKind(enum.Enum):
    """Contrasts g(p1, p0), each increasing in p1 and decreasing in p0.

    The value is ``(short name, null value)``; the null is the contrast of
    two equal probabilities and sets the reference for the log-sign.
    """

    RISK_RATIO = ("rr", 1.0)
    RISK_DIFFERENCE = ("rd", 0.0)
    ODDS_RATIO = ("or", 1.0)
    ODDS_DIFFERENCE = ("od", 0.0)

    def __init__(self, short, null):
        self.short = short
        self.null = null

    @classmethod
    def parse(cls, name: str) -> "ContrastKind":
        key = name.strip().lower().replace("-", "_")
        for kind in cls:
            if key in (kind.short, kind.name.lower()):
                return kind
        raise ValueError(f"unknown contrast {name!r}; expected one of rr, rd, or, od")


def _odds(p):
    with np.errstate(divide="ignore"):
        return np.where(p >= 1.0, np.inf, p / np.maximum(1.0 - p, 0.0))


def _contrast(kind: ContrastKind, p1, p0):
    """Vectorized contrast; indeterminate forms come back as NaN."""
    p1 = np.asarray(p1, dtype=float)
    p0 = np.asarray(p0, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind is ContrastKind.RISK_RATIO:
            return p1 / p0
        if kind is ContrastKind.RISK_DIFFERENCE:
            return p1 - p0
        if kind is ContrastKind.ODDS_RATIO:
            return _odds(p1) / _odds(p0)
        if kind is ContrastKind.ODDS_DIFFERENCE:
            return _odds(p1) - _odds(p0)
    raise ValueError(f"unsupported contrast {kind!r}")


def contrast(kind: ContrastKind, p1: float, p0: float) -> float:
    """Evaluate ``kind`` on the extended reals.

    One-sided limits map to +/-inf (e.g. an odds ratio with ``p1 = 1``);
    0/0 and inf/inf forms raise :class:`UndefinedContrast`.
    """
    for p in (p1, p0):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability out of range: {p!r}")
    value = float(_contrast(kind, p1, p0))
    if np.isnan(value):
        raise UndefinedContrast(f"{kind.short}({p1!r}, {p0!r}) is indeterminate")
    return value


def true_potential(model: CausalModel, e: int) -> float:
    """p(D_e=1) = sum_u p(D=1|E=e,U=u) p(U=u)."""
    return float(model.p_d1_given_eu[e] @ model.p_u)


def complete_case(law: ObservedLaw, e: int) -> float:
    """Adjustment over the complete cases: p(U) replaced by p(U|R=0)."""
    return float(law.d1_given_eu_r0[e] @ law.u_given_r0)


def _imputation_weights(r0, r1):
    """Mixture weight on U produced by distribution-level multiple imputation.

    p(U|R=0)p(R=0) + p(R=1) sum_{d,e} p(U|d,e,R=0) p(d,e|R=1), written with
    joints so that p(R=1)=0 needs no special case.
    """
    cell = r0.sum(axis=-1)  # p(D=d, E=e, R=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        imputed = (r0 / cell[..., None]) * r1[..., None]
    imputed = np.where(r1[..., None] > 0.0, imputed, 0.0)
    return r0.sum(axis=(-3, -2)) + imputed.sum(axis=(-3, -2))


def imputation_weights(law: ObservedLaw) -> np.ndarray:
    cell = law.p_deu_r0.sum(axis=-1)
    starved = (cell <= STRUCTURAL_TOL) & (law.p_de_r1 > STRUCTURAL_TOL)
    if starved.any():
        d, e = np.argwhere(starved)[0]
        raise ZeroConditioningEvent(f"no complete cases with D={d}, E={e} to impute from")
    return _imputation_weights(law.p_deu_r0, law.p_de_r1)


def multiple_imputation(law: ObservedLaw, e: int) -> float:
    return float(law.d1_given_eu_r0[e] @ imputation_weights(law))


def fusion_estimate(law: ObservedLaw, p_u_given_e, e: int) -> float:
    """p(D_e=1) with an auxiliary p(U|E) standing in for the missing p(U|E,R=1).

    ``p_u_given_e`` is a ``[e, u]`` table, typically estimated from a second
    dataset in which U is missing at random.
    """
    aux = np.asarray(p_u_given_e, dtype=float)
    if aux.shape != (2, law.u_card):
        raise ValueError(f"auxiliary table must have shape (2, {law.u_card}), got {aux.shape}")
    if np.any(aux < 0.0) or np.any(np.abs(aux.sum(axis=1) - 1.0) > STRUCTURAL_TOL):
        raise NotNormalized(f"auxiliary p(U|E) rows must be distributions, got {aux.tolist()}")
    known, weight = _decompose(law.p_deu_r0, law.p_de_r1, e)
    missing = _d1_given_eu_r0(law.p_deu_r0)[e] @ aux[1 - e]
    return float(known + weight * missing)
