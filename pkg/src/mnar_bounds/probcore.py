"""Generative model, observed law and probability-table accessors.

Array conventions used throughout the package (trailing axes, any number of
leading batch axes is allowed in the private ``_``-prefixed kernels):

* full joint ``p(D=d, E=e, U=u, R=r)``: ``(..., 2, 2, K, 2)`` indexed ``[d, e, u, r]``
* ``p(D=d, E=e, U=u, R=0)``: ``(..., 2, 2, K)`` indexed ``[d, e, u]``
* ``p(D=d, E=e, R=1)``: ``(..., 2, 2)`` indexed ``[d, e]``
* conditionals given ``(E, U)``: ``(..., 2, K)`` indexed ``[e, u]``
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Union

import numpy as np

from .errors import (
    STRUCTURAL_TOL,
    InvalidProbability,
    NotNormalized,
    ParseError,
    PositivityViolation,
    ZeroConditioningEvent,
)

__all__ = [
    "CausalModel",
    "ObservedLaw",
    "Interval",
    "QueryKind",
    "validate_model",
    "validate_law",
    "full_joint",
    "observed_law",
    "query",
    "load_json",
    "dump_json",
]


def _frozen(values: Any, shape: tuple[int, ...], name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{name}: expected shape {shape}, got {arr.shape}")
    arr.flags.writeable = False
    return arr


def _check_unit_interval(arr: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise InvalidProbability(f"{name} has entries outside [0, 1]: {arr.tolist()}")


# ---------------------------------------------------------------------------
# array kernels
# ---------------------------------------------------------------------------


def _full_joint(p_u, p_e1, p_d1, p_r1):
    p_e = np.stack([1.0 - p_e1, p_e1], axis=-2)  # [e, u]
    p_d = np.stack([1.0 - p_d1, p_d1], axis=-3)  # [d, e, u]
    p_r = np.stack([1.0 - p_r1, p_r1], axis=-1)  # [e, u, r]
    return (
        p_u[..., None, None, :, None]
        * p_e[..., None, :, :, None]
        * p_d[..., :, :, :, None]
        * p_r[..., None, :, :, :]
    )


def _d1_given_eu_r0(r0):
    return r0[..., 1, :, :] / r0.sum(axis=-3)


def _u_given_e_r0(r0):
    m = r0.sum(axis=-3)
    return m / m.sum(axis=-1, keepdims=True)


def _u_given_r0(r0):
    m = r0.sum(axis=(-3, -2))
    return m / m.sum(axis=-1, keepdims=True)


def _de_joint(r0, r1):
    """p(D=d, E=e) with both missingness strata added back."""
    return r0.sum(axis=-1) + r1


def _re_joint(r0, r1):
    """p(R=r, E=e) indexed ``[r, e]``."""
    return np.stack([r0.sum(axis=(-3, -1)), r1.sum(axis=-2)], axis=-2)


def _cf_given_other_r0(r0, e):
    """p(D_e=1 | E=1-e, R=0) by adjusting over U within the observed stratum."""
    return (_d1_given_eu_r0(r0)[..., e, :] * _u_given_e_r0(r0)[..., 1 - e, :]).sum(axis=-1)


def _decompose(r0, r1, e):
    """Split p(D_e=1) into ``known + weight * p(D_e=1 | E=1-e, R=1)``.

    Everything except the last conditional is recoverable from the observed law.
    """
    de = _de_joint(r0, r1)
    re = _re_joint(r0, r1)
    known = de[..., 1, e] + _cf_given_other_r0(r0, e) * re[..., 0, 1 - e]
    return known, re[..., 1, 1 - e]


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CausalModel:
    """Full generative law over (U, E, D, R) for a categorical confounder.

    Missingness may depend on exposure and confounder only, so outcome
    independence of ``R`` holds by construction. Instances are validated on
    construction and are read-only afterwards.
    """

    p_u: np.ndarray
    p_e1_given_u: np.ndarray
    p_d1_given_eu: np.ndarray
    p_r1_given_eu: np.ndarray

    def __post_init__(self):
        k = len(np.atleast_1d(self.p_u))
        object.__setattr__(self, "p_u", _frozen(self.p_u, (k,), "p_u"))
        object.__setattr__(self, "p_e1_given_u", _frozen(self.p_e1_given_u, (k,), "p_e1_given_u"))
        object.__setattr__(self, "p_d1_given_eu", _frozen(self.p_d1_given_eu, (2, k), "p_d1_given_eu"))
        object.__setattr__(self, "p_r1_given_eu", _frozen(self.p_r1_given_eu, (2, k), "p_r1_given_eu"))
        validate_model(self)

    @property
    def u_card(self) -> int:
        return self.p_u.shape[0]

    @cached_property
    def joint(self) -> np.ndarray:
        out = _full_joint(self.p_u, self.p_e1_given_u, self.p_d1_given_eu, self.p_r1_given_eu)
        out.flags.writeable = False
        return out

    def to_dict(self) -> dict:
        return {
            "u_card": self.u_card,
            "p_u": self.p_u.tolist(),
            "p_e1_given_u": self.p_e1_given_u.tolist(),
            "p_d1_given_eu": self.p_d1_given_eu.tolist(),
            "p_r1_given_eu": self.p_r1_given_eu.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CausalModel":
        return _from_dict(cls, doc, ("p_u", "p_e1_given_u", "p_d1_given_eu", "p_r1_given_eu"))


@dataclass(frozen=True, eq=False)
class ObservedLaw:
    """The identifiable pair {p(D,E,U,R=0), p(D,E,R=1)} stored as joints."""

    p_deu_r0: np.ndarray
    p_de_r1: np.ndarray

    def __post_init__(self):
        r0 = np.array(self.p_deu_r0, dtype=float)
        if r0.ndim != 3 or r0.shape[:2] != (2, 2):
            raise ValueError(f"p_deu_r0: expected shape (2, 2, K), got {r0.shape}")
        object.__setattr__(self, "p_deu_r0", _frozen(r0, r0.shape, "p_deu_r0"))
        object.__setattr__(self, "p_de_r1", _frozen(self.p_de_r1, (2, 2), "p_de_r1"))
        validate_law(self)

    @property
    def u_card(self) -> int:
        return self.p_deu_r0.shape[2]

    # Conditionals over the observed stratum are always well defined under positivity.

    @cached_property
    def d1_given_eu_r0(self) -> np.ndarray:
        """p(D=1 | E=e, U=u, R=0) as a ``[e, u]`` array."""
        return _d1_given_eu_r0(self.p_deu_r0)

    @cached_property
    def u_given_e_r0(self) -> np.ndarray:
        return _u_given_e_r0(self.p_deu_r0)

    @cached_property
    def u_given_r0(self) -> np.ndarray:
        return _u_given_r0(self.p_deu_r0)

    @cached_property
    def de_joint(self) -> np.ndarray:
        """p(D=d, E=e), reconstructed from both tables."""
        return _de_joint(self.p_deu_r0, self.p_de_r1)

    @cached_property
    def re_joint(self) -> np.ndarray:
        """p(R=r, E=e) indexed ``[r, e]``."""
        return _re_joint(self.p_deu_r0, self.p_de_r1)

    @property
    def p_r1(self) -> float:
        return float(self.p_de_r1.sum())

    def has_missing(self, e: int) -> bool:
        return bool(self.re_joint[1, e] > STRUCTURAL_TOL)

    def decompose(self, e: int) -> tuple[float, float]:
        """Return ``(known, weight)`` with p(D_e=1) = known + weight * p(D_e=1|E=1-e,R=1)."""
        known, weight = _decompose(self.p_deu_r0, self.p_de_r1, e)
        return float(known), float(weight)

    def to_dict(self) -> dict:
        return {
            "u_card": self.u_card,
            "p_deu_r0": self.p_deu_r0.tolist(),
            "p_de_r1": self.p_de_r1.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ObservedLaw":
        return _from_dict(cls, doc, ("p_deu_r0", "p_de_r1"))


@dataclass(frozen=True)
class Interval:
    """Closed interval on the extended reals."""

    lb: float
    ub: float

    def __post_init__(self):
        lb, ub = float(self.lb), float(self.ub)
        if math.isnan(lb) or math.isnan(ub) or lb > ub:
            raise ValueError(f"not an interval: [{lb}, {ub}]")
        object.__setattr__(self, "lb", lb)
        object.__setattr__(self, "ub", ub)

    def __iter__(self):
        yield self.lb
        yield self.ub

    @property
    def width(self) -> float:
        return self.ub - self.lb

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lb - slack <= value <= self.ub + slack

    def contains_interval(self, other: "Interval", slack: float = 0.0) -> bool:
        return self.lb - slack <= other.lb and other.ub <= self.ub + slack

    def rounded(self, digits: int = 2) -> tuple[float, float]:
        return round(self.lb, digits), round(self.ub, digits)

    def __str__(self) -> str:
        return f"[{self.lb:.2f}, {self.ub:.2f}]"


def _from_dict(cls, doc, keys):
    if not isinstance(doc, dict):
        raise ParseError(f"expected a JSON object, got {type(doc).__name__}")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise ParseError(f"missing keys for {cls.__name__}: {missing}")
    try:
        obj = cls(**{k: doc[k] for k in keys})
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (InvalidProbability, NotNormalized, PositivityViolation)):
            raise
        raise ParseError(f"malformed {cls.__name__}: {exc}") from exc
    if "u_card" in doc and doc["u_card"] != obj.u_card:
        raise ParseError(f"u_card={doc['u_card']} does not match table size {obj.u_card}")
    return obj


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def validate_model(model: CausalModel) -> None:
    """Raise if ``model`` is not a valid generative law; return ``None`` otherwise."""
    for name in ("p_u", "p_e1_given_u", "p_d1_given_eu", "p_r1_given_eu"):
        _check_unit_interval(getattr(model, name), name)
    total = float(model.p_u.sum())
    if abs(total - 1.0) > STRUCTURAL_TOL:
        raise NotNormalized(f"p_u sums to {total!r}")
    r0 = _full_joint(model.p_u, model.p_e1_given_u, model.p_d1_given_eu, model.p_r1_given_eu)[..., 0]
    if r0.min() <= STRUCTURAL_TOL:
        d, e, u = np.unravel_index(np.argmin(r0), r0.shape)
        raise PositivityViolation(f"p(D={d}, E={e}, U={u}, R=0) = {r0[d, e, u]!r}")


def validate_law(law: ObservedLaw) -> None:
    _check_unit_interval(law.p_deu_r0, "p_deu_r0")
    _check_unit_interval(law.p_de_r1, "p_de_r1")
    total = float(law.p_deu_r0.sum() + law.p_de_r1.sum())
    if abs(total - 1.0) > STRUCTURAL_TOL:
        raise NotNormalized(f"observed tables sum to {total!r}")
    if law.p_deu_r0.min() <= STRUCTURAL_TOL:
        raise PositivityViolation("p(D,E,U,R=0) has a cell at or below the positivity floor")


def full_joint(model: CausalModel) -> np.ndarray:
    """Joint p(D=d, E=e, U=u, R=r) as a read-only ``(2, 2, K, 2)`` array."""
    return model.joint


def observed_law(model: CausalModel) -> ObservedLaw:
    joint = model.joint
    return ObservedLaw(p_deu_r0=joint[..., 0], p_de_r1=joint[..., 1].sum(axis=2))


class QueryKind(enum.Enum):
    """Conditionals and marginals available from an observed law.

    ``indices`` lists the keyword arguments ``query`` expects.
    """

    D1_GIVEN_EU_R0 = ("p(D=1|E=e,U=u,R=0)", ("e", "u"))
    U_GIVEN_E_R0 = ("p(U=u|E=e,R=0)", ("u", "e"))
    U_GIVEN_R0 = ("p(U=u|R=0)", ("u",))
    D1_E = ("p(D=1,E=e)", ("e",))
    R_E = ("p(R=r,E=e)", ("r", "e"))
    D1_GIVEN_E_R1 = ("p(D=1|E=e,R=1)", ("e",))
    DE_GIVEN_R1 = ("p(D=d,E=e|R=1)", ("d", "e"))
    U_GIVEN_DE_R0 = ("p(U=u|D=d,E=e,R=0)", ("u", "d", "e"))
    CF_GIVEN_OTHER_R0 = ("p(D_e=1|E=1-e,R=0)", ("e",))

    def __init__(self, label, indices):
        self.label = label
        self.indices = indices


def _ratio(num: float, den: float, what: str) -> float:
    if den <= STRUCTURAL_TOL:
        raise ZeroConditioningEvent(f"{what}: conditioning event has probability {den!r}")
    return float(num / den)


def query(law: ObservedLaw, which: QueryKind, **idx: int) -> float:
    """Evaluate one conditional or marginal probability of ``law``.

    >>> query(law, QueryKind.D1_GIVEN_EU_R0, e=1, u=0)  # doctest: +SKIP
    """
    if set(idx) != set(which.indices):
        raise TypeError(f"{which.name} takes indices {which.indices}, got {tuple(idx)}")
    r0, r1 = law.p_deu_r0, law.p_de_r1
    if which is QueryKind.D1_GIVEN_EU_R0:
        return float(law.d1_given_eu_r0[idx["e"], idx["u"]])
    if which is QueryKind.U_GIVEN_E_R0:
        return float(law.u_given_e_r0[idx["e"], idx["u"]])
    if which is QueryKind.U_GIVEN_R0:
        return float(law.u_given_r0[idx["u"]])
    if which is QueryKind.D1_E:
        return float(law.de_joint[1, idx["e"]])
    if which is QueryKind.R_E:
        return float(law.re_joint[idx["r"], idx["e"]])
    if which is QueryKind.D1_GIVEN_E_R1:
        e = idx["e"]
        return _ratio(r1[1, e], r1[:, e].sum(), "p(D=1|E,R=1)")
    if which is QueryKind.DE_GIVEN_R1:
        return _ratio(r1[idx["d"], idx["e"]], r1.sum(), "p(D,E|R=1)")
    if which is QueryKind.U_GIVEN_DE_R0:
        d, e = idx["d"], idx["e"]
        return _ratio(r0[d, e, idx["u"]], r0[d, e].sum(), "p(U|D,E,R=0)")
    if which is QueryKind.CF_GIVEN_OTHER_R0:
        return float(_cf_given_other_r0(r0, idx["e"]))
    raise ValueError(f"unknown query {which!r}")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

_MODEL_KEYS = {"p_u", "p_e1_given_u", "p_d1_given_eu", "p_r1_given_eu"}
_LAW_KEYS = {"p_deu_r0", "p_de_r1"}


def from_document(doc: Any) -> Union[CausalModel, ObservedLaw]:
    """Build a model or a law from a parsed JSON document, dispatching on its keys."""
    if isinstance(doc, dict) and _MODEL_KEYS <= doc.keys():
        return CausalModel.from_dict(doc)
    if isinstance(doc, dict) and _LAW_KEYS <= doc.keys():
        return ObservedLaw.from_dict(doc)
    raise ParseError("document is neither a causal model nor an observed law")


def load_json(path: Union[str, Path]) -> Union[CausalModel, ObservedLaw]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return from_document(doc)


def dump_json(obj: Union[CausalModel, ObservedLaw], path: Union[str, Path, None] = None) -> str:
    text = json.dumps(obj.to_dict(), indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
