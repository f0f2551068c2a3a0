"""Monte Carlo study of naive estimators and of the bounds on random models.

Every draw gets its own RNG stream derived from ``(master_seed, stream, index)``
so results never depend on chunking or on the number of worker processes;
per-chunk results are integer counters that are summed.
"""

from __future__ import annotations

import csv
import enum
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .bounds import _po_bounds, contrast_bounds
from .errors import STRUCTURAL_TOL, InvariantViolation
from .estimands import (
    ContrastKind,
    _contrast,
    _imputation_weights,
    complete_case,
    contrast,
    multiple_imputation,
    true_potential,
)
from .example import P_R1_GIVEN_EU
from .probcore import CausalModel, _d1_given_eu_r0, _full_joint, _u_given_r0, observed_law
from .sensitivity import _sa_po_bounds

log = logging.getLogger(__name__)

__all__ = [
    "Mechanism",
    "SimConfig",
    "ClassificationFlags",
    "FlagCounts",
    "NarrowingCounts",
    "Table1",
    "Table2",
    "draw_seed",
    "sample_model",
    "classify",
    "run_table1",
    "run_table2",
    "PAPER_FACTORS",
]

PAPER_FACTORS = (0.9, 1.0, 1.1, 1.2)
CHUNK_SIZE = 2048
# slack on "outside the bounds" / "narrower than" comparisons
BOUND_SLACK = 1e-12
# slack on guaranteed containment; only absorbs rounding
COVERAGE_SLACK = 1e-10


class Mechanism(enum.Enum):
    MCAR = "MCAR"  # R independent of everything
    MAR = "MAR"  # R depends on E only
    MNAR = "MNAR"  # R depends on E and U
    MNARex = "MNARex"  # p(R|E,U) fixed to the worked example's table

    @classmethod
    def parse(cls, name: str) -> "Mechanism":
        for m in cls:
            if m.value.lower() == name.strip().lower():
                return m
        raise ValueError(f"unknown mechanism {name!r}")


METHODS = ("CC", "MI")


@dataclass(frozen=True)
class SimConfig:
    n_draws: int = 100_000
    u_card: int = 3
    mechanism: Mechanism = Mechanism.MNAR
    master_seed: int = 0
    contrast: ContrastKind = ContrastKind.RISK_RATIO
    bias_tol: float = 1e-9

    def __post_init__(self):
        if self.n_draws < 1:
            raise ValueError("n_draws must be positive")
        if self.u_card < 2:
            raise ValueError("u_card must be at least 2")
        if self.mechanism is Mechanism.MNARex and self.u_card != 3:
            raise ValueError("MNARex uses a ternary confounder")


@dataclass(frozen=True)
class ClassificationFlags:
    biased: bool
    wrong_log_sign: bool
    out_of_bounds: bool

    @property
    def both(self) -> bool:
        return self.wrong_log_sign and self.out_of_bounds


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def draw_seed(master_seed: int, index: int, stream: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence(master_seed, spawn_key=(stream, index))


def _sample_params(rng: np.random.Generator, u_card: int, mechanism: Mechanism):
    while True:
        p_u = rng.random(u_card)
        p_u = p_u / p_u.sum()
        p_e1 = rng.random(u_card)
        p_d1 = rng.random((2, u_card))
        if mechanism is Mechanism.MNAR:
            p_r1 = rng.random((2, u_card))
        elif mechanism is Mechanism.MAR:
            p_r1 = np.repeat(rng.random((2, 1)), u_card, axis=1)
        elif mechanism is Mechanism.MCAR:
            p_r1 = np.full((2, u_card), rng.random())
        else:
            p_r1 = np.array(P_R1_GIVEN_EU)
        # positivity fails with probability zero; resample from the same stream
        if _full_joint(p_u, p_e1, p_d1, p_r1)[..., 0].min() > STRUCTURAL_TOL:
            return p_u, p_e1, p_d1, p_r1


def sample_model(
    seed: Union[int, np.random.SeedSequence],
    u_card: int = 3,
    mechanism: Mechanism = Mechanism.MNAR,
) -> CausalModel:
    """Random model with every free parameter drawn from Uniform[0, 1].

    p(U) is K independent uniforms divided by their sum.
    """
    if u_card < 2:
        raise ValueError("u_card must be at least 2")
    if mechanism is Mechanism.MNARex and u_card != 3:
        raise ValueError("MNARex uses a ternary confounder")
    return CausalModel(*_sample_params(np.random.default_rng(seed), u_card, mechanism))


def _stream(mechanism: Mechanism) -> int:
    return list(Mechanism).index(mechanism)


def _sample_batch(config: SimConfig, mechanism: Mechanism, indices: Iterable[int]):
    stream = _stream(mechanism)
    cols = [
        _sample_params(np.random.default_rng(draw_seed(config.master_seed, i, stream)), config.u_card, mechanism)
        for i in indices
    ]
    return [np.stack(c) for c in zip(*cols)]


# ---------------------------------------------------------------------------
# single-model classification
# ---------------------------------------------------------------------------


def _flags(kind, estimate, truth, lb, ub, bias_tol):
    null = kind.null
    biased = np.abs(estimate - truth) > bias_tol * np.maximum(1.0, np.abs(truth))
    wrong_sign = (estimate - null) * (truth - null) < 0.0
    outside = (estimate < lb - BOUND_SLACK) | (estimate > ub + BOUND_SLACK)
    return biased, wrong_sign, outside


def classify(model: CausalModel, config: SimConfig) -> dict[str, ClassificationFlags]:
    """Flags for the complete-case and multiple-imputation contrasts of ``model``."""
    kind = config.contrast
    law = observed_law(model)
    truth = contrast(kind, true_potential(model, 1), true_potential(model, 0))
    interval = contrast_bounds(law, kind)
    estimates = {
        "CC": contrast(kind, complete_case(law, 1), complete_case(law, 0)),
        "MI": contrast(kind, multiple_imputation(law, 1), multiple_imputation(law, 0)),
    }
    out = {}
    for method, est in estimates.items():
        b, w, o = _flags(kind, est, truth, interval.lb, interval.ub, config.bias_tol)
        out[method] = ClassificationFlags(bool(b), bool(w), bool(o))
    return out


# ---------------------------------------------------------------------------
# Table 1
# ---------------------------------------------------------------------------


@dataclass
class FlagCounts:
    biased: int = 0
    wrong_log_sign: int = 0
    out_bounds: int = 0
    both: int = 0

    def __iadd__(self, other: "FlagCounts"):
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def percentages(self, n: int) -> tuple[float, float, float, float]:
        return tuple(100.0 * getattr(self, f.name) / n for f in fields(self))


def _table1_chunk(args) -> dict[str, FlagCounts]:
    config, mechanism, start, stop = args
    kind = config.contrast
    p_u, p_e1, p_d1, p_r1 = _sample_batch(config, mechanism, range(start, stop))
    joint = _full_joint(p_u, p_e1, p_d1, p_r1)
    r0, r1 = joint[..., 0], joint[..., 1].sum(axis=-1)

    po_true = (p_d1 * p_u[:, None, :]).sum(axis=-1)
    truth = _contrast(kind, po_true[:, 1], po_true[:, 0])
    d1 = _d1_given_eu_r0(r0)
    po_cc = (d1 * _u_given_r0(r0)[:, None, :]).sum(axis=-1)
    po_mi = (d1 * _imputation_weights(r0, r1)[:, None, :]).sum(axis=-1)
    lb1, ub1 = _po_bounds(r0, r1, 1)
    lb0, ub0 = _po_bounds(r0, r1, 0)
    lb, ub = _contrast(kind, lb1, ub0), _contrast(kind, ub1, lb0)

    slack = COVERAGE_SLACK * np.maximum(1.0, np.abs(truth))
    bad = ~((lb - slack <= truth) & (truth <= ub + slack))
    if bad.any():
        i = start + int(np.argmax(bad))
        raise InvariantViolation(f"{mechanism.value} draw {i}: assumption-free bounds miss the truth")

    out = {}
    for method, po in (("CC", po_cc), ("MI", po_mi)):
        est = _contrast(kind, po[:, 1], po[:, 0])
        b, w, o = _flags(kind, est, truth, lb, ub, config.bias_tol)
        out[method] = FlagCounts(int(b.sum()), int(w.sum()), int(o.sum()), int((w & o).sum()))
    return out


@dataclass
class Table1:
    n_draws: int
    counts: dict[tuple[Mechanism, str], FlagCounts] = field(default_factory=dict)

    HEADER = ("mechanism", "method", "biased", "wrong_log_sign", "out_bounds", "both")

    def row(self, mechanism: Mechanism, method: str) -> tuple[float, float, float, float]:
        return self.counts[mechanism, method].percentages(self.n_draws)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.HEADER)
        for (mech, method), c in self.counts.items():
            writer.writerow([mech.value, method, *(repr(p) for p in c.percentages(self.n_draws))])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [
            f"{'Missingness':<12}{'Method':<8}{'Biased':>8}{'Wrong log-sign':>16}{'Out bounds':>12}{'Both':>8}",
            "-" * 64,
        ]
        last = None
        for (mech, method), c in self.counts.items():
            b, w, o, both = c.percentages(self.n_draws)
            label = mech.value if mech is not last else ""
            last = mech
            lines.append(f"{label:<12}{method:<8}{b:>8.1f}{w:>16.1f}{o:>12.1f}{both:>8.1f}")
        lines.append(f"({self.n_draws} draws per mechanism)")
        return "\n".join(lines)


def _chunks(n: int, size: int = CHUNK_SIZE):
    return [(s, min(n, s + size)) for s in range(0, n, size)]


def _map(fn, jobs, threads: int):
    if threads <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


def run_table1(
    config: SimConfig,
    mechanisms: Optional[Sequence[Mechanism]] = None,
    threads: int = 1,
) -> Table1:
    """Percentages of draws where CC / MI are biased, have the wrong log-sign,
    fall outside the assumption-free bounds, or both of the latter two.

    ``mechanisms`` defaults to all four; ``config.mechanism`` is ignored here.
    """
    mechanisms = list(mechanisms) if mechanisms is not None else list(Mechanism)
    table = Table1(config.n_draws)
    for mech in mechanisms:
        replace(config, mechanism=mech)  # validates u_card for MNARex
        jobs = [(config, mech, s, e) for s, e in _chunks(config.n_draws)]
        totals = {m: FlagCounts() for m in METHODS}
        for part in _map(_table1_chunk, jobs, threads):
            for m in METHODS:
                totals[m] += part[m]
        for m in METHODS:
            table.counts[mech, m] = totals[m]
        log.info("table1 %s done (%d draws)", mech.value, config.n_draws)
    return table


# ---------------------------------------------------------------------------
# Table 2
# ---------------------------------------------------------------------------


@dataclass
class NarrowingCounts:
    included: int = 0
    lb_narrower: int = 0
    ub_narrower: int = 0
    both_narrower: int = 0

    def __iadd__(self, other: "NarrowingCounts"):
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def percentages(self, n: int) -> tuple[float, float, float, float]:
        return tuple(100.0 * getattr(self, f.name) / n for f in fields(self))


def _table2_chunk(args):
    config, factors, start, stop = args
    kind = config.contrast
    p_u, p_e1, p_d1, p_r1 = _sample_batch(config, config.mechanism, range(start, stop))
    joint = _full_joint(p_u, p_e1, p_d1, p_r1)
    r0, r1 = joint[..., 0], joint[..., 1].sum(axis=-1)

    u_e_r1 = joint[..., 1].sum(axis=1)  # [n, e, u]
    mass = u_e_r1.sum(axis=-1)
    ok = (mass > STRUCTURAL_TOL).all(axis=-1)
    r0, r1, u_e_r1, mass = r0[ok], r1[ok], u_e_r1[ok], mass[ok]
    p_u, p_d1 = p_u[ok], p_d1[ok]
    cond = u_e_r1 / mass[..., None]
    alpha_star, beta_star = cond.min(axis=-1), cond.max(axis=-1)  # [n, e]

    po_true = (p_d1 * p_u[:, None, :]).sum(axis=-1)
    truth = _contrast(kind, po_true[:, 1], po_true[:, 0])
    lb1, ub1 = _po_bounds(r0, r1, 1)
    lb0, ub0 = _po_bounds(r0, r1, 0)
    af_lb, af_ub = _contrast(kind, lb1, ub0), _contrast(kind, ub1, lb0)

    out = {}
    for f in factors:
        alpha = np.minimum(1.0, alpha_star / f)
        beta = np.minimum(1.0, beta_star * f)
        s_lb1, s_ub1 = _sa_po_bounds(r0, r1, 1, alpha[:, 0], beta[:, 0])
        s_lb0, s_ub0 = _sa_po_bounds(r0, r1, 0, alpha[:, 1], beta[:, 1])
        sa_lb, sa_ub = _contrast(kind, s_lb1, s_ub0), _contrast(kind, s_ub1, s_lb0)
        slack = COVERAGE_SLACK * np.maximum(1.0, np.abs(truth))
        included = (sa_lb - slack <= truth) & (truth <= sa_ub + slack)
        if f >= 1.0 and not included.all():
            i = int(np.flatnonzero(ok)[np.argmin(included)]) + start
            raise InvariantViolation(f"draw {i}: conservative analyst (f={f}) interval misses the truth")
        lb_n = sa_lb > af_lb + BOUND_SLACK
        ub_n = sa_ub < af_ub - BOUND_SLACK
        out[f] = NarrowingCounts(int(included.sum()), int(lb_n.sum()), int(ub_n.sum()), int((lb_n & ub_n).sum()))
    return out, int(ok.sum())


@dataclass
class Table2:
    n_draws: int
    n_valid: int
    counts: dict[float, NarrowingCounts] = field(default_factory=dict)

    HEADER = ("factor", "included", "lb_narrower", "ub_narrower", "both_narrower")

    @property
    def n_degenerate(self) -> int:
        """Draws with no missing U at some exposure level; excluded from percentages."""
        return self.n_draws - self.n_valid

    def row(self, factor: float) -> tuple[float, float, float, float]:
        return self.counts[factor].percentages(max(self.n_valid, 1))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.HEADER)
        for f, c in self.counts.items():
            writer.writerow([repr(f), *(repr(p) for p in c.percentages(max(self.n_valid, 1)))])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [
            f"{'Factor':<8}{'RR_true included':>18}{'LB narrower':>13}{'UB narrower':>13}{'Both narrower':>15}",
            "-" * 67,
        ]
        for f, c in self.counts.items():
            inc, lo, hi, both = c.percentages(max(self.n_valid, 1))
            lines.append(f"{f:<8g}{inc:>18.1f}{lo:>13.1f}{hi:>13.1f}{both:>15.1f}")
        lines.append(f"({self.n_valid} draws, {self.n_degenerate} degenerate excluded)")
        return "\n".join(lines)


def run_table2(config: SimConfig, factors: Sequence[float] = PAPER_FACTORS, threads: int = 1) -> Table2:
    """Coverage and narrowing of sensitivity bounds for analysts off by factor ``f``."""
    factors = [float(f) for f in factors]
    if any(f <= 0 for f in factors):
        raise ValueError("factors must be positive")
    if config.mechanism is not Mechanism.MNAR:
        raise ValueError("the sensitivity experiment is defined for MNAR draws")
    jobs = [(config, factors, s, e) for s, e in _chunks(config.n_draws)]
    totals = {f: NarrowingCounts() for f in factors}
    n_valid = 0
    for part, n_ok in _map(_table2_chunk, jobs, threads):
        n_valid += n_ok
        for f in factors:
            totals[f] += part[f]
    return Table2(config.n_draws, n_valid, totals)
