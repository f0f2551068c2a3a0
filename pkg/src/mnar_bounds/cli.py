"""Command-line front end.

Exit status: 0 on success, 1 on parse or validation errors, 2 when an
internal invariant is violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .bounds import contrast_bounds, po_bounds
from .errors import InfeasibleParams, InvariantViolation, MnarBoundsError, ParseError
from .estimands import (
    ContrastKind,
    complete_case,
    contrast,
    fusion_estimate,
    imputation_weights,
    multiple_imputation,
    true_potential,
)
from .example import example_model
from .probcore import CausalModel, ObservedLaw, dump_json, load_json, observed_law
from .sensitivity import (
    DEFAULT_RESOLUTION,
    SensitivityParams,
    feasible_region,
    sa_contrast_bounds,
    sensitivity_grid,
    true_sensitivity_params,
)
from .simulation import PAPER_FACTORS, Mechanism, SimConfig, run_table1, run_table2

THREADS_ENV = "MNAR_BOUNDS_THREADS"
FULL_SCALE_DRAWS = 1_000_000
# the parameter pair quoted for the worked sensitivity example
SA_PROBE = 0.4


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _interval(iv) -> dict:
    return {"lb": iv.lb, "ub": iv.ub}


def _emit(report: dict, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(lines))


def _naive_and_bounds(law: ObservedLaw, kind: ContrastKind) -> tuple[dict, list[str]]:
    tag = kind.short.upper()
    cc = contrast(kind, complete_case(law, 1), complete_case(law, 0))
    mi = contrast(kind, multiple_imputation(law, 1), multiple_imputation(law, 0))
    af = contrast_bounds(law, kind)
    report = {
        f"{tag}_CC": cc,
        f"{tag}_MI": mi,
        "af_interval": _interval(af),
        "po_bounds": {str(e): _interval(po_bounds(law, e).interval) for e in (0, 1)},
    }
    lines = [
        f"{tag}_CC    {_fmt(cc)}  ({cc!r})",
        f"{tag}_MI    {_fmt(mi)}  ({mi!r})",
        f"bounds   [{_fmt(af.lb)}, {_fmt(af.ub)}]  ({af.lb!r}, {af.ub!r})",
    ]
    return report, lines


def _truth(model: CausalModel, kind: ContrastKind) -> tuple[dict, list[str]]:
    tag = kind.short.upper()
    p1, p0 = true_potential(model, 1), true_potential(model, 0)
    value = contrast(kind, p1, p0)
    return (
        {"p_D1": p1, "p_D0": p0, f"{tag}_true": value},
        [f"{tag}_true  {_fmt(value)}  ({value!r})"],
    )


def _save_law(law: ObservedLaw, path: Optional[str]) -> None:
    if path:
        dump_json(law, path)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_example(args) -> int:
    kind = ContrastKind.parse(args.contrast)
    model = example_model()
    law = observed_law(model)
    truth, t_lines = _truth(model, kind)
    rest, r_lines = _naive_and_bounds(law, kind)
    report = {"contrast": kind.short, **truth, **rest, "mi_weights": imputation_weights(law).tolist()}
    _save_law(law, args.save_law)
    _emit(report, args.json, t_lines + r_lines)
    return 0


def cmd_sa_example(args) -> int:
    kind = ContrastKind.parse(args.contrast)
    model = example_model()
    law = observed_law(model)
    params = true_sensitivity_params(model)
    regions = [feasible_region(law, e) for e in (0, 1)]
    at_truth = sa_contrast_bounds(law, kind, params)
    probe = SensitivityParams((SA_PROBE, params.alpha[1]), (params.beta[0], SA_PROBE))
    probe_lb = sa_contrast_bounds(law, kind, probe).lb
    report = {
        "contrast": kind.short,
        "true_params": params.to_dict(),
        "feasible_threshold": {str(r.e): r.alpha_max for r in regions},
        "sa_interval_true_params": _interval(at_truth),
        "lb_alpha0_beta1_0.4": probe_lb,
    }
    a, b = params.alpha, params.beta
    lines = [
        f"alpha*(0)={_fmt(a[0])} alpha*(1)={_fmt(a[1])} beta*(0)={_fmt(b[0])} beta*(1)={_fmt(b[1])}",
        *(f"feasible e={r.e}: alpha <= {r.alpha_max:.4f} <= beta" for r in regions),
        f"SA interval at true params [{_fmt(at_truth.lb)}, {_fmt(at_truth.ub)}]",
        f"lower bound at alpha(0)=beta(1)={SA_PROBE}: {_fmt(probe_lb)}  ({probe_lb!r})",
    ]
    _emit(report, args.json, lines)
    return 0


def _load_params(path: str) -> SensitivityParams:
    try:
        return SensitivityParams.from_dict(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"cannot read sensitivity parameters from {path}: {exc}") from exc


def cmd_eval(args) -> int:
    kind = ContrastKind.parse(args.contrast)
    obj = load_json(args.file)
    report: dict = {"contrast": kind.short}
    lines: list[str] = []
    if isinstance(obj, CausalModel):
        law = observed_law(obj)
        truth, t_lines = _truth(obj, kind)
        report.update(truth)
        lines += t_lines
    else:
        law = obj
    rest, r_lines = _naive_and_bounds(law, kind)
    report.update(rest)
    lines += r_lines

    if args.params:
        params = _load_params(args.params)
        flagged = []
        for e in (0, 1):
            region = feasible_region(law, e)
            if not region.admits(params.alpha[e], params.beta[e]):
                flagged.append(e)
                warnings.warn(
                    f"sensitivity parameters for e={e} are outside feasible region "
                    f"(alpha <= {region.alpha_max:.4f} <= beta)",
                    InfeasibleParams,
                    stacklevel=2,
                )
        sa = sa_contrast_bounds(law, kind, params)
        report["sa_interval"] = _interval(sa)
        report["outside_feasible_region"] = flagged
        lines.append(f"SA bounds [{_fmt(sa.lb)}, {_fmt(sa.ub)}]  ({sa.lb!r}, {sa.ub!r})")
        if flagged:
            lines.append(f"outside feasible region for e in {flagged}")
    _save_law(law, args.save_law)
    _emit(report, args.json, lines)
    return 0


def cmd_grid(args) -> int:
    kind = ContrastKind.parse(args.contrast)
    obj = load_json(args.file) if args.file else example_model()
    law = observed_law(obj) if isinstance(obj, CausalModel) else obj
    lower, upper = sensitivity_grid(law, kind, args.resolution)
    lower.to_csv(args.lower)
    upper.to_csv(args.upper)
    note = " (degenerate)" if lower.degenerate or upper.degenerate else ""
    print(f"wrote {lower.values.size} lower-bound cells to {args.lower}, "
          f"{upper.values.size} upper-bound cells to {args.upper}{note}")
    return 0


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    return int(os.environ.get(THREADS_ENV, "1"))


def _write_table(table, args) -> None:
    text = table.to_csv()
    if args.out:
        Path(args.out).write_text(text)
        print(table.to_text())
    else:
        sys.stdout.write(text)


def _n_draws(args) -> int:
    return FULL_SCALE_DRAWS if args.full_scale else args.n_draws


def cmd_simulate(args) -> int:
    config = SimConfig(
        n_draws=_n_draws(args),
        u_card=args.u_card,
        master_seed=args.seed,
        contrast=ContrastKind.parse(args.contrast),
    )
    mechanisms = [Mechanism.parse(m) for m in args.mechanisms.split(",")]
    _write_table(run_table1(config, mechanisms, threads=_threads(args)), args)
    return 0


def cmd_sa_simulate(args) -> int:
    config = SimConfig(
        n_draws=_n_draws(args),
        u_card=args.u_card,
        master_seed=args.seed,
        contrast=ContrastKind.parse(args.contrast),
    )
    factors = [float(f) for f in args.factors.split(",")]
    _write_table(run_table2(config, factors, threads=_threads(args)), args)
    return 0


def _load_aux(path: str, u_card: int) -> np.ndarray:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read auxiliary table {path}: {exc}") from exc
    table = doc.get("p_u_given_e") if isinstance(doc, dict) else doc
    try:
        arr = np.array(table, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"auxiliary table is not numeric: {exc}") from exc
    if arr.shape != (2, u_card):
        raise ParseError(f"auxiliary table must be 2 x {u_card}, got shape {arr.shape}")
    return arr


def cmd_fuse(args) -> int:
    kind = ContrastKind.parse(args.contrast)
    obj = load_json(args.law)
    law = observed_law(obj) if isinstance(obj, CausalModel) else obj
    aux = _load_aux(args.aux, law.u_card)
    p1, p0 = fusion_estimate(law, aux, 1), fusion_estimate(law, aux, 0)
    value = contrast(kind, p1, p0)
    tag = kind.short.upper()
    report = {"contrast": kind.short, "p_D1": p1, "p_D0": p0, f"{tag}_fusion": value}
    lines = [
        f"p(D_1=1)    {_fmt(p1)}  ({p1!r})",
        f"p(D_0=1)    {_fmt(p0)}  ({p0!r})",
        f"{tag}_fusion   {_fmt(value)}  ({value!r})",
    ]
    _emit(report, args.json, lines)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mnar-bounds",
        description="Bounds and sensitivity analysis for causal contrasts with an MNAR confounder.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--contrast", default="rr", help="rr, rd, or, od (default: rr)")
    shared.add_argument("--json", action="store_true", help="full-precision JSON report")

    p = sub.add_parser("example", parents=[shared], help="worked example: truth, CC, MI, bounds")
    p.add_argument("--save-law", metavar="PATH", help="write the example's observed law as JSON")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("sa-example", parents=[shared], help="worked sensitivity-analysis example")
    p.set_defaults(func=cmd_sa_example)

    p = sub.add_parser("eval", parents=[shared], help="bounds for a model or law JSON file")
    p.add_argument("file")
    p.add_argument("--params", metavar="PATH", help="sensitivity parameters JSON {alpha: [..], beta: [..]}")
    p.add_argument("--save-law", metavar="PATH", help="write the observed law as JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", parents=[shared], help="sensitivity grids as CSV")
    p.add_argument("file", nargs="?", help="model or law JSON (default: worked example)")
    p.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    p.add_argument("--lower", default="grid_lower.csv")
    p.add_argument("--upper", default="grid_upper.csv")
    p.set_defaults(func=cmd_grid)

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--n-draws", type=int, default=100_000)
    sim.add_argument("--full-scale", action="store_true", help=f"use {FULL_SCALE_DRAWS} draws")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--u-card", type=int, default=3)
    sim.add_argument("--threads", type=int, default=None, help=f"worker processes (env {THREADS_ENV})")
    sim.add_argument("--out", metavar="PATH", help="CSV destination (default: stdout)")

    p = sub.add_parser("simulate", parents=[shared, sim], help="naive-estimator study")
    p.add_argument("--mechanisms", default="MCAR,MAR,MNAR,MNARex")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sa-simulate", parents=[shared, sim], help="sensitivity-analysis study")
    p.add_argument("--factors", default=",".join(str(f) for f in PAPER_FACTORS))
    p.set_defaults(func=cmd_sa_simulate)

    p = sub.add_parser("fuse", parents=[shared], help="data-fusion point estimate")
    p.add_argument("law", help="model or law JSON")
    p.add_argument("aux", help="auxiliary p(U|E) JSON, 2 x K")
    p.set_defaults(func=cmd_fuse)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except (MnarBoundsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
