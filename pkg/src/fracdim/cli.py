"""Command-line front end.

Subcommands construct sets and systems from JSON files, run the analyses
and write JSON reports plus plot-ready CSV tables.  Rationals travel as
"p/q" strings everywhere; floats appear only in derived log and slope
columns.  Exit codes: 0 success, 1 parse/validation error, 2 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys as _sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import cantor, dims, equihom, ifs
from .core import (IntervalSet, PointSet, SetLike, as_scalar,
                   dyadic_gap_points, format_scalar, interval_set_normalize,
                   inverse_power_points, point_set)
from .covers import verify_cover_packing_sandwich
from .errors import FracdimError, InvariantViolation, ParseError


# ---------------------------------------------------------------------------
# scalar/grid parsing and JSON plumbing


def parse_scalar_expr(text: str) -> Fraction:
    """A rational like "1/4" or a power like "2^-4" / "3^-2"."""
    text = text.strip()
    if "^" in text:
        base_s, exp_s = text.split("^", 1)
        try:
            base = as_scalar(base_s)
            exp = int(exp_s)
        except (ParseError, ValueError) as exc:
            raise ParseError(f"bad power expression {text!r}") from exc
        return base**exp
    return as_scalar(text)


def parse_grid_expr(text: str) -> list[Fraction]:
    """Comma list of scalars, or an exponent range "b^e1..b^e2"."""
    text = text.strip()
    if ".." in text:
        start_s, end_s = text.split("..", 1)
        if "^" not in start_s or "^" not in end_s:
            raise ParseError(f"grid range {text!r} needs base^exp endpoints")
        base_s, e1_s = start_s.split("^", 1)
        base2_s, e2_s = end_s.split("^", 1)
        if base2_s.strip() and base2_s.strip() != base_s.strip():
            raise ParseError(f"grid range {text!r} mixes bases")
        try:
            base = as_scalar(base_s)
            e1, e2 = int(e1_s), int(e2_s)
        except (ParseError, ValueError) as exc:
            raise ParseError(f"bad grid range {text!r}") from exc
        step = 1 if e2 >= e1 else -1
        return [base**e for e in range(e1, e2 + step, step)]
    return [parse_scalar_expr(part) for part in text.split(",") if part.strip()]


def jsonable(obj):
    """Recursively convert reports to JSON-safe values; exact rationals
    become "p/q" strings."""
    if isinstance(obj, Fraction):
        return format_scalar(obj)
    if isinstance(obj, (IntervalSet,)):
        return [[format_scalar(iv.lo), format_scalar(iv.hi)]
                for iv in obj.intervals]
    if isinstance(obj, PointSet):
        return [format_scalar(p) for p in obj.points]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def set_from_json(data: dict) -> SetLike:
    kind = data.get("kind")
    if kind == "points":
        return point_set([as_scalar(p) for p in data["points"]])
    if kind == "intervals":
        return interval_set_normalize(
            [(as_scalar(lo), as_scalar(hi)) for lo, hi in data["intervals"]])
    if kind == "inverse-power":
        return inverse_power_points(int(data["n_max"]), as_scalar(data["alpha"]))
    if kind == "dyadic-gap":
        return dyadic_gap_points(int(data["n_max"]))
    raise ParseError(f"unknown set kind {kind!r}")


def set_to_json(s: SetLike) -> dict:
    if isinstance(s, PointSet):
        return {"kind": "points", "points": [format_scalar(p) for p in s.points]}
    return {"kind": "intervals",
            "intervals": [[format_scalar(iv.lo), format_scalar(iv.hi)]
                          for iv in s.intervals]}


def open_set_from_json(data: dict) -> ifs.OpenIntervalSet:
    try:
        return ifs.OpenIntervalSet.build(
            [(as_scalar(lo), as_scalar(hi)) for lo, hi in data["intervals"]])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed open set: {exc}") from exc


def write_report(path: Optional[str], payload: dict) -> None:
    if path is None:
        return
    text = json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def emit_loglog_table(data, path: str) -> None:
    """CSV table for box counts [(delta, count)] or a LocalCoverProfile.

    Exact rationals are written as "p/q" strings next to float log10
    columns; raises on empty input and writes nothing then.
    """
    import math

    if isinstance(data, dims.LocalCoverProfile):
        rows = data.rows
        if not rows:
            raise ParseError("empty profile table")
        lines = ["delta,rho,sup_count,inf_count,ratio"]
        for row in rows:
            lines.append(
                f"{format_scalar(row.delta)},{format_scalar(row.rho)},"
                f"{row.sup_count},{row.inf_count},"
                f"{row.sup_count / row.inf_count!r}")
    else:
        rows = list(data)
        if not rows:
            raise ParseError("empty counts table")
        lines = ["delta,count,log10_inv_delta,log10_count"]
        for delta, count in rows:
            inv = (math.log10(delta.denominator) - math.log10(delta.numerator))
            lines.append(f"{format_scalar(delta)},{count},{inv!r},"
                         f"{math.log10(count)!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_cantor(args) -> dict:
    spec = cantor.spec_from_json(load_json(args.spec))
    depth = args.depth
    sequence = cantor.cantor_box_sequence(spec, args.shift, depth)
    tail = sequence[len(sequence) // 2:]
    payload = {
        "command": "cantor",
        "spec": cantor.spec_to_json(spec),
        "shift": args.shift,
        "box_sequence": [{"n": n, "s": s} for n, s in sequence],
        "tail_max": max(s for _, s in tail),
        "tail_min": min(s for _, s in tail),
    }
    if args.prefractal_depth:
        pre = cantor.cantor_prefractal(spec, args.shift, args.prefractal_depth)
        payload["prefractal"] = {
            "depth": args.prefractal_depth,
            "interval_count": len(pre),
            "interval_length": format_scalar(
                cantor.pi_product(spec, args.shift, args.prefractal_depth).value),
            "intervals": None if len(pre) > 4096 else jsonable(pre),
        }
    return payload


def _cmd_ifs_run(args) -> dict:
    system = ifs.system_from_json(load_json(args.system))
    seed = set_from_json(load_json(args.seed_set)) if args.seed_set else None
    result = ifs.pullback_approximation(system, args.start, args.levels, seed)
    payload = {
        "command": "ifs-run",
        "start": args.start,
        "levels": args.levels,
        "radius": result.radius,
        "decay": list(result.decay),
        "final_interval_count": len(result.final),
        "final": None if len(result.final) > 4096 else result.final,
    }
    if args.cylinder_delta:
        delta = parse_scalar_expr(args.cylinder_delta)
        eta = parse_scalar_expr(args.eta) if args.eta else Fraction(1)
        words = ifs.cylinder_decomposition(system, args.start, delta, eta)
        payload["cylinders"] = {
            "delta": delta,
            "eta": eta,
            "count": len(words),
            "max_length": max(len(w) for w in words),
        }
    return payload


def _grids(args, paired_default=False):
    if args.delta:
        deltas = [parse_scalar_expr(args.delta)]
    elif args.delta_grid:
        deltas = parse_grid_expr(args.delta_grid)
    else:
        raise ParseError("need --delta or --delta-grid")
    rhos = parse_grid_expr(args.rho_grid)
    return deltas, rhos


def _cmd_dims(args) -> dict:
    f = set_from_json(load_json(args.set))
    grid = dims.ScaleGrid(parse_scalar_expr(args.grid_base),
                          parse_scalar_expr(args.grid_factor),
                          args.grid_depth)
    counts = dims.box_counts(f, grid)
    lower, upper = dims.box_dimension_estimate(counts)
    payload = {
        "command": "dims",
        "set": set_to_json(f),
        "counts": [{"delta": d, "count": n} for d, n in counts],
        "slopes": dims.two_point_slopes(counts),
        "lower_box": lower,
        "upper_box": upper,
    }
    if args.rho_grid:
        deltas, rhos = _grids(args)
        profile = dims.local_cover_profile(f, deltas, rhos)
        report = dims.DimensionReport(
            lower, upper, dims.assouad_estimate(profile),
            dims.lower_assouad_estimate(profile),
            tuple(dims.two_point_slopes(counts)))
        payload["assouad"] = report.assouad
        payload["lower_assouad"] = report.lower_assouad
        payload["chain_ok"] = dims.dimension_chain_check(report)
    if args.csv:
        emit_loglog_table(counts, args.csv)
    return payload


def _cmd_assouad(args) -> dict:
    f = set_from_json(load_json(args.set))
    deltas, rhos = _grids(args)
    payload = {"command": "assouad"}
    if args.point is not None:
        x = parse_scalar_expr(args.point)
        payload["point"] = x
        payload["estimate"] = equihom.equihom_singlepoint_assouad(
            f, x, deltas, rhos, paired=args.paired)
    else:
        profile = dims.local_cover_profile(f, deltas, rhos, paired=args.paired)
        payload["estimate"] = dims.assouad_estimate(profile)
        payload["lower_estimate"] = dims.lower_assouad_estimate(profile)
        if args.csv:
            emit_loglog_table(profile, args.csv)
    return payload


def _cmd_equihom(args) -> dict:
    f = set_from_json(load_json(args.set))
    deltas, rhos = _grids(args)
    report = equihom.equihom_certify(
        f, deltas, rhos,
        c1=parse_scalar_expr(args.c1), c2=parse_scalar_expr(args.c2))
    payload = {
        "command": "equihom",
        "set_kind": set_to_json(f)["kind"],
        "verdict": report.verdict,
        "max_ratio": report.max_ratio,
        "growth_fit": report.growth_fit,
        "rows": [{"delta": d, "rho": r, "ratio": ratio}
                 for d, r, ratio in report.rows],
    }
    if args.csv:
        emit_loglog_table(report.profile, args.csv)
    return payload


def _cmd_verify(args) -> dict:
    payload: dict = {"command": "verify"}
    if args.system:
        system = ifs.system_from_json(load_json(args.system))
        if args.open_set:
            u = open_set_from_json(load_json(args.open_set))
            horizon = args.levels or (len(system.levels) + 1)
            eps = parse_scalar_expr(args.epsilon0) if args.epsilon0 else u.length
            cert = ifs.verify_mosc(system, [u] * (horizon + 1), eps)
            payload["mosc"] = {
                "passed": cert.passed,
                "epsilon0": cert.epsilon0,
                "eta": cert.eta,
                "convention": cert.convention,
                "failures": [dataclasses.asdict(c) for c in cert.checks
                             if not c.passed],
            }
        if args.moran_s is not None:
            check = ifs.moran_level_check(system, args.moran_s,
                                          args.levels or len(system.levels))
            payload["moran_level_check"] = {
                "s": check.s,
                "passed": check.passed,
                "max_residual": max(abs(r) for _, r in check.residuals),
            }
    if args.self_test:
        payload["self_test"] = _self_test(args.self_test, args.seed)
    return payload


def _self_test(trials: int, seed: int) -> dict:
    """Randomized cross-checks: greedy covering versus the brute-force
    oracle, and the cover/packing sandwich.  An exact mismatch is an
    internal invariant violation."""
    import random

    from .covers import covering_number, covering_number_bruteforce

    rng = random.Random(seed)
    for trial in range(trials):
        pts = sorted({Fraction(rng.randint(0, 400), rng.randint(1, 40))
                      for _ in range(rng.randint(1, 12))})
        f = point_set(pts)
        delta = Fraction(rng.randint(1, 60), rng.randint(1, 24))
        greedy = covering_number(f, delta).count
        oracle = covering_number_bruteforce(f, delta).count
        if greedy != oracle:
            raise InvariantViolation(
                f"trial {trial}: greedy {greedy} != oracle {oracle}")
        if not verify_cover_packing_sandwich(f, delta):
            raise InvariantViolation(f"trial {trial}: sandwich failed")
    return {"trials": trials, "seed": seed, "passed": True}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracdim",
        description="Exact fractal-geometry analyses on the line")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized self-tests")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cantor", help="box-dimension sequence of a Cantor construction")
    p.add_argument("--spec", required=True)
    p.add_argument("--depth", type=int, default=64)
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--prefractal-depth", type=int, default=0)
    p.add_argument("--report")
    p.set_defaults(func=_cmd_cantor)

    p = sub.add_parser("ifs-run", help="pullback approximation of a system")
    p.add_argument("--system", required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--seed-set")
    p.add_argument("--cylinder-delta")
    p.add_argument("--eta")
    p.add_argument("--report")
    p.set_defaults(func=_cmd_ifs_run)

    p = sub.add_parser("dims", help="box counts and dimension estimates")
    p.add_argument("--set", required=True)
    p.add_argument("--grid-base", default="1/2")
    p.add_argument("--grid-factor", default="1/2")
    p.add_argument("--grid-depth", type=int, default=10)
    p.add_argument("--delta")
    p.add_argument("--delta-grid")
    p.add_argument("--rho-grid")
    p.add_argument("--report")
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_dims)

    p = sub.add_parser("assouad", help="local-cover scaling estimates")
    p.add_argument("--set", required=True)
    p.add_argument("--delta")
    p.add_argument("--delta-grid")
    p.add_argument("--rho-grid", required=True)
    p.add_argument("--point")
    p.add_argument("--paired", action="store_true")
    p.add_argument("--report")
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_assouad)

    p = sub.add_parser("equihom", help="equi-homogeneity certification")
    p.add_argument("--set", required=True)
    p.add_argument("--delta")
    p.add_argument("--delta-grid")
    p.add_argument("--rho-grid", required=True)
    p.add_argument("--c1", default="1")
    p.add_argument("--c2", default="1")
    p.add_argument("--report")
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_equihom)

    p = sub.add_parser("verify", help="open-set condition and self-tests")
    p.add_argument("--system")
    p.add_argument("--open-set")
    p.add_argument("--epsilon0")
    p.add_argument("--levels", type=int)
    p.add_argument("--moran-s", type=float)
    p.add_argument("--self-test", type=int, default=0)
    p.add_argument("--report")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    # worker parallelism is confined to library calls; the cap is
    # honored trivially by this single-threaded orchestrator
    os.environ.setdefault("FRACDIM_THREADS", "1")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload = args.func(args)
        payload["seed"] = args.seed
        write_report(getattr(args, "report", None), payload)
        if getattr(args, "report", None) is None:
            print(json.dumps(jsonable(payload), indent=2, sort_keys=True))
        return 0
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=_sys.stderr)
        return 2
    except (FracdimError, OSError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
