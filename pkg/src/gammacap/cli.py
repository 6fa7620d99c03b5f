"""Command-line entry point: ``gammacap {capacity,subadd,rational}``.

Exit codes: 0 success (capacity: gap target met), 1 error or usage error,
2 capacity stopped at the last stage without meeting the gap target,
3 rational map whose preimage of the disk is not n-connected.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .capacity import CapacityError, SolverConfig, compute_bounds
from .geometry import GeometryError, compact_set_from_dict, validate
from .quadrature import QuadratureConfig

EXIT_OK, EXIT_ERROR, EXIT_MAX_STAGE, EXIT_DISCONNECTED = 0, 1, 2, 3
DEFAULT_GAP_TARGET = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x: float) -> str:
    """15 significant digits, trailing zeros kept (table style, aligned columns)."""
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return np.format_float_positional(x, precision=15, unique=False, fractional=False, trim="k")


@dataclass
class RunManifest:
    command: str
    input_digest: str
    config: dict
    results: list = field(default_factory=list)
    total_elapsed: float = 0.0
    tool_version: str = __version__

    def write(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.__dict__, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _read_json(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()
    try:
        return json.loads(raw.decode("utf-8")), digest
    except json.JSONDecodeError as exc:
        raise GeometryError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
        return v
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gammacap", description="Certified bounds for analytic capacity.")
    p.add_argument("--version", action="version", version=f"gammacap {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("capacity", help="bracket the analytic capacity of a compact set")
    c.add_argument("geometry", help="geometry JSON file")
    c.add_argument("--basis", choices=["auto", "poles", "corner", "multipole"], default="auto")
    c.add_argument("--corner-basis", action="store_true", help="shorthand for --basis corner")
    c.add_argument("--max-stage", "--rings", "--n", "--stages", dest="max_stage", type=int, default=None,
                   help="last refinement stage (rings per disk, or basis degree)")
    c.add_argument("--first-stage", type=int, default=None)
    c.add_argument("--gap-target", type=_positive(float), default=None,
                   help="stop once upper - lower <= this (default 1e-10; with an explicit stage count "
                        "all requested stages run and the exit code still uses 1e-10)")
    c.add_argument("--quad-tol", type=_positive(float), default=1e-9)
    c.add_argument("--condition-limit", type=_positive(float), default=1e15)
    c.add_argument("--emit", choices=["table", "csv", "json"], default="table")
    c.add_argument("--manifest", help="write a run manifest JSON here")

    s = sub.add_parser("subadd", help="sweep the subadditivity ratio over disk radii")
    s.add_argument("config", help='JSON with "centers_E"/"centers_F" or "random": {n, m, box, min_gap}')
    s.add_argument("--r-steps", type=int, default=500)
    s.add_argument("--seed", type=int, default=0, help="seed for random configurations")
    s.add_argument("--max-stage", type=int, default=4)
    s.add_argument("--gap-target", type=_positive(float), default=1e-10)
    s.add_argument("--emit", choices=["csv", "table"], default="csv")
    s.add_argument("--output", help="write the CSV here instead of stdout")
    s.add_argument("--manifest")

    r = sub.add_parser("rational", help="check whether a rational map is an Ahlfors function")
    r.add_argument("map", help='JSON with "residues" and "poles", or "family": "rotation"|"reflection"')
    r.add_argument("--degree", type=int, default=3)
    r.add_argument("--samples", type=int, default=1024)
    r.add_argument("--emit", choices=["json", "table"], default="json")
    r.add_argument("--manifest")
    return p


# --------------------------------------------------------------------------
# capacity
# --------------------------------------------------------------------------


def _stage_dict(b) -> dict:
    return {"stage": b.stage, "n_basis": b.n_basis, "lower": b.lower, "upper": b.upper,
            "stage_lower": b.stage_lower, "stage_upper": b.stage_upper, "condition": b.condition}


def cmd_capacity(args, out, err) -> int:
    data, digest = _read_json(args.geometry)
    compact = compact_set_from_dict(data)
    report = validate(compact)
    if not report.ok:
        raise GeometryError("; ".join(report.violations))
    basis = "corner" if args.corner_basis else args.basis
    first = args.first_stage
    if first is None and basis == "corner":
        first = 2
    target = DEFAULT_GAP_TARGET if args.gap_target is None else args.gap_target
    run_all = args.gap_target is None and args.max_stage is not None
    solver = SolverConfig(basis=basis, first_stage=first,
                          max_stage=args.max_stage if args.max_stage is not None else 4,
                          gap_target=math.ulp(0.0) if run_all else target,
                          quadrature=QuadratureConfig(abs_tol=args.quad_tol), condition_limit=args.condition_limit)
    t0 = time.perf_counter()
    try:
        stages = compute_bounds(compact, solver)
    except CapacityError as exc:
        stages = exc.last
        if not stages:
            raise
        print(f"warning: stopped early: {exc}", file=err)
    total = time.perf_counter() - t0

    buf = io.StringIO()
    if args.emit == "table":
        print(f"{'stage':>5}  {'lower':>17}  {'upper':>17}  {'time (s)':>10}", file=buf)
        for b in stages:
            print(f"{b.stage:>5}  {fmt(b.lower):>17}  {fmt(b.upper):>17}  {b.elapsed:>10.6f}", file=buf)
    elif args.emit == "csv":
        print("stage,n_basis,lower,upper", file=buf)
        for b in stages:
            print(f"{b.stage},{b.n_basis},{fmt(b.lower)},{fmt(b.upper)}", file=buf)
    else:
        json.dump({"stages": [_stage_dict(b) for b in stages]}, buf, indent=2)
        buf.write("\n")
    out.write(buf.getvalue())

    if args.manifest:
        cfg = {"geometry": args.geometry, "basis": solver.resolved_basis(compact),
               "first_stage": solver.start(compact), "max_stage": solver.max_stage, "gap_target": target,
               "run_all_stages": run_all, "quad_tol": args.quad_tol, "condition_limit": solver.condition_limit}
        RunManifest("capacity", digest, cfg, [_stage_dict(b) for b in stages], total).write(args.manifest)
    return EXIT_OK if stages[-1].gap <= target else EXIT_MAX_STAGE


# --------------------------------------------------------------------------
# subadd
# --------------------------------------------------------------------------


def cmd_subadd(args, out, err) -> int:
    from .experiments.subadditivity import (DiskPairConfig, default_grid, disk_pair_config_from_dict,
                                            max_ratio_upper, monotonicity_scan, random_configuration,
                                            ratio_sweep, write_csv)

    if args.r_steps < 1:
        raise UsageError("--r-steps must be >= 1")
    data, digest = _read_json(args.config)
    if isinstance(data, dict) and "random" in data:
        draw = data["random"]
        try:
            e, f = random_configuration(int(draw["n"]), int(draw["m"]), args.seed,
                                        float(draw.get("box", 10.0)), float(draw.get("min_gap", 1.0)))
        except (KeyError, TypeError) as exc:
            raise GeometryError(f"random: missing or invalid field {exc}") from None
        cfg = DiskPairConfig(e, f)
        cfg = DiskPairConfig(e, f, default_grid(cfg.delta, args.r_steps))
    else:
        cfg = disk_pair_config_from_dict(data, args.r_steps)
    solver = SolverConfig(basis="poles", max_stage=args.max_stage, gap_target=args.gap_target)
    t0 = time.perf_counter()
    points = ratio_sweep(cfg, solver)
    total = time.perf_counter() - t0

    if args.emit == "csv":
        if args.output:
            with open(args.output, "w", newline="") as fh:
                write_csv(points, fh)
        else:
            write_csv(points, out)
    else:
        print(f"{'r':>17}  {'ratio lower':>17}  {'ratio upper':>17}", file=out)
        for p in points:
            print(f"{fmt(p.r):>17}  {fmt(p.ratio_lower):>17}  {fmt(p.ratio_upper):>17}", file=out)

    missing = [p for p in points if p.missing]
    violations = monotonicity_scan(points)
    print(f"max certified ratio upper bound: {fmt(max_ratio_upper(points))}", file=err)
    if missing:
        print(f"missing points: {len(missing)} (first: r={fmt(missing[0].r)}: {missing[0].error})", file=err)
    if violations:
        for a, b in violations:
            print(f"CERTIFIED INCREASE between r={fmt(a)} and r={fmt(b)}", file=err)
    else:
        print("monotonicity: no certified increase", file=err)
    if args.manifest:
        conf = {"config": args.config, "seed": args.seed, "r_steps": args.r_steps, "max_stage": args.max_stage,
                "gap_target": args.gap_target, "centers_E": cfg.to_dict()["centers_E"],
                "centers_F": cfg.to_dict()["centers_F"]}
        res = [dict(zip(("r", "ratio_lower", "ratio_upper"), (p.r, p.ratio_lower, p.ratio_upper))) for p in points]
        RunManifest("subadd", digest, conf, res, total).write(args.manifest)
    return EXIT_OK


# --------------------------------------------------------------------------
# rational
# --------------------------------------------------------------------------


def cmd_rational(args, out, err) -> int:
    from .experiments.rational import (AHLFORS, DisconnectedError, critical_values_in_disk, rational_map_from_dict,
                                       symmetric_family, verify_ahlfors)

    if args.degree < 1:
        raise UsageError("--degree must be >= 1")
    if args.samples < 8:
        raise UsageError("--samples must be >= 8")
    data, digest = _read_json(args.map)
    try:
        if isinstance(data, dict) and "family" in data:
            params = {k: v for k, v in data.items() if k != "family"}
            R = symmetric_family(data["family"], **params)
        else:
            R = rational_map_from_dict(data)
    except (TypeError, KeyError) as exc:
        raise GeometryError(f"{args.map}: invalid map: {exc}") from None
    ok, values = critical_values_in_disk(R)
    if not ok:
        report = {"error": "disconnected", "message": "a critical value lies outside the open unit disk",
                  "critical_values": [[v.real, v.imag] for v in values]}
        json.dump(report, err, indent=2)
        err.write("\n")
        return EXIT_DISCONNECTED
    t0 = time.perf_counter()
    try:
        verdict = verify_ahlfors(R, degree=args.degree, samples=args.samples)
    except DisconnectedError as exc:  # pragma: no cover - prechecked above
        print(f"error: {exc}", file=err)
        return EXIT_DISCONNECTED
    total = time.perf_counter() - t0
    doc = verdict.to_dict()
    if args.emit == "json":
        json.dump(doc, out, indent=2)
        out.write("\n")
    else:
        print(f"{'k':>3}  {'lower':>17}  {'upper':>17}", file=out)
        for b in verdict.stages:
            print(f"{b.stage:>3}  {fmt(b.stage_lower):>17}  {fmt(b.stage_upper):>17}", file=out)
        s = verdict.sum_residues
        wording = "consistent with Ahlfors" if verdict.verdict == AHLFORS else verdict.verdict
        print(f"sum of residues: {fmt(s.real)}" + (f" {fmt(s.imag)}i" if s.imag else ""), file=out)
        print(f"verdict: {wording}", file=out)
    if args.manifest:
        conf = {"map": args.map, "degree": args.degree, "samples": args.samples, **R.to_dict()}
        RunManifest("rational", digest, conf, doc["stages"], total).write(args.manifest)
    return EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        handler = {"capacity": cmd_capacity, "subadd": cmd_subadd, "rational": cmd_rational}[args.command]
        return handler(args, out, err)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_ERROR
    except (OSError, GeometryError, CapacityError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
