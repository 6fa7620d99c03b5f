"""Ratio sweeps for the subadditivity problem on equal-radius disk families.

For centers ``z_1..z_n`` (set ``E``) and ``w_1..w_m`` (set ``F``) with minimal
separation ``delta``, and ``0 < r < delta/2``,

    R(r) = gamma(E_r u F_r) / (gamma(E_r) + gamma(F_r))

is bracketed from the three capacity brackets.  Subadditivity of analytic
capacity is equivalent to ``R(r) <= 1`` for every such configuration.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..capacity import CapacityError, SolverConfig, capacity_bracket, worker_count
from ..geometry import CompactSet, GeometryError, min_pairwise_gap

CSV_HEADER = ["r", "ratio_lower", "ratio_upper", "gamma_union_lower", "gamma_union_upper",
              "gamma_E_lower", "gamma_E_upper", "gamma_F_lower", "gamma_F_upper"]


def default_grid(delta: float, steps: int = 500) -> tuple[float, ...]:
    """``steps`` radii equally spaced from ``delta/1000`` to ``0.499 delta``."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return (delta / 1000,)
    return tuple(float(r) for r in np.linspace(delta / 1000, 0.499 * delta, steps))


@dataclass(frozen=True)
class DiskPairConfig:
    centers_e: tuple
    centers_f: tuple
    r_grid: tuple = ()

    def __post_init__(self):
        e = tuple(complex(z) for z in self.centers_e)
        f = tuple(complex(z) for z in self.centers_f)
        if not e or not f:
            raise GeometryError("both E and F need at least one center")
        object.__setattr__(self, "centers_e", e)
        object.__setattr__(self, "centers_f", f)
        delta = min_pairwise_gap(e + f)  # raises on duplicates
        grid = tuple(float(r) for r in self.r_grid) or default_grid(delta)
        for i, r in enumerate(grid):
            if not 0 < r < delta / 2:
                raise GeometryError(f"r_grid[{i}]: radius {r} not in (0, {delta / 2})")
        object.__setattr__(self, "r_grid", tuple(sorted(grid)))

    @property
    def delta(self) -> float:
        return min_pairwise_gap(self.centers_e + self.centers_f)

    def with_steps(self, steps: int) -> "DiskPairConfig":
        return DiskPairConfig(self.centers_e, self.centers_f, default_grid(self.delta, steps))

    def to_dict(self) -> dict:
        return {"centers_E": [[z.real, z.imag] for z in self.centers_e],
                "centers_F": [[z.real, z.imag] for z in self.centers_f],
                "r_grid": list(self.r_grid)}


def _centers(items, where):
    out = []
    for i, v in enumerate(items):
        if isinstance(v, (int, float)):
            out.append(complex(v))
        elif isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
            out.append(complex(v[0], v[1]))
        else:
            raise GeometryError(f"{where}[{i}]: expected a number or [x, y]")
    return out


def disk_pair_config_from_dict(data: dict, steps: int | None = None) -> DiskPairConfig:
    """Schema: ``{"centers_E": [...], "centers_F": [...], "r_steps"?: int, "r_grid"?: [...]}``."""
    if not isinstance(data, dict):
        raise GeometryError("top level: expected an object")
    for key in ("centers_E", "centers_F"):
        if key not in data or not isinstance(data[key], list):
            raise GeometryError(f"{key}: required list of centers")
    e = _centers(data["centers_E"], "centers_E")
    f = _centers(data["centers_F"], "centers_F")
    grid = () if steps is not None else tuple(data.get("r_grid", ()))
    cfg = DiskPairConfig(tuple(e), tuple(f), grid)
    n = steps if steps is not None else data.get("r_steps")
    return cfg.with_steps(int(n)) if n is not None and not grid else cfg


def load_disk_pair_config(path, steps: int | None = None) -> DiskPairConfig:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return disk_pair_config_from_dict(data, steps)


def random_configuration(n: int, m: int, seed: int, box: float = 10.0, min_gap: float = 1.0,
                         max_tries: int = 100_000) -> tuple[tuple, tuple]:
    """Centers drawn uniformly in ``[0, box]^2`` with rejection below ``min_gap``."""
    rng = np.random.default_rng(seed)
    pts: list[complex] = []
    tries = 0
    while len(pts) < n + m:
        tries += 1
        if tries > max_tries:
            raise GeometryError("could not place the requested number of centers")
        z = complex(*rng.uniform(0, box, 2))
        if all(abs(z - p) >= min_gap for p in pts):
            pts.append(z)
    return tuple(pts[:n]), tuple(pts[n:])


def lattice_configuration(n: int, m: int, seed: int, side: int = 8) -> tuple[tuple, tuple]:
    """``n + m`` distinct points of ``{0..side-1}^2``, so ``delta = 1`` exactly."""
    if n + m > side * side:
        raise ValueError("lattice too small")
    rng = np.random.default_rng(seed)
    idx = rng.choice(side * side, n + m, replace=False)
    pts = [complex(int(i % side), int(i // side)) for i in idx]
    return tuple(pts[:n]), tuple(pts[n:])


# --------------------------------------------------------------------------
# Sweep
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RatioPoint:
    r: float
    ratio_lower: float
    ratio_upper: float
    union: tuple = (math.nan, math.nan)
    e: tuple = (math.nan, math.nan)
    f: tuple = (math.nan, math.nan)
    error: str | None = None

    @property
    def missing(self) -> bool:
        return self.error is not None or not (math.isfinite(self.ratio_lower) and math.isfinite(self.ratio_upper))

    @property
    def gap(self) -> float:
        return self.ratio_upper - self.ratio_lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.ratio_lower + self.ratio_upper)

    def row(self) -> list[float]:
        return [self.r, self.ratio_lower, self.ratio_upper, *self.union, *self.e, *self.f]


def default_solver() -> SolverConfig:
    return SolverConfig(basis="poles", max_stage=4, gap_target=1e-10)


def ratio_point(centers_e, centers_f, r: float, solver: SolverConfig | None = None) -> RatioPoint:
    solver = solver or default_solver()
    try:
        e = capacity_bracket(CompactSet.disks(centers_e, r), solver)
        f = capacity_bracket(CompactSet.disks(centers_f, r), solver)
        u = capacity_bracket(CompactSet.disks(tuple(centers_e) + tuple(centers_f), r), solver)
    except (CapacityError, GeometryError, ArithmeticError, ValueError) as exc:
        return RatioPoint(r, math.nan, math.nan, error=f"{type(exc).__name__}: {exc}")
    lo = u.lower / (e.upper + f.upper)
    hi = u.upper / (e.lower + f.lower) if e.lower + f.lower > 0 else math.inf
    return RatioPoint(r, lo, hi, (u.lower, u.upper), (e.lower, e.upper), (f.lower, f.upper))


def ratio_sweep(cfg: DiskPairConfig, solver: SolverConfig | None = None,
                workers: int | None = None) -> list[RatioPoint]:
    """Ratio brackets at every radius of ``cfg.r_grid``, ordered by ``r``.

    A failed solve marks that point as missing (NaN bounds and an ``error``
    message) instead of aborting the sweep.
    """
    solver = solver or default_solver()
    workers = worker_count() if workers is None else max(1, workers)
    job = lambda r: ratio_point(cfg.centers_e, cfg.centers_f, r, solver)  # noqa: E731
    if workers == 1:
        return [job(r) for r in cfg.r_grid]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(job, cfg.r_grid))


def max_ratio_upper(points) -> float:
    vals = [p.ratio_upper for p in points if not p.missing]
    return max(vals) if vals else math.nan


def monotonicity_scan(points) -> list[tuple[float, float]]:
    """Adjacent ``(r_i, r_{i+1})`` with ``lower(r_{i+1}) > upper(r_i)``.

    Each reported pair is a certified increase of ``R``; missing points are
    skipped.  An empty list is consistent with ``R`` being decreasing.
    """
    good = sorted((p for p in points if not p.missing), key=lambda p: p.r)
    return [(a.r, b.r) for a, b in zip(good, good[1:]) if b.ratio_lower > a.ratio_upper]


@dataclass(frozen=True)
class AsymptoticFit:
    C: float
    residual: float
    D: float = 0.0
    n_points: int = 0


def asymptotic_fit(points, r_max: float | None = None, linear: bool = True) -> AsymptoticFit:
    """Fit ``(1 - R(r)) / r^2`` for small ``r``.

    With ``linear=True`` (default) the model is ``C + D r``, absorbing the
    ``O(r^3)`` term of ``R``; otherwise a constant.  ``R`` is taken as the
    bracket midpoint.  ``residual`` is the RMS misfit relative to ``|C|``.
    """
    pts = [p for p in points if not p.missing and (r_max is None or p.r <= r_max)]
    if len(pts) < 3:
        raise ValueError("asymptotic fit needs at least 3 usable points")
    r = np.array([p.r for p in pts])
    y = (1.0 - np.array([p.midpoint for p in pts])) / r**2
    X = np.column_stack([np.ones_like(r), r]) if linear else np.ones((r.size, 1))
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    misfit = y - X @ coef
    C = float(coef[0])
    rms = float(np.sqrt(np.mean(misfit**2)))
    rel = rms / abs(C) if C != 0 else math.inf
    return AsymptoticFit(C, rel, float(coef[1]) if linear else 0.0, len(pts))


def synthetic_points(rs, model) -> list[RatioPoint]:
    """Exact ``RatioPoint`` values from a model ``R(r)`` (for testing fits)."""
    return [RatioPoint(float(r), float(model(r)), float(model(r))) for r in rs]


def _fmt(x: float) -> str:
    return "nan" if not math.isfinite(x) else f"{x:.15g}"


def write_csv(points, fh) -> None:
    """Sweep CSV with 15 significant digits; missing values are ``nan``."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow([_fmt(v) for v in p.row()])
