"""Certified brackets for analytic capacity by dual quadratic minimization.

For a basis ``g_1..g_N`` of functions analytic off ``E`` and vanishing at
infinity, with boundary inner products

    A[i, j] = int g_i conj(g_j) |dz|,   M[j] = int g_j |dz|,
    beta[j] = lim z g_j(z),             L = int |dz|,

the coefficient vector ``y`` of ``g = sum conj(y_j) g_j`` gives

    upper = (L + 2 Re(y^H M) + y^H A y) / (2 pi)      minimized at A y = -M
    lower = 2 Re(y^H beta) - y^H A y / (2 pi)         maximized at A y = 2 pi beta

so ``upper = (L - M^H A^-1 M) / (2 pi)`` and ``lower = 2 pi beta^H A^-1 beta``.
Every coefficient vector gives a valid bound, and enlarging the span
tightens both.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lapack

from .basis import (BasisSet, SimplePole, corner_basis, evaluate_many, multipole_basis, pole_basis,
                    residue_at_infinity)
from .geometry import Circle, CompactSet
from .quadrature import QuadratureConfig, QuadratureError, adaptive_simpson, circle_moment, circle_pair_integral

TWO_PI = 2.0 * math.pi


class CapacityError(RuntimeError):
    """Assembly or solve failure; ``last`` holds the stages completed so far."""

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = list(last or [])


class IllConditionedError(CapacityError):
    def __init__(self, message, condition=float("inf"), last=None):
        super().__init__(message, last)
        self.condition = condition


def worker_count() -> int:
    """Worker threads for assembly and sweeps (``GAMMACAP_THREADS``, default 1)."""
    try:
        return max(1, int(os.environ.get("GAMMACAP_THREADS", "1")))
    except ValueError:
        return 1


# --------------------------------------------------------------------------
# Linear algebra
# --------------------------------------------------------------------------


def hermitian_solve(A, rhs, equilibrate: bool = True):
    """Solve ``A x = rhs`` for Hermitian positive definite ``A``.

    Uses a Cholesky factorization of the diagonally equilibrated matrix
    ``D A D`` (``D = diag(A)^(-1/2)``) and LAPACK's 1-norm reciprocal
    condition estimator.  Returns ``(x, condition_estimate)`` where the
    estimate refers to the matrix actually factored.
    """
    A = np.asarray(A, complex)
    b = np.asarray(rhs, complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    n = A.shape[0]
    if n == 0:
        return np.zeros(b.shape, complex), 1.0
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise np.linalg.LinAlgError("non-finite entries")
    diag = A.diagonal().real
    if equilibrate:
        if np.any(diag <= 0):
            raise np.linalg.LinAlgError("matrix is not positive definite (nonpositive diagonal)")
        d = 1.0 / np.sqrt(diag)
    else:
        d = np.ones(n)
    As = d[:, None] * A * d[None, :]
    As = 0.5 * (As + As.conj().T)
    anorm = np.abs(As).sum(axis=0).max()
    c, info = lapack.zpotrf(As, lower=1, clean=1)
    if info != 0:
        raise np.linalg.LinAlgError(f"Cholesky breakdown at column {info} (matrix numerically singular)")
    rcond, info = lapack.zpocon(c, anorm, uplo="L")
    cond = math.inf if rcond == 0 else 1.0 / rcond
    bs = d[:, None] * b.reshape(n, -1)
    x, info = lapack.zpotrs(c, bs, lower=1)
    if info != 0:
        raise np.linalg.LinAlgError("triangular solve failed")
    return (d[:, None] * x).reshape(b.shape), cond


# --------------------------------------------------------------------------
# Gram assembly
# --------------------------------------------------------------------------


@dataclass
class GramSystem:
    A: np.ndarray
    M: np.ndarray
    beta: np.ndarray
    L: float

    @property
    def size(self) -> int:
        return self.M.size


_GRADE_POWER = 6


def _panels(component):
    """Quadrature pieces ``(t_start, t_end, graded)``.

    A graded piece starts at a corner; the substitution
    ``t = t_start + (t_end - t_start) s^6`` removes the weak corner
    singularities of corner-adapted basis functions.
    """
    breaks = sorted(set(component.breakpoints()) | set(component.corner_params()))
    corners = set(component.corner_params())
    knots = breaks + [breaks[0] + 1.0]
    pieces = []
    for t0, t1 in zip(knots[:-1], knots[1:]):
        c0 = t0 in corners
        c1 = (t1 % 1.0) in corners or t1 in corners
        if c0 and c1:
            mid = 0.5 * (t0 + t1)
            pieces += [(t0, mid, True), (t1, mid, True)]
        elif c0:
            pieces.append((t0, t1, True))
        elif c1:
            pieces.append((t1, t0, True))
        else:
            pieces.append((t0, t1, False))
    return pieces


def _basis_scales(component, functions, per_piece: int = 32) -> np.ndarray:
    pts = []
    for t0, t1, _ in _panels(component):
        s = (np.arange(per_piece) + 0.5) / per_piece
        pts.append(component.point(t0 + (t1 - t0) * s))
    G = evaluate_many(functions, np.concatenate(pts))
    return np.maximum(np.abs(G).max(axis=0), 1e-300)


def _component_integrals(component, functions, cfg: QuadratureConfig):
    """``(A, M, L)`` contributions of one component by adaptive Simpson."""
    n = len(functions)
    iu = np.triu_indices(n)
    scales = _basis_scales(component, functions) if n else np.zeros(0)
    tol = cfg.abs_tol * np.concatenate([scales[iu[0]] * scales[iu[1]], scales, [1.0]])

    def integrand(t, vertex=None, dz=None):
        z = component.point(t) if dz is None else vertex + dz
        speed = np.abs(component.derivative(t))
        G = evaluate_many(functions, z, vertex, dz)
        prod = G[:, iu[0]] * np.conj(G[:, iu[1]])
        return np.concatenate([prod, G, np.ones((t.size, 1))], axis=1) * speed[:, None]

    def graded(t_start, t_end):
        span = t_end - t_start
        here = complex(component.point(t_start % 1.0))
        vertex = min((k.vertex for k in component.corners), key=lambda v: abs(v - here))

        def f(s):
            w = _GRADE_POWER * s ** (_GRADE_POWER - 1) * abs(span)
            delta = span * s ** _GRADE_POWER
            out = np.zeros((s.size, iu[0].size + n + 1), complex)
            live = delta != 0  # the corner node itself has zero weight
            if np.any(live):
                dz = component.corner_offset(t_start % 1.0, delta[live])
                out[live] = integrand(t_start + delta[live], vertex, dz) * w[live, None]
            return out
        return f

    total = np.zeros(iu[0].size + n + 1, complex)
    for t0, t1, is_graded in _panels(component):
        if is_graded:
            value, _ = adaptive_simpson(graded(t0, t1), 0.0, 1.0, cfg, tol=tol)
        else:
            value, _ = adaptive_simpson(integrand, t0, t1, cfg, tol=tol)
        total += value
    A = np.zeros((n, n), complex)
    A[iu] = total[:iu[0].size]
    A = A + np.triu(A, 1).conj().T
    M = total[iu[0].size:iu[0].size + n]
    return A, M, float(total[-1].real)


def _circle_closed_form(circle: Circle, functions):
    poles = np.array([f.a for f in functions], complex)
    A = circle_pair_integral(poles[:, None], poles[None, :], circle.center, circle.radius)
    M = circle_moment(poles, circle.center, circle.radius)
    return np.atleast_2d(A), np.atleast_1d(M), circle.length()


def assemble(compact: CompactSet, basis, cfg: QuadratureConfig | None = None, workers: int | None = None) -> GramSystem:
    """Gram matrix, moments, residues at infinity and total arclength.

    Circle components with an all-simple-pole basis use closed forms; every
    other component is integrated by adaptive Simpson.
    """
    cfg = cfg or QuadratureConfig()
    functions = tuple(basis)
    n = len(functions)
    all_simple = all(isinstance(f, SimplePole) for f in functions)

    def contribution(idx):
        comp = compact.components[idx]
        try:
            if isinstance(comp, Circle) and all_simple:
                if n == 0:
                    return np.zeros((0, 0), complex), np.zeros(0, complex), comp.length()
                return _circle_closed_form(comp, functions)
            return _component_integrals(comp, functions, cfg)
        except QuadratureError as exc:
            raise CapacityError(f"quadrature failed on components[{idx}]: {exc}") from exc

    workers = worker_count() if workers is None else workers
    indices = range(len(compact.components))
    if workers > 1 and len(compact.components) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(contribution, indices))
    else:
        parts = [contribution(i) for i in indices]

    A = np.zeros((n, n), complex)
    M = np.zeros(n, complex)
    L = 0.0
    for Ak, Mk, Lk in parts:
        A += Ak
        M += Mk
        L += Lk
    A = 0.5 * (A + A.conj().T)
    beta = np.array([residue_at_infinity(f) for f in functions], complex)
    return GramSystem(A, M, beta, L)


# --------------------------------------------------------------------------
# Bounds
# --------------------------------------------------------------------------


def _solve(sys: GramSystem, rhs, condition_limit: float):
    try:
        x, cond = hermitian_solve(sys.A, rhs)
    except np.linalg.LinAlgError as exc:
        raise IllConditionedError(f"Gram matrix factorization failed: {exc}") from exc
    if cond > condition_limit:
        raise IllConditionedError(f"Gram matrix condition estimate {cond:.3e} exceeds {condition_limit:.1e}", cond)
    return x, cond


def upper_objective(sys: GramSystem, y) -> float:
    """``(1/2pi) int |1 + g|^2 |dz|`` for ``g = sum conj(y_j) g_j``; an upper bound for any ``y``."""
    y = np.asarray(y, complex)
    q = sys.L + 2 * np.real(np.vdot(y, sys.M)) + np.real(np.vdot(y, sys.A @ y))
    return float(q / TWO_PI)


def lower_objective(sys: GramSystem, y) -> float:
    """``2 Re h'(inf) - (1/2pi) int |h|^2 |dz|`` for ``h = sum conj(y_j) g_j``; a lower bound for any ``y``."""
    y = np.asarray(y, complex)
    return float(2 * np.real(np.vdot(y, sys.beta)) - np.real(np.vdot(y, sys.A @ y)) / TWO_PI)


def upper_bound(sys: GramSystem, condition_limit: float = 1e15) -> float:
    """``min (1/2pi) int |1 + g|^2 |dz|`` over the span of the basis."""
    if sys.size == 0:
        return sys.L / TWO_PI
    y, _ = _solve(sys, -sys.M, condition_limit)
    return upper_objective(sys, y)


def lower_bound(sys: GramSystem, condition_limit: float = 1e15) -> float:
    """``max 2 Re h'(inf) - (1/2pi) int |h|^2 |dz|`` over the span, clamped at 0."""
    if sys.size == 0:
        return 0.0
    y, _ = _solve(sys, TWO_PI * sys.beta, condition_limit)
    return max(0.0, lower_objective(sys, y))


def solve_bounds(sys: GramSystem, condition_limit: float = 1e15) -> tuple[float, float, float]:
    """``(lower, upper, condition_estimate)`` from one factorization.

    Both bounds are the objective values at the computed minimizer and
    maximizer, so they remain valid bounds even if the solve is inexact.
    """
    if sys.size == 0:
        return 0.0, sys.L / TWO_PI, 1.0
    Y, cond = _solve(sys, np.column_stack([-sys.M, TWO_PI * sys.beta]), condition_limit)
    return max(0.0, lower_objective(sys, Y[:, 1])), upper_objective(sys, Y[:, 0]), cond


@dataclass
class CapacityBounds:
    """Bracket after one refinement stage.

    ``lower``/``upper`` are the best certified bounds over all stages so far;
    ``stage_lower``/``stage_upper`` come from this stage's basis alone.
    """

    lower: float
    upper: float
    stage: int
    condition: float
    quad_tol: float
    elapsed: float
    n_basis: int
    stage_lower: float = math.nan
    stage_upper: float = math.nan

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack


@dataclass
class SolverConfig:
    """Refinement schedule and tolerances.

    ``basis`` is one of ``"auto"``, ``"poles"`` (stage = rings per disk or
    ellipse), ``"corner"`` (stage = degree), ``"multipole"`` (stage = degree
    of ``(z-p)^-k`` at the component anchors or at ``points``).
    """

    basis: str = "auto"
    first_stage: int | None = None
    max_stage: int = 4
    gap_target: float = 1e-10
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    condition_limit: float = 1e15
    points: tuple | None = None

    def __post_init__(self):
        if not self.gap_target > 0:
            raise ValueError("gap_target must be > 0")
        if not self.condition_limit > 1:
            raise ValueError("condition_limit must be > 1")
        if self.basis not in ("auto", "poles", "corner", "multipole"):
            raise ValueError(f"unknown basis kind {self.basis!r}")

    def resolved_basis(self, compact: CompactSet) -> str:
        if self.basis != "auto":
            return self.basis
        return "corner" if compact.has_corners() else "poles"

    def start(self, compact: CompactSet) -> int:
        if self.first_stage is not None:
            return self.first_stage
        return 0 if self.resolved_basis(compact) == "poles" else 1


def basis_for_stage(compact: CompactSet, cfg: SolverConfig, stage: int) -> BasisSet:
    kind = cfg.resolved_basis(compact)
    if kind == "poles":
        return pole_basis(compact, stage)
    if kind == "corner":
        return corner_basis(compact, stage)
    return multipole_basis(compact, stage, cfg.points)


def compute_bounds(compact: CompactSet, cfg: SolverConfig | None = None) -> list[CapacityBounds]:
    """Run the refinement schedule, one :class:`CapacityBounds` per stage.

    Stops when the certified gap reaches ``gap_target``, at ``max_stage``, or
    when the Gram matrix becomes too ill-conditioned (the stages already
    computed are returned).
    """
    cfg = cfg or SolverConfig()
    if cfg.start(compact) > cfg.max_stage:
        raise ValueError(f"first stage {cfg.start(compact)} exceeds max_stage {cfg.max_stage}")
    results: list[CapacityBounds] = []
    best_lo, best_up = 0.0, math.inf
    for stage in range(cfg.start(compact), cfg.max_stage + 1):
        t0 = time.perf_counter()
        try:
            basis = basis_for_stage(compact, cfg, stage)
            sys = assemble(compact, basis, cfg.quadrature)
            lo, up, cond = solve_bounds(sys, cfg.condition_limit)
        except IllConditionedError as exc:
            if results:
                break
            exc.last = results
            raise
        except CapacityError as exc:
            exc.last = results
            raise
        best_lo, best_up = max(best_lo, lo), min(best_up, up)
        results.append(CapacityBounds(best_lo, best_up, stage, cond, cfg.quadrature.abs_tol,
                                      time.perf_counter() - t0, len(basis), lo, up))
        if best_up - best_lo <= cfg.gap_target:
            break
    return results


def capacity_bracket(compact: CompactSet, cfg: SolverConfig | None = None) -> CapacityBounds:
    """Final bracket of :func:`compute_bounds`."""
    return compute_bounds(compact, cfg)[-1]
