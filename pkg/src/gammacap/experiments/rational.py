"""Numerical verification of rational Ahlfors functions.

A rational map ``R(z) = sum a_j / (z - p_j)`` with all critical values in the
unit disk has an ``n``-connected ``R^{-1}(D)``.  It is a rational Ahlfors
function exactly when the capacity of ``E = {|R| >= 1}`` equals
``sum a_j``.  We trace ``dE`` by solving ``R(z) = e^{i theta}``, bracket
``gamma(E)`` with the quadratic-minimization solver and compare.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from ..capacity import CapacityBounds, SolverConfig, compute_bounds
from ..geometry import CompactSet, _winding_number
from ..quadrature import QuadratureConfig, adaptive_simpson

TWO_PI = 2.0 * math.pi


class TraceError(RuntimeError):
    """Root continuation failed; ``needs_refinement`` asks for more samples."""

    def __init__(self, message, needs_refinement: bool = False):
        super().__init__(message)
        self.needs_refinement = needs_refinement


class DisconnectedError(ValueError):
    """Some critical value lies outside the open unit disk."""

    def __init__(self, message, critical_values=()):
        super().__init__(message)
        self.critical_values = list(critical_values)


@dataclass(frozen=True)
class RationalMap:
    residues: tuple
    poles: tuple

    def __post_init__(self):
        res = tuple(complex(a) for a in self.residues)
        poles = tuple(complex(p) for p in self.poles)
        if not res or len(res) != len(poles):
            raise ValueError("need n >= 1 residues and the same number of poles")
        if any(a == 0 for a in res):
            raise ValueError("residues must be nonzero")
        if len(set(poles)) != len(poles):
            raise ValueError("poles must be pairwise distinct")
        object.__setattr__(self, "residues", res)
        object.__setattr__(self, "poles", poles)

    @property
    def degree(self) -> int:
        return len(self.poles)

    @property
    def sum_residues(self) -> complex:
        return complex(sum(self.residues))

    def __call__(self, z):
        z = np.asarray(z, complex)
        a = np.asarray(self.residues)
        p = np.asarray(self.poles)
        return (a / (z[..., None] - p)).sum(axis=-1)

    def derivative(self, z):
        z = np.asarray(z, complex)
        a = np.asarray(self.residues)
        p = np.asarray(self.poles)
        return -(a / (z[..., None] - p) ** 2).sum(axis=-1)

    def numerator_denominator(self) -> tuple[Polynomial, Polynomial]:
        """``R = P / Q`` with ``Q`` monic of degree ``n``."""
        Q = Polynomial.fromroots(self.poles)
        P = Polynomial([0j])
        for j, a in enumerate(self.residues):
            others = [p for k, p in enumerate(self.poles) if k != j]
            P = P + a * Polynomial.fromroots(others) if others else P + a
        return P, Q

    def to_dict(self) -> dict:
        return {"residues": [[a.real, a.imag] for a in self.residues],
                "poles": [[p.real, p.imag] for p in self.poles]}


def _parse_complex(v, where):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"{where}: expected a number or [re, im]")


def rational_map_from_dict(data: dict) -> RationalMap:
    if not isinstance(data, dict) or "residues" not in data or "poles" not in data:
        raise ValueError("top level: expected an object with 'residues' and 'poles'")
    res = [_parse_complex(v, f"residues[{i}]") for i, v in enumerate(data["residues"])]
    poles = [_parse_complex(v, f"poles[{i}]") for i, v in enumerate(data["poles"])]
    return RationalMap(tuple(res), tuple(poles))


def load_rational_map(path) -> RationalMap:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return rational_map_from_dict(data)


# --------------------------------------------------------------------------
# Families with known answers
# --------------------------------------------------------------------------


def rotation_family_bound(n: int) -> float:
    """Largest admissible ``a`` for ``a z^(n-1) / (z^n - 1)``."""
    return n * (n - 1) ** ((1 - n) / n)


def symmetric_family(kind: str, **params) -> RationalMap:
    """Rational maps that are known to be Ahlfors functions.

    ``kind="reflection"``: ``residues`` (positive) and ``poles`` (real, distinct).
    ``kind="rotation"``: ``n >= 2`` and ``0 < a < n (n-1)^((1-n)/n)``, giving
    ``a z^(n-1)/(z^n - 1)``, i.e. residue ``a/n`` at each ``n``-th root of unity.
    """
    if kind == "reflection":
        res = [complex(a) for a in params["residues"]]
        poles = [complex(p) for p in params["poles"]]
        if any(p.imag != 0 for p in poles):
            raise ValueError("reflection family: poles must be real")
        if any(a.imag != 0 or a.real <= 0 for a in res):
            raise ValueError("reflection family: residues must be positive")
        return RationalMap(tuple(res), tuple(poles))
    if kind == "rotation":
        n, a = int(params["n"]), float(params["a"])
        if n < 2:
            raise ValueError("rotation family: n must be >= 2")
        if not 0 < a < rotation_family_bound(n):
            raise ValueError(f"rotation family: need 0 < a < {rotation_family_bound(n):.6g}")
        poles = tuple(complex(math.cos(TWO_PI * k / n), math.sin(TWO_PI * k / n)) for k in range(n))
        return RationalMap(tuple([a / n] * n), poles)
    raise ValueError(f"unknown family {kind!r}")


# --------------------------------------------------------------------------
# Critical values
# --------------------------------------------------------------------------


def _polish(poly: Polynomial, roots: np.ndarray, iterations: int = 4) -> np.ndarray:
    d = poly.deriv()
    z = roots.astype(complex)
    for _ in range(iterations):
        dv = d(z)
        step = np.where(dv != 0, poly(z) / np.where(dv != 0, dv, 1), 0)
        z = z - step
    return z


def critical_values_in_disk(R: RationalMap) -> tuple[bool, list[complex]]:
    """Whether every finite critical value of ``R`` lies in the open unit disk.

    Critical points are the roots of ``P'Q - PQ'`` (degree ``<= 2n - 2``).
    This is equivalent to ``R^{-1}(D)`` being ``n``-connected.
    """
    P, Q = R.numerator_denominator()
    N = P.deriv() * Q - P * Q.deriv()
    N = Polynomial(np.trim_zeros(N.coef, "b") if np.any(N.coef) else [0])
    if N.degree() < 1:
        return True, []
    crit = _polish(N, N.roots())
    values = [complex(v) for v in R(crit)]
    return all(abs(v) < 1 for v in values), values


# --------------------------------------------------------------------------
# Boundary tracing
# --------------------------------------------------------------------------


def _initial_order(roots: np.ndarray, centroid: complex) -> np.ndarray:
    d = roots - centroid
    return np.lexsort((np.abs(d), np.angle(d)))


def _newton_level(R: RationalMap, z: np.ndarray, w: np.ndarray, iterations: int = 30) -> np.ndarray:
    z = z.astype(complex).copy()
    for _ in range(iterations):
        step = (R(z) - w) / R.derivative(z)
        z = z - step
        if np.all(np.abs(step) <= 1e-15 * (1 + np.abs(z))):
            break
    return z


def trace_boundary(R: RationalMap, samples: int = 1024) -> list[np.ndarray]:
    """Trace ``{|R| = 1}`` as ``n`` closed strands.

    For ``theta_k = -2 pi k / samples`` all ``n`` roots of
    ``P(z) - e^{i theta} Q(z)`` are found and assigned to strands by nearest
    neighbour continuation.  Each returned array has ``samples + 1`` points,
    the last repeating the first up to rounding.
    """
    ok, values = critical_values_in_disk(R)
    if not ok:
        raise DisconnectedError("a critical value lies outside the unit disk", values)
    if samples < 8:
        raise ValueError("samples must be >= 8")
    P, Q = R.numerator_denominator()
    n = R.degree
    centroid = complex(np.mean(R.poles))
    theta = -TWO_PI * np.arange(samples + 1) / samples
    strands = np.empty((n, samples + 1), complex)
    for k, th in enumerate(theta):
        w = complex(math.cos(th), math.sin(th))
        roots = (P - w * Q).roots()
        roots = _newton_level(R, roots, np.full(n, w))
        if k == 0:
            strands[:, 0] = roots[_initial_order(roots, centroid)]
            continue
        prev = strands[:, k - 1]
        dist = np.abs(prev[:, None] - roots[None, :])
        choice = dist.argmin(axis=1)
        if len(set(choice.tolist())) != n:
            raise TraceError(f"strand assignment ambiguous at sample {k}", needs_refinement=True)
        if n > 1:
            ranked = np.sort(dist, axis=1)
            if np.any(ranked[:, 0] >= 0.5 * ranked[:, 1]):
                raise TraceError(f"strand assignment ambiguous at sample {k}", needs_refinement=True)
        strands[:, k] = roots[choice]
    gaps = np.abs(strands[:, -1] - strands[:, 0])
    if np.any(gaps > 1e-8):
        raise TraceError(f"strands do not close (gap {gaps.max():.2e})", needs_refinement=True)
    strands[:, -1] = strands[:, 0]
    return [strands[j] for j in range(n)]


@dataclass(frozen=True, eq=False)
class LevelCurve:
    """One closed component of ``{|R| = 1}`` as a boundary component.

    ``z(t)`` solves ``R(z) = e^{-2 pi i t}``; it is evaluated by Newton's
    method started from the traced samples, so ``|dz/dt| = 2 pi / |R'(z)|``.
    """

    rmap: RationalMap
    samples: np.ndarray
    pole: complex
    separation: float = field(default=math.inf)

    def _interp(self, t):
        m = self.samples.size - 1
        u = np.mod(np.asarray(t, float), 1.0) * m
        i = np.minimum(np.floor(u).astype(int), m - 1)
        f = u - i
        return (1 - f) * self.samples[i] + f * self.samples[i + 1]

    def point(self, t):
        t = np.asarray(t, float)
        th = -TWO_PI * t
        w = np.exp(1j * th)
        z0 = self._interp(t)
        z = _newton_level(self.rmap, np.atleast_1d(z0), np.atleast_1d(w))
        if np.any(np.abs(z - np.atleast_1d(z0)) > 0.5 * self.separation):
            raise TraceError("Newton refinement jumped to another strand", needs_refinement=True)
        return z.reshape(t.shape)

    def derivative(self, t):
        t = np.asarray(t, float)
        z = self.point(t)
        w = np.exp(-1j * TWO_PI * t)
        return -TWO_PI * 1j * w / self.rmap.derivative(z)

    def length(self) -> float:
        value, _ = adaptive_simpson(lambda t: np.abs(self.derivative(t)), 0.0, 1.0, tol=1e-12)
        return float(value)

    def breakpoints(self) -> list[float]:
        return [0.0]

    def corner_params(self) -> list[float]:
        return []

    @property
    def corners(self) -> tuple:
        return ()

    def default_anchor(self) -> complex:
        return self.pole

    def contains(self, z) -> np.ndarray:
        poly = self.samples[:-1]
        z = np.atleast_1d(np.asarray(z, complex))
        w = np.array([_winding_number(poly, zi) for zi in z.ravel()]).reshape(z.shape)
        return np.abs(w) > 0.5

    def bounding_radius(self) -> float:
        return float(np.max(np.abs(self.samples - self.pole)))


def level_set(R: RationalMap, samples: int = 1024, max_samples: int = 65536) -> CompactSet:
    """``E = {|R| >= 1}`` as a :class:`CompactSet` of traced level curves.

    The sample count is doubled while strand assignment is ambiguous.
    """
    while True:
        try:
            strands = trace_boundary(R, samples)
            break
        except TraceError as exc:
            if not exc.needs_refinement or samples * 2 > max_samples:
                raise
            samples *= 2
    n = len(strands)
    comps = []
    for j, s in enumerate(strands):
        inside = [p for p in R.poles if abs(_winding_number(s[:-1], p)) > 0.5]
        if len(inside) != 1:
            raise TraceError(f"strand {j} encloses {len(inside)} poles, expected 1")
        others = [strands[k] for k in range(n) if k != j]
        sep = min((np.abs(s[:, None] - o[None, :]).min() for o in others), default=math.inf)
        comps.append(LevelCurve(R, s, inside[0], float(sep)))
    return CompactSet(tuple(comps), tuple(c.pole for c in comps))


# --------------------------------------------------------------------------
# Verdict
# --------------------------------------------------------------------------

AHLFORS = "Ahlfors"
NOT_AHLFORS = "NotAhlfors"
INCONCLUSIVE = "Inconclusive"


@dataclass
class AhlforsVerdict:
    verdict: str
    sum_residues: complex
    lower: float
    upper: float
    stages: list = field(default_factory=list)

    def to_dict(self) -> dict:
        s = self.sum_residues
        return {
            "verdict": self.verdict,
            "sum_residues": s.real if s.imag == 0 else [s.real, s.imag],
            "lower": self.lower,
            "upper": self.upper,
            "stages": [{"degree": b.stage, "lower": b.stage_lower, "upper": b.stage_upper, "n_basis": b.n_basis}
                       for b in self.stages],
        }


def decide(total: complex, lower: float, upper: float, tau: float | None = None, rel_width: float = 1e-5) -> str:
    """Compare ``|sum a_j|`` with a capacity bracket.

    ``NotAhlfors`` needs the bracket to exclude the residue sum by more than
    ``tau`` (default: the bracket width).  ``Ahlfors`` is only reported when
    the sum lies within ``tau`` of the bracket and the bracket is narrower than
    ``rel_width * |sum|``; numerically this is consistency, not proof.
    """
    s = abs(total)
    width = upper - lower
    tau = width if tau is None else tau
    if lower > s + tau or upper < s - tau:
        return NOT_AHLFORS
    if lower - tau <= s <= upper + tau and width < rel_width * s:
        return AHLFORS
    return INCONCLUSIVE


def verify_ahlfors(R: RationalMap, degree: int = 3, solver: SolverConfig | None = None,
                   samples: int = 1024, tau: float | None = None) -> AhlforsVerdict:
    """Bracket ``gamma({|R| >= 1})`` with ``(z - p_j)^(-k)``, ``k <= degree``."""
    ok, values = critical_values_in_disk(R)
    if not ok:
        raise DisconnectedError("a critical value lies outside the unit disk", values)
    E = level_set(R, samples)
    if solver is None:
        solver = SolverConfig(basis="multipole", first_stage=1, max_stage=degree, gap_target=1e-15,
                              quadrature=QuadratureConfig(abs_tol=1e-9))
    stages: list[CapacityBounds] = compute_bounds(E, solver)
    last = stages[-1]
    return AhlforsVerdict(decide(R.sum_residues, last.lower, last.upper, tau), R.sum_residues,
                          last.lower, last.upper, stages)
