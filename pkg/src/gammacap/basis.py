"""Basis functions analytic off a compact set and vanishing at infinity.

Three families are supported:

* :class:`SimplePole` ``1/(z-a)``
* :class:`MultiPole` ``(z-p)^(-order)``
* :class:`CornerPower` ``((z-a)/(z-b))^(-mu) * (z-b)^(-k)``, modelling the
  singular behaviour of the extremal functions at a boundary corner ``a``.
  The principal power is used, so the function is analytic off the segment
  ``[b, a]`` and the power factor tends to 1 at infinity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .geometry import Circle, CompactSet, Ellipse, GeometryError
from .quadrature import DomainError


@dataclass(frozen=True)
class SimplePole:
    a: complex

    def residue_at_infinity(self) -> complex:
        return 1.0 + 0j


@dataclass(frozen=True)
class MultiPole:
    p: complex
    order: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")

    def residue_at_infinity(self) -> complex:
        return 1.0 + 0j if self.order == 1 else 0j


@dataclass(frozen=True)
class CornerPower:
    a: complex  # corner on the boundary
    b: complex  # base point inside the set
    mu: float
    k: int = 1

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.a == self.b:
            raise ValueError("corner and base point coincide")

    def residue_at_infinity(self) -> complex:
        # (1 - (a-b)/(z-b))^(-mu) / (z-b)^k = 1/z^k + O(1/z^(k+1))
        return 1.0 + 0j if self.k == 1 else 0j


BasisFunction = Union[SimplePole, MultiPole, CornerPower]


def _on_cut(z: np.ndarray, b: complex, a: complex) -> np.ndarray:
    """Points of the segment ``[b, a]``, where ``(z-a)/(z-b)`` is real and <= 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (z - a) / (z - b)
    return (z == b) | (z == a) | ((w.real <= 0) & (np.abs(w.imag) <= 1e-15 * np.abs(w)))


def _eval_one(f, z: np.ndarray) -> np.ndarray:
    if isinstance(f, SimplePole):
        d = z - f.a
        if np.any(d == 0):
            raise DomainError(f"evaluation at the pole {f.a}")
        return 1.0 / d
    if isinstance(f, MultiPole):
        d = z - f.p
        if np.any(d == 0):
            raise DomainError(f"evaluation at the pole {f.p}")
        return d ** (-f.order)
    if isinstance(f, CornerPower):
        if np.any(_on_cut(z, f.b, f.a)):
            raise DomainError(f"evaluation on the branch cut [{f.b}, {f.a}]")
        w = (z - f.a) / (z - f.b)
        return np.exp(-f.mu * np.log(w)) * (z - f.b) ** (-f.k)
    raise TypeError(f"unknown basis function {f!r}")


def evaluate(f: BasisFunction, z):
    """Value of one basis function at ``z`` (scalar or array)."""
    z = np.asarray(z, complex)
    out = _eval_one(f, np.atleast_1d(z))
    return complex(out[0]) if z.ndim == 0 else out.reshape(z.shape)


def _corner_near(f: CornerPower, vertex: complex, dz: np.ndarray) -> np.ndarray:
    """``f(vertex + dz)`` for ``f.a == vertex`` with ``z - a`` taken as ``dz`` exactly."""
    w = dz / (vertex - f.b + dz)
    if np.any((w == 0) | ((w.real <= 0) & (np.abs(w.imag) <= 1e-15 * np.abs(w)))):
        raise DomainError(f"evaluation on the branch cut [{f.b}, {f.a}]")
    return np.exp(-f.mu * np.log(w)) * (vertex + dz - f.b) ** (-f.k)


def evaluate_many(functions: Sequence[BasisFunction], z, vertex: complex | None = None, dz=None) -> np.ndarray:
    """Matrix ``G[m, j] = g_j(z_m)`` for a 1-D array of points.

    When ``z = vertex + dz`` lies next to a corner ``vertex``, passing
    ``vertex`` and ``dz`` lets corner powers singular at that vertex use the
    exact offset instead of the rounded difference ``z - vertex``.
    """
    z = np.atleast_1d(np.asarray(z, complex))
    out = np.empty((z.size, len(functions)), dtype=complex)
    # group simple poles and multipoles for vectorized evaluation
    simple = [j for j, f in enumerate(functions) if isinstance(f, SimplePole)]
    if simple:
        poles = np.array([functions[j].a for j in simple])
        d = z[:, None] - poles[None, :]
        if np.any(d == 0):
            raise DomainError("evaluation at a pole")
        out[:, simple] = 1.0 / d
    multi = [j for j, f in enumerate(functions) if isinstance(f, MultiPole)]
    if multi:
        poles = np.array([functions[j].p for j in multi])
        orders = np.array([functions[j].order for j in multi])
        d = z[:, None] - poles[None, :]
        if np.any(d == 0):
            raise DomainError("evaluation at a pole")
        out[:, multi] = d ** (-orders[None, :])
    for j, f in enumerate(functions):
        if isinstance(f, CornerPower):
            if vertex is not None and f.a == vertex:
                out[:, j] = _corner_near(f, vertex, np.atleast_1d(np.asarray(dz, complex)))
            else:
                out[:, j] = _eval_one(f, z)
        elif not isinstance(f, (SimplePole, MultiPole)):
            raise TypeError(f"unknown basis function {f!r}")
    return out


def residue_at_infinity(f: BasisFunction) -> complex:
    """``lim z f(z)`` as ``z -> infinity``."""
    return f.residue_at_infinity()


def singular_points(f: BasisFunction) -> list[complex]:
    if isinstance(f, SimplePole):
        return [f.a]
    if isinstance(f, MultiPole):
        return [f.p]
    return [f.b]


@dataclass(frozen=True)
class BasisSet:
    functions: tuple
    stage: int = 0

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if len(set(self.functions)) != len(self.functions):
            raise ValueError("basis functions must be pairwise distinct")

    def __len__(self):
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    def extends(self, other: "BasisSet") -> bool:
        """True when ``other`` is a prefix of this set."""
        n = len(other.functions)
        return self.functions[:n] == other.functions


# --------------------------------------------------------------------------
# Layouts
# --------------------------------------------------------------------------


def ring_radii(radius: float, rings: int) -> list[float]:
    """Radii ``i * radius / (rings + 1)`` for ``i = 1..rings``, strictly inside."""
    return [i * radius / (rings + 1) for i in range(1, rings + 1)]


def disk_pole_layout(center: complex, radius: float, rings: int) -> list[SimplePole]:
    """Center pole plus four poles (``c +- s``, ``c +- i s``) on each ring."""
    if not radius > 0:
        raise ValueError("radius must be > 0")
    if rings < 0:
        raise ValueError("rings must be >= 0")
    c = complex(center)
    poles = [SimplePole(c)]
    for s in ring_radii(radius, rings):
        poles += [SimplePole(c + s), SimplePole(c - s), SimplePole(c + 1j * s), SimplePole(c - 1j * s)]
    return poles


def ellipse_pole_layout(ellipse: Ellipse, rings: int) -> list[SimplePole]:
    """Center pole plus the four vertices of each scaled copy of the ellipse."""
    c = ellipse.center
    rot = complex(math.cos(ellipse.rot), math.sin(ellipse.rot))
    poles = [SimplePole(c)]
    for i in range(1, rings + 1):
        s = i / (rings + 1)
        u, v = rot * s * ellipse.a, rot * 1j * s * ellipse.b
        poles += [SimplePole(c + u), SimplePole(c - u), SimplePole(c + v), SimplePole(c - v)]
    return poles


def pole_basis(compact: CompactSet, rings: int) -> BasisSet:
    """Simple-pole layout on every circle and ellipse; other components get
    multipoles at their anchor up to order ``rings + 1``."""
    funcs: list = []
    for comp, anchor in zip(compact.components, compact.anchors):
        if isinstance(comp, Circle):
            funcs += disk_pole_layout(comp.center, comp.radius, rings)
        elif isinstance(comp, Ellipse):
            funcs += ellipse_pole_layout(comp, rings)
        else:
            funcs += [MultiPole(anchor, k) for k in range(1, rings + 2)]
    return BasisSet(tuple(funcs), rings)


def multipole_basis(compact: CompactSet, degree: int, points: Sequence[complex] | None = None) -> BasisSet:
    """``(z - p)^(-k)`` for ``k = 1..degree`` and ``p`` in ``points``
    (default: component anchors), ordered by ``k`` so stages are nested."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    pts = list(compact.anchors if points is None else points)
    return BasisSet(tuple(MultiPole(complex(p), k) for k in range(1, degree + 1) for p in pts), degree)


def corner_exponent(interior_angle: float) -> float:
    """Exponent ``mu`` of the corner singularity ``(z-a)^(-mu)``.

    Near a corner of interior angle ``alpha`` the exterior conformal map
    behaves like ``(z-a)^(pi/(2pi-alpha))``; the extremal functions behave
    like the square root of its derivative.  ``alpha = pi/2`` gives 1/6.
    """
    return 0.5 * (1.0 - math.pi / (2 * math.pi - interior_angle))


def corner_basis(compact: CompactSet, degree: int, segment_samples: int = 200) -> BasisSet:
    """Multipoles at each anchor plus corner-adapted powers, ``k = 1..degree``.

    Functions are ordered by ``k`` so that degree ``n`` is a prefix of
    degree ``n + 1``.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if not compact.has_corners():
        raise GeometryError("corner basis requires at least one corner")
    corner_data = []
    for comp, anchor in zip(compact.components, compact.anchors):
        for corner in getattr(comp, "corners", ()):
            s = np.linspace(0.0, 1.0, segment_samples, endpoint=False)
            pts = anchor + s * (corner.vertex - anchor)
            if not bool(np.all(comp.contains(pts))):
                raise GeometryError(f"branch segment [{anchor}, {corner.vertex}] leaves the set")
            corner_data.append((corner.vertex, anchor, corner_exponent(corner.angle)))
    funcs = []
    for k in range(1, degree + 1):
        funcs += [MultiPole(anchor, k) for anchor in compact.anchors]
        funcs += [CornerPower(a, b, mu, k) for a, b, mu in corner_data]
    return BasisSet(tuple(funcs), degree)


# --------------------------------------------------------------------------
# JSON dumps
# --------------------------------------------------------------------------


def _pt(z):
    z = complex(z)
    return [z.real, z.imag]


def basis_to_json(functions: Sequence[BasisFunction]) -> list[dict]:
    out = []
    for f in functions:
        if isinstance(f, SimplePole):
            out.append({"type": "simple_pole", "a": _pt(f.a)})
        elif isinstance(f, MultiPole):
            out.append({"type": "multipole", "p": _pt(f.p), "order": f.order})
        else:
            out.append({"type": "corner_power", "a": _pt(f.a), "b": _pt(f.b), "mu": f.mu, "k": f.k})
    return out


def basis_from_json(items: Sequence[dict]) -> list[BasisFunction]:
    out = []
    for d in items:
        kind = d["type"]
        if kind == "simple_pole":
            out.append(SimplePole(complex(*d["a"])))
        elif kind == "multipole":
            out.append(MultiPole(complex(*d["p"]), int(d["order"])))
        elif kind == "corner_power":
            out.append(CornerPower(complex(*d["a"]), complex(*d["b"]), float(d["mu"]), int(d["k"])))
        else:
            raise ValueError(f"unknown basis function type {kind!r}")
    return out
