"""Compact sets bounded by finitely many disjoint Jordan curves.

Points in the plane are plain Python ``complex`` numbers.  Every boundary
component is parametrized over ``t in [0, 1)`` with positive orientation
(the enclosed region lies to the left), and the parametrization is periodic
with period 1.

Components implement a small common protocol used by the quadrature and
capacity code:

* ``point(t)`` / ``derivative(t)``: vectorized ``z(t)`` and ``dz/dt``
* ``length()``: total arclength
* ``breakpoints()``: parameters that must be quadrature panel boundaries
* ``corner_params()``: the subset of breakpoints that are corners
* ``contains(z)``: strict interior test
* ``default_anchor()``: an interior point used for pole placement
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    """Invalid geometric input (bad radii, open curves, schema errors)."""


def _as_complex(value, where: str = "point") -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise GeometryError(f"{where}: expected [re, im], got {value!r}")
        value = complex(float(value[0]), float(value[1]))
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise GeometryError(f"{where}: non-finite coordinate {value!r}")
    return z


def _winding_number(poly: np.ndarray, z: complex) -> float:
    """Winding number of a closed polygon (last vertex joined to first)."""
    d = poly - z
    if np.any(np.abs(d) == 0):
        return 0.0
    ratios = np.roll(d, -1) / d
    return float(np.sum(np.angle(ratios)) / TWO_PI)


# --------------------------------------------------------------------------
# Smooth components
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_complex(self.center, "circle.center"))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise GeometryError(f"circle.radius: must be > 0, got {self.radius!r}")

    def point(self, t):
        return self.center + self.radius * np.exp(1j * TWO_PI * np.asarray(t, float))

    def derivative(self, t):
        return 1j * TWO_PI * self.radius * np.exp(1j * TWO_PI * np.asarray(t, float))

    def length(self) -> float:
        return TWO_PI * self.radius

    def breakpoints(self) -> list[float]:
        return [0.0]

    def corner_params(self) -> list[float]:
        return []

    @property
    def corners(self) -> tuple:
        return ()

    def default_anchor(self) -> complex:
        return self.center

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z) - self.center) < self.radius

    def bounding_radius(self) -> float:
        return self.radius


@dataclass(frozen=True)
class Ellipse:
    """Ellipse ``center + e^{i rot} (a cos 2pi t + i b sin 2pi t)``.

    The parametrization is the trigonometric one, not arclength-uniform.
    """

    center: complex
    a: float
    b: float
    rot: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", _as_complex(self.center, "ellipse.center"))
        for name in ("a", "b"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise GeometryError(f"ellipse.{name}: must be > 0, got {v!r}")

    def point(self, t):
        th = TWO_PI * np.asarray(t, float)
        return self.center + np.exp(1j * self.rot) * (self.a * np.cos(th) + 1j * self.b * np.sin(th))

    def derivative(self, t):
        th = TWO_PI * np.asarray(t, float)
        return TWO_PI * np.exp(1j * self.rot) * (-self.a * np.sin(th) + 1j * self.b * np.cos(th))

    def length(self) -> float:
        from .quadrature import adaptive_simpson

        value, _ = adaptive_simpson(lambda t: np.abs(self.derivative(t)), 0.0, 1.0, tol=1e-13)
        return float(value)

    def breakpoints(self) -> list[float]:
        return [0.0]

    def corner_params(self) -> list[float]:
        return []

    @property
    def corners(self) -> tuple:
        return ()

    def default_anchor(self) -> complex:
        return self.center

    def contains(self, z) -> np.ndarray:
        w = (np.asarray(z) - self.center) * np.exp(-1j * self.rot)
        return (w.real / self.a) ** 2 + (w.imag / self.b) ** 2 < 1.0

    def bounding_radius(self) -> float:
        return max(self.a, self.b)


# --------------------------------------------------------------------------
# Piecewise curves made of line segments and circular arcs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LineSegment:
    start: complex
    end: complex

    def __post_init__(self):
        object.__setattr__(self, "start", _as_complex(self.start, "line.start"))
        object.__setattr__(self, "end", _as_complex(self.end, "line.end"))
        if self.start == self.end:
            raise GeometryError("line: zero-length segment")

    def length(self) -> float:
        return abs(self.end - self.start)

    def at(self, s):
        return self.start + np.asarray(s, float) * (self.end - self.start)

    def tangent(self, s):
        return np.full(np.shape(s), (self.end - self.start) / self.length(), dtype=complex)

    def offset(self, u, from_end: bool = False):
        """``at(u) - start`` (or ``at(1 - u) - end``) without cancellation."""
        d = np.asarray(u, float) * (self.end - self.start)
        return -d if from_end else d


@dataclass(frozen=True)
class CircularArc:
    """Arc of ``center + radius e^{i theta}`` from ``theta0`` to ``theta1``.

    ``theta1 > theta0`` runs counterclockwise, ``theta1 < theta0`` clockwise.
    """

    center: complex
    radius: float
    theta0: float
    theta1: float

    def __post_init__(self):
        object.__setattr__(self, "center", _as_complex(self.center, "arc.center"))
        if not self.radius > 0:
            raise GeometryError(f"arc.radius: must be > 0, got {self.radius!r}")
        if self.theta0 == self.theta1 or abs(self.theta1 - self.theta0) > TWO_PI:
            raise GeometryError("arc: sweep must be nonzero and at most 2*pi")

    @property
    def start(self) -> complex:
        return self.center + self.radius * complex(math.cos(self.theta0), math.sin(self.theta0))

    @property
    def end(self) -> complex:
        return self.center + self.radius * complex(math.cos(self.theta1), math.sin(self.theta1))

    def length(self) -> float:
        return self.radius * abs(self.theta1 - self.theta0)

    def at(self, s):
        th = self.theta0 + np.asarray(s, float) * (self.theta1 - self.theta0)
        return self.center + self.radius * np.exp(1j * th)

    def tangent(self, s):
        th = self.theta0 + np.asarray(s, float) * (self.theta1 - self.theta0)
        return 1j * np.sign(self.theta1 - self.theta0) * np.exp(1j * th)

    def offset(self, u, from_end: bool = False):
        """``at(u) - start`` (or ``at(1 - u) - end``) without cancellation."""
        base = self.theta1 if from_end else self.theta0
        d = np.asarray(u, float) * (self.theta1 - self.theta0) * (-1 if from_end else 1)
        # e^{i(base+d)} - e^{i base} = 2i sin(d/2) e^{i(base + d/2)}
        return self.radius * 2j * np.sin(d / 2) * np.exp(1j * (base + d / 2))


Segment = Union[LineSegment, CircularArc]


@dataclass(frozen=True)
class Corner:
    vertex: complex
    angle: float  # interior angle, measured inside the compact set

    def __post_init__(self):
        object.__setattr__(self, "vertex", _as_complex(self.vertex, "corner.vertex"))
        if not (0 < self.angle < TWO_PI):
            raise GeometryError(f"corner.angle: must lie in (0, 2pi), got {self.angle!r}")


@dataclass(frozen=True)
class PiecewiseArcs:
    """Closed curve made of line segments and circular arcs.

    Each segment occupies a parameter interval proportional to its length,
    so the speed ``|dz/dt|`` equals the total length everywhere.  Corners are
    given explicitly and must coincide with segment joins.
    """

    segments: tuple
    corners: tuple = ()
    _knots: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise GeometryError("polyarcs: no segments")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "corners", tuple(self.corners))
        scale = max(abs(s.start) + abs(s.end) for s in segs) + 1.0
        for i, s in enumerate(segs):
            nxt = segs[(i + 1) % len(segs)]
            if abs(s.end - nxt.start) > 1e-12 * scale:
                raise GeometryError(f"polyarcs.segments[{i}]: end does not meet start of next segment")
        lengths = np.array([s.length() for s in segs])
        knots = np.concatenate([[0.0], np.cumsum(lengths) / lengths.sum()])
        knots[-1] = 1.0
        object.__setattr__(self, "_knots", tuple(knots))
        joins = [s.start for s in segs]
        for j, c in enumerate(self.corners):
            if min(abs(c.vertex - p) for p in joins) > 1e-12 * scale:
                raise GeometryError(f"polyarcs.corners[{j}]: vertex is not a segment join")

    def _locate(self, t):
        t = np.mod(np.asarray(t, float), 1.0)
        knots = np.asarray(self._knots)
        idx = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, len(self.segments) - 1)
        s = (t - knots[idx]) / (knots[idx + 1] - knots[idx])
        return idx, s

    def point(self, t):
        idx, s = self._locate(t)
        out = np.empty(np.shape(s), dtype=complex)
        for i, seg in enumerate(self.segments):
            m = idx == i
            if np.any(m):
                out[m] = seg.at(s[m])
        return out

    def derivative(self, t):
        # One-sided (right) derivative at joins: the segment starting there wins.
        idx, s = self._locate(t)
        out = np.empty(np.shape(s), dtype=complex)
        total = self.length()
        for i, seg in enumerate(self.segments):
            m = idx == i
            if np.any(m):
                out[m] = total * seg.tangent(s[m])
        return out

    def length(self) -> float:
        return float(sum(s.length() for s in self.segments))

    def corner_offset(self, t_join: float, delta):
        """``z(t_join + delta) - z(t_join)`` for a join parameter and small
        ``delta`` of one sign, computed inside a single segment so that
        offsets far below the rounding unit of ``z`` keep full precision."""
        knots = np.asarray(self._knots)
        i = int(np.argmin(np.abs(knots[:-1] - t_join)))
        delta = np.asarray(delta, float)
        if np.all(delta >= 0):
            seg, width, from_end = self.segments[i], knots[i + 1] - knots[i], False
        else:
            j = (i - 1) % len(self.segments)
            seg, width, from_end = self.segments[j], knots[j + 1] - knots[j], True
        return seg.offset(np.abs(delta) / width, from_end)

    def breakpoints(self) -> list[float]:
        return list(self._knots[:-1])

    def corner_params(self) -> list[float]:
        out = []
        for c in self.corners:
            i = int(np.argmin([abs(c.vertex - s.start) for s in self.segments]))
            out.append(self._knots[i])
        return sorted(out)

    def polygon(self, per_segment: int = 256) -> np.ndarray:
        s = np.arange(per_segment) / per_segment
        return np.concatenate([seg.at(s) for seg in self.segments])

    def default_anchor(self) -> complex:
        """Area centroid of a dense polygonal approximation."""
        p = self.polygon()
        q = np.roll(p, -1)
        cross = (p.real * q.imag - q.real * p.imag)
        area = cross.sum() / 2
        cx = ((p.real + q.real) * cross).sum() / (6 * area)
        cy = ((p.imag + q.imag) * cross).sum() / (6 * area)
        return complex(cx, cy)

    def contains(self, z) -> np.ndarray:
        poly = self.polygon()
        z = np.atleast_1d(np.asarray(z, complex))
        w = np.array([_winding_number(poly, zi) for zi in z.ravel()]).reshape(z.shape)
        return np.abs(w) > 0.5

    def bounding_radius(self) -> float:
        c = self.default_anchor()
        return float(np.max(np.abs(self.polygon() - c)))


def polygon(vertices: Sequence[complex]) -> PiecewiseArcs:
    """Polygon through ``vertices`` (counterclockwise), every vertex a corner."""
    v = [complex(x) for x in vertices]
    n = len(v)
    if n < 3:
        raise GeometryError("polygon: need at least 3 vertices")
    segs = [LineSegment(v[i], v[(i + 1) % n]) for i in range(n)]
    corners = []
    for i in range(n):
        d_in = v[i] - v[i - 1]
        d_out = v[(i + 1) % n] - v[i]
        turn = math.atan2((d_out / d_in).imag, (d_out / d_in).real)
        corners.append(Corner(v[i], math.pi - turn))
    return PiecewiseArcs(tuple(segs), tuple(corners))


def half_disk(center: complex, radius: float, direction: float = math.pi / 2) -> PiecewiseArcs:
    """Closed half disk whose curved side faces ``direction`` (radians)."""
    c = complex(center)
    arc = CircularArc(c, radius, direction - math.pi / 2, direction + math.pi / 2)
    line = LineSegment(arc.end, arc.start)
    corners = (Corner(arc.start, math.pi / 2), Corner(arc.end, math.pi / 2))
    return PiecewiseArcs((arc, line), corners)


BoundaryComponent = Union[Circle, Ellipse, PiecewiseArcs]


def parametrize(component, t: float) -> tuple[complex, float, complex]:
    """Point, speed ``|dz/dt|`` and unit tangent at parameter ``t``.

    At a corner the right-sided tangent is returned.
    """
    z = complex(component.point(t))
    dz = complex(component.derivative(t))
    speed = abs(dz)
    return z, speed, (dz / speed if speed > 0 else 0j)


# --------------------------------------------------------------------------
# Compact sets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CompactSet:
    components: tuple
    anchors: tuple = ()

    def __post_init__(self):
        comps = tuple(self.components)
        anchors = tuple(self.anchors) or tuple(c.default_anchor() for c in comps)
        if len(anchors) != len(comps):
            raise GeometryError("anchors: one anchor per component required")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "anchors", tuple(complex(a) for a in anchors))

    @classmethod
    def disks(cls, centers: Sequence[complex], radius: float) -> "CompactSet":
        return cls(tuple(Circle(complex(c), radius) for c in centers))

    def __len__(self):
        return len(self.components)

    def length(self) -> float:
        return float(sum(c.length() for c in self.components))

    def has_corners(self) -> bool:
        return any(c.corner_params() for c in self.components)

    def component_containing(self, z: complex) -> int | None:
        for i, c in enumerate(self.components):
            if bool(np.all(c.contains(z))):
                return i
        return None

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, complex)
        out = np.zeros(z.shape, bool)
        for c in self.components:
            out |= c.contains(z)
        return out

    def scaled(self, a: complex, b: complex = 0) -> "CompactSet":
        """The image ``a E + b`` (circles and polygons/arcs only map exactly)."""
        a, b = complex(a), complex(b)
        comps = []
        for c in self.components:
            comps.append(_transform(c, a, b))
        return CompactSet(tuple(comps), tuple(a * x + b for x in self.anchors))


def _transform(c, a: complex, b: complex):
    rot = math.atan2(a.imag, a.real)
    s = abs(a)
    if isinstance(c, Circle):
        return Circle(a * c.center + b, s * c.radius)
    if isinstance(c, Ellipse):
        return Ellipse(a * c.center + b, s * c.a, s * c.b, c.rot + rot)
    if isinstance(c, PiecewiseArcs):
        segs = []
        for seg in c.segments:
            if isinstance(seg, LineSegment):
                segs.append(LineSegment(a * seg.start + b, a * seg.end + b))
            else:
                segs.append(CircularArc(a * seg.center + b, s * seg.radius, seg.theta0 + rot, seg.theta1 + rot))
        corners = tuple(Corner(a * k.vertex + b, k.angle) for k in c.corners)
        return PiecewiseArcs(tuple(segs), corners)
    raise GeometryError(f"cannot transform component of type {type(c).__name__}")


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _samples(c, n: int) -> np.ndarray:
    return c.point(np.arange(n) / n)


def validate(compact: CompactSet, samples: int = 256, eps_sep: float = 1e-9) -> ValidationReport:
    """Check that components are mutually exterior and anchors interior."""
    report = ValidationReport()
    comps = compact.components
    if not comps:
        report.violations.append("set has no components")
    for i, (c, anchor) in enumerate(zip(comps, compact.anchors)):
        if not bool(np.all(c.contains(anchor))):
            report.violations.append(f"components[{i}]: anchor {anchor} is not strictly inside")
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            ci, cj = comps[i], comps[j]
            if isinstance(ci, Circle) and isinstance(cj, Circle):
                if abs(ci.center - cj.center) <= ci.radius + cj.radius:
                    report.violations.append(f"components[{i}] and [{j}] overlap")
                continue
            ri, rj = ci.bounding_radius(), cj.bounding_radius()
            if abs(ci.default_anchor() - cj.default_anchor()) > ri + rj:
                continue
            pi, pj = _samples(ci, samples), _samples(cj, samples)
            gap = np.min(np.abs(pi[:, None] - pj[None, :]))
            nested = bool(np.any(cj.contains(pi[:1]))) or bool(np.any(ci.contains(pj[:1])))
            if gap < eps_sep or nested:
                report.violations.append(f"components[{i}] and [{j}] overlap")
    return report


def min_pairwise_gap(centers: Sequence[complex]) -> float:
    """Smallest distance between two of the given points."""
    z = np.asarray(centers, complex)
    if z.size < 2:
        raise GeometryError("need at least two points")
    d = np.abs(z[:, None] - z[None, :])
    d[np.diag_indices_from(d)] = np.inf
    delta = float(d.min())
    if delta == 0:
        raise GeometryError("duplicate points")
    return delta


# --------------------------------------------------------------------------
# JSON geometry files
# --------------------------------------------------------------------------


def _component_from_dict(d: dict, where: str):
    if not isinstance(d, dict):
        raise GeometryError(f"{where}: expected an object")
    kind = d.get("type")
    try:
        if kind == "circle":
            return Circle(_as_complex(d["center"], f"{where}.center"), float(d["radius"]))
        if kind == "ellipse":
            return Ellipse(_as_complex(d["center"], f"{where}.center"), float(d["a"]), float(d["b"]),
                           float(d.get("rot", 0.0)))
        if kind == "polyarcs":
            segs = []
            for k, s in enumerate(d["segments"]):
                sw = f"{where}.segments[{k}]"
                if s.get("type") == "line":
                    segs.append(LineSegment(_as_complex(s["start"], sw + ".start"), _as_complex(s["end"], sw + ".end")))
                elif s.get("type") == "arc":
                    segs.append(CircularArc(_as_complex(s["center"], sw + ".center"), float(s["radius"]),
                                            float(s["theta0"]), float(s["theta1"])))
                else:
                    raise GeometryError(f"{sw}.type: expected 'line' or 'arc'")
            corners = [Corner(_as_complex(k["vertex"], f"{where}.corners[{i}].vertex"), float(k["angle"]))
                       for i, k in enumerate(d.get("corners", []))]
            return PiecewiseArcs(tuple(segs), tuple(corners))
        if kind == "polygon":
            return polygon([_as_complex(v, f"{where}.vertices") for v in d["vertices"]])
    except KeyError as exc:
        raise GeometryError(f"{where}: missing field {exc.args[0]!r}") from None
    except GeometryError as exc:
        if str(exc).startswith(where):
            raise
        raise GeometryError(f"{where}: {exc}") from None
    raise GeometryError(f"{where}.type: unknown component type {kind!r}")


def compact_set_from_dict(data: dict) -> CompactSet:
    if not isinstance(data, dict) or "components" not in data:
        raise GeometryError("top level: expected an object with a 'components' list")
    comps, anchors = [], []
    for i, d in enumerate(data["components"]):
        c = _component_from_dict(d, f"components[{i}]")
        comps.append(c)
        anchors.append(_as_complex(d["anchor"], f"components[{i}].anchor") if "anchor" in d else c.default_anchor())
    return CompactSet(tuple(comps), tuple(anchors))


def _pt(z: complex) -> list:
    return [z.real, z.imag]


def compact_set_to_dict(compact: CompactSet) -> dict:
    out = []
    for c, anchor in zip(compact.components, compact.anchors):
        if isinstance(c, Circle):
            d = {"type": "circle", "center": _pt(c.center), "radius": c.radius}
        elif isinstance(c, Ellipse):
            d = {"type": "ellipse", "center": _pt(c.center), "a": c.a, "b": c.b, "rot": c.rot}
        else:
            segs = []
            for s in c.segments:
                if isinstance(s, LineSegment):
                    segs.append({"type": "line", "start": _pt(s.start), "end": _pt(s.end)})
                else:
                    segs.append({"type": "arc", "center": _pt(s.center), "radius": s.radius,
                                 "theta0": s.theta0, "theta1": s.theta1})
            d = {"type": "polyarcs", "segments": segs,
                 "corners": [{"vertex": _pt(k.vertex), "angle": k.angle} for k in c.corners]}
        d["anchor"] = _pt(anchor)
        out.append(d)
    return {"components": out}


def load_compact_set(path) -> CompactSet:
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GeometryError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return compact_set_from_dict(data)
