"""Boundary quadrature: adaptive Simpson and closed-form circle integrals."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-9
    max_depth: int = 50
    min_intervals: int = 8

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be > 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_intervals < 1:
            raise ValueError("min_intervals must be >= 1")


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to converge; carries the partial estimate."""

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class DomainError(ValueError):
    """A singularity lies on the integration contour or evaluation point."""


_CHUNK_VALUES = 1_500_000
_MAX_PANELS = 2_000_000


def adaptive_simpson(f, t0, t1, cfg: QuadratureConfig | None = None, *, tol=None):
    """Integrate ``f`` over ``[t0, t1]`` with globally adaptive Simpson.

    ``f`` is vectorized: it maps a 1-D array of ``m`` parameters to an array
    of shape ``(m, ...)``.  Vector-valued integrands are integrated
    simultaneously on a shared panel tree; a panel is accepted once every
    component satisfies ``|S_fine - S_coarse| / 15 <= tol * width_fraction``.
    ``tol`` may be a scalar or an array broadcastable to the value shape.

    Returns ``(value, error_estimate)``.  Panels are processed level by level
    in a fixed order, so the result is deterministic.
    """
    cfg = cfg or QuadratureConfig()
    tol = np.asarray(cfg.abs_tol if tol is None else tol, float)
    t0, t1 = float(t0), float(t1)
    width = t1 - t0
    if width == 0:
        probe = np.asarray(f(np.array([t0])))
        return np.zeros(probe.shape[1:], dtype=probe.dtype)[()], 0.0

    edges = np.linspace(t0, t1, cfg.min_intervals + 1)
    a, b = edges[:-1], edges[1:]
    total = None
    err = None
    per_chunk = None

    for depth in range(cfg.max_depth + 1):
        if a.size == 0:
            break
        if a.size > _MAX_PANELS:
            raise QuadratureError(f"adaptive Simpson: more than {_MAX_PANELS} active panels", total, err)
        m = 0.5 * (a + b)
        pieces = []
        start = 0
        while start < a.size:
            stop = a.size if per_chunk is None else min(a.size, start + per_chunk)
            if per_chunk is None:
                stop = min(a.size, 8)
            sa, sb, sm = a[start:stop], b[start:stop], m[start:stop]
            nodes = np.concatenate([sa, 0.5 * (sa + sm), sm, 0.5 * (sm + sb), sb])
            vals = np.asarray(f(nodes))
            k = sa.size
            if per_chunk is None:
                comps = max(1, int(np.prod(vals.shape[1:])))
                per_chunk = max(1, _CHUNK_VALUES // (5 * comps))
            fa, flm, fm, frm, fb = (vals[i * k:(i + 1) * k] for i in range(5))
            h = (sb - sa).reshape((k,) + (1,) * (vals.ndim - 1))
            coarse = h / 6 * (fa + 4 * fm + fb)
            fine = h / 12 * (fa + 4 * flm + 2 * fm + 4 * frm + fb)
            pieces.append((coarse, fine))
            start = stop
        coarse = np.concatenate([p[0] for p in pieces])
        fine = np.concatenate([p[1] for p in pieces])
        diff = fine - coarse
        if not np.all(np.isfinite(diff)):
            raise QuadratureError("adaptive Simpson: non-finite integrand value", total, err)
        frac = ((b - a) / width).reshape((a.size,) + (1,) * (diff.ndim - 1))
        within = np.abs(diff) <= 15 * frac * tol
        ok = within.reshape(a.size, -1).all(axis=1)

        acc = fine[ok] + diff[ok] / 15
        acc_sum = acc.sum(axis=0)
        acc_err = (np.abs(diff[ok]) / 15).sum(axis=0)
        total = acc_sum if total is None else total + acc_sum
        err = acc_err if err is None else err + acc_err

        if not ok.all() and depth == cfg.max_depth:
            partial = total + fine[~ok].sum(axis=0)
            raise QuadratureError(
                f"adaptive Simpson: max depth {cfg.max_depth} exceeded on {int((~ok).sum())} panels",
                partial, err)
        bad_a, bad_m, bad_b = a[~ok], m[~ok], b[~ok]
        a = np.concatenate([bad_a, bad_m])
        b = np.concatenate([bad_m, bad_b])
        order = np.argsort(a, kind="stable")
        a, b = a[order], b[order]

    return total, float(np.max(err)) if np.ndim(err) else float(err)


# --------------------------------------------------------------------------
# Closed forms on circles
# --------------------------------------------------------------------------


def _check_off_contour(p, c, r):
    d = np.abs(np.asarray(p) - c)
    if np.any(np.abs(d - r) <= 1e-14 * max(r, 1.0)):
        raise DomainError("pole lies on the circle")


def circle_pair_integral(a, b, c: complex, r: float):
    """``int_{|z-c|=r} 1/(z-a) * conj(1/(z-b)) |dz|`` in closed form.

    ``a`` and ``b`` broadcast against each other (e.g. column and row
    vectors give the full Gram block).  On the circle,
    ``conj(z-b) = (w (z-c) + r^2)/(z-c)`` with ``w = conj(c-b)``, turning the
    integral into ``-i r`` times a contour integral with simple poles at
    ``a`` and at the reflection point ``c - r^2/w`` of ``b``.
    """
    a = np.asarray(a, complex)
    b = np.asarray(b, complex)
    _check_off_contour(a, c, r)
    _check_off_contour(b, c, r)
    a, b = np.broadcast_arrays(a, b)
    w = np.conj(c - b)
    a_in = np.abs(a - c) < r
    b_in = np.abs(b - c) < r
    at_center = w == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ws = np.where(at_center, 1.0, w)
        refl = c - r * r / ws
        refl_in = ~b_in  # the reflection of an interior point lies outside and vice versa
        d = a - refl
        val = np.where(a_in & ~refl_in, TWO_PI * r / (ws * d), 0.0)
        val = val + np.where(refl_in & ~a_in, -TWO_PI * r / (ws * d), 0.0)
    val = np.where(at_center, np.where(a_in, TWO_PI / r, 0.0), val)
    return val[()] if val.ndim == 0 else val


def circle_moment(a, c: complex, r: float):
    """``int_{|z-c|=r} 1/(z-a) |dz|``: zero for interior ``a``, ``2 pi r/(c-a)`` otherwise."""
    a = np.asarray(a, complex)
    _check_off_contour(a, c, r)
    inside = np.abs(a - c) < r
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(inside, 0.0, TWO_PI * r / np.where(inside, 1.0, c - a))
    return val[()] if val.ndim == 0 else val
