import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gammacap.basis import (BasisSet, CornerPower, MultiPole, SimplePole, basis_from_json, basis_to_json,
                            corner_basis, corner_exponent, disk_pole_layout, evaluate, evaluate_many,
                            multipole_basis, pole_basis, residue_at_infinity)
from gammacap.geometry import Circle, CompactSet, GeometryError, polygon
from gammacap.quadrature import DomainError

SQUARE = CompactSet((polygon([1, 1j, -1, -1j]),))


def test_evaluation_examples():
    assert evaluate(SimplePole(0), 2) == pytest.approx(0.5)
    assert evaluate(MultiPole(1, 2), 3) == pytest.approx(0.25)
    v = evaluate(CornerPower(1, 0, 1 / 6, 1), -10)
    assert v == pytest.approx((11 / 10) ** (-1 / 6) * (-1 / 10))
    assert v == pytest.approx(-0.09842404717, abs=1e-11)


def test_domain_errors():
    with pytest.raises(DomainError):
        evaluate(SimplePole(1j), 1j)
    with pytest.raises(DomainError):
        evaluate(MultiPole(0, 3), 0)
    with pytest.raises(DomainError):
        evaluate(CornerPower(1, 0, 1 / 6), 0.5)
    with pytest.raises(DomainError):
        evaluate(CornerPower(1j, 0, 1 / 6), 0.25j)


@pytest.mark.parametrize("f", [SimplePole(5), MultiPole(0, 3), MultiPole(1j, 1), CornerPower(1j, 0, 1 / 6, 1),
                               CornerPower(1, 0.1, 0.2, 2)])
def test_residue_at_infinity_matches_numeric_limit(f):
    for theta in (0.3, 1.7, 2.9, -2.2):
        z = 1e7 * np.exp(1j * theta)
        numeric = z * evaluate(f, z)
        assert abs(numeric - residue_at_infinity(f)) <= 1e-6 * max(1.0, abs(residue_at_infinity(f)))


def test_corner_power_is_continuous_along_the_square_boundary():
    sq = SQUARE.components[0]
    t = np.linspace(0, 1, 20001)[:-1]
    z = sq.point(t)
    far = np.min(np.abs(z[:, None] - np.array([1, 1j, -1, -1j])[None, :]), axis=1) > 0.01
    for f in corner_basis(SQUARE, 2):
        v = evaluate(f, z[far])
        rel = np.abs(np.diff(v)) / np.abs(v[:-1])
        # consecutive samples away from corners: no branch jumps
        keep = np.diff(t[far]) < 1e-4
        assert np.all(rel[keep] < 0.05)


def test_disk_layout():
    assert [p.a for p in disk_pole_layout(0, 1.0, 0)] == [0]
    assert {p.a for p in disk_pole_layout(0, 1.0, 1)} == {0, 0.5, -0.5, 0.5j, -0.5j}
    poles = disk_pole_layout(2, 1.0, 3)
    assert len(poles) == 13 and all(abs(p.a - 2) <= 0.75 + 1e-15 for p in poles)
    with pytest.raises(ValueError):
        disk_pole_layout(0, -1.0, 1)


def test_corner_basis_sizes_and_nesting():
    b1, b6 = corner_basis(SQUARE, 1), corner_basis(SQUARE, 6)
    assert len(b1) == 5 and len(b6) == 30
    assert b6.extends(b1) and corner_basis(SQUARE, 3).extends(corner_basis(SQUARE, 2))
    assert corner_exponent(math.pi / 2) == pytest.approx(1 / 6)
    assert all(f.mu == pytest.approx(1 / 6) for f in b1 if isinstance(f, CornerPower))
    with pytest.raises(GeometryError):
        corner_basis(CompactSet.disks([0], 1.0), 2)


def test_corner_basis_rejects_branch_segment_leaving_set():
    # L-shaped polygon with the anchor placed so that a segment to a corner exits
    L = polygon([0, 2, 2 + 1j, 1 + 1j, 1 + 2j, 2j])
    with pytest.raises(GeometryError):
        corner_basis(CompactSet((L,), (0.2 + 1.8j,)), 1)


def test_multipole_basis_is_nested():
    E = CompactSet.disks([-2, 2], 1.0)
    assert multipole_basis(E, 4).extends(multipole_basis(E, 3))
    assert len(multipole_basis(E, 4)) == 8
    with pytest.raises(ValueError):
        multipole_basis(E, 0)


def test_pole_basis_counts():
    E = CompactSet((Circle(0, 1.0), polygon([3, 4, 4 + 1j, 3 + 1j])))
    b = pole_basis(E, 2)
    assert len(b) == 9 + 3


def test_basis_set_rejects_duplicates():
    with pytest.raises(ValueError):
        BasisSet((SimplePole(0), SimplePole(0)))


def test_json_round_trip():
    funcs = list(corner_basis(SQUARE, 2)) + [SimplePole(1 + 2j)]
    assert basis_from_json(basis_to_json(funcs)) == funcs


def test_evaluate_many_matches_single():
    funcs = list(corner_basis(SQUARE, 2)) + [SimplePole(0.1), MultiPole(0.2j, 3)]
    z = np.exp(2j * np.pi * np.linspace(0, 1, 17)) * 3
    G = evaluate_many(funcs, z)
    for j, f in enumerate(funcs):
        assert np.allclose(G[:, j], evaluate(f, z))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 0.45), st.floats(-math.pi, math.pi), st.floats(1.5, 50), st.floats(-math.pi, math.pi))
def test_corner_power_branch_tends_to_one(mu, arg_a, radius, theta):
    a = np.exp(1j * arg_a)
    f = CornerPower(a, 0, mu, 1)
    z = radius * np.exp(1j * theta)
    w = evaluate(f, z) * z
    # ((z-a)/z)^(-mu) stays near 1 for |z| >> |a| (principal branch, no sign flips)
    assert abs(w - 1) <= 2 * mu * abs(a) / (radius - 1)
