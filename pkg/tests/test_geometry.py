import json
import math

import numpy as np
import pytest
from scipy.special import ellipe

from gammacap.geometry import (Circle, CompactSet, Corner, Ellipse, GeometryError, LineSegment, PiecewiseArcs,
                               compact_set_from_dict, compact_set_to_dict, half_disk, load_compact_set,
                               min_pairwise_gap, parametrize, polygon, validate)

TWO_PI = 2 * math.pi


def test_circle_parametrization():
    z, speed, tangent = parametrize(Circle(0, 1.0), 0.0)
    assert z == pytest.approx(1) and speed == pytest.approx(TWO_PI) and tangent == pytest.approx(1j)
    z, speed, _ = parametrize(Circle(2, 1.0), 0.5)
    assert z == pytest.approx(1) and speed == pytest.approx(TWO_PI)


def test_ellipse_point_and_arclength():
    e = Ellipse(0, 2.0, 1.0, 0.0)
    assert complex(e.point(0.25)) == pytest.approx(1j)
    oracle = 4 * 2.0 * ellipe(1 - 0.25)  # complete elliptic integral, m = 1 - b^2/a^2
    assert oracle == pytest.approx(9.688448220547675, abs=1e-13)
    assert e.length() == pytest.approx(9.688448220547675, abs=1e-11)


def test_circle_length_matches_quadrature():
    from gammacap.quadrature import adaptive_simpson
    c = Circle(1 + 1j, 0.7)
    v, _ = adaptive_simpson(lambda t: np.abs(c.derivative(t)), 0, 1, tol=1e-13)
    assert v == pytest.approx(TWO_PI * 0.7, abs=1e-12)


def test_periodicity():
    for comp in (Circle(1j, 2.0), Ellipse(1, 3.0, 1.0, 0.4), polygon([1, 1j, -1, -1j])):
        t = np.array([0.1, 0.37, 0.8])
        assert np.allclose(comp.point(t), comp.point(t + 1), atol=1e-14)


@pytest.mark.parametrize("comp", [Circle(0.5, 1.0), Ellipse(0, 2.0, 1.0, 0.3), polygon([1, 1j, -1, -1j]),
                                  half_disk(3, 1.0, math.pi / 2)])
def test_positive_orientation(comp):
    from gammacap.geometry import _winding_number
    pts = comp.point(np.arange(2048) / 2048)
    assert _winding_number(pts, comp.default_anchor()) == pytest.approx(1.0, abs=1e-9)


def test_square_corners_and_right_tangent():
    sq = polygon([1, 1j, -1, -1j])
    assert [k.angle for k in sq.corners] == pytest.approx([math.pi / 2] * 4)
    assert sq.length() == pytest.approx(4 * math.sqrt(2))
    t0 = sq.corner_params()[1]
    _, _, tangent = parametrize(sq, t0)
    assert tangent == pytest.approx((-1 - 1j) / math.sqrt(2))


def test_validate():
    assert validate(CompactSet.disks([-2, 2], 1.0)).ok
    assert not validate(CompactSet.disks([0, 1], 1.0)).ok
    bad_anchor = CompactSet((Circle(0, 1.0),), (1.0,))
    assert not validate(bad_anchor).ok
    sq = polygon([1, 1j, -1, -1j])
    assert validate(CompactSet((sq, Circle(5, 1.0)))).ok
    assert not validate(CompactSet((sq, Circle(1.2, 0.5)))).ok


def test_degenerate_inputs():
    with pytest.raises(GeometryError):
        Circle(0, 0.0)
    with pytest.raises(GeometryError):
        PiecewiseArcs((LineSegment(0, 1), LineSegment(1, 1j)), ())


def test_min_pairwise_gap():
    assert min_pairwise_gap([-2, 2]) == 4
    assert min_pairwise_gap([0, 3, 3j]) == 3
    assert min_pairwise_gap([0, 1 + 4j, 1 - 4j]) == pytest.approx(math.sqrt(17))
    with pytest.raises(GeometryError):
        min_pairwise_gap([1, 1, 2])
    with pytest.raises(GeometryError):
        min_pairwise_gap([1])


def test_scaling_maps_components():
    E = CompactSet((Circle(1, 0.5), polygon([1, 1j, -1, -1j])))
    F = E.scaled(2j, 3)
    assert F.components[0].center == pytest.approx(3 + 2j) and F.components[0].radius == pytest.approx(1.0)
    assert F.length() == pytest.approx(2 * E.length())


def test_json_round_trip(tmp_path):
    E = CompactSet((Circle(0, 1.0), half_disk(3, 1.0, math.pi / 2), Ellipse(10j, 2, 1, 0.2)))
    path = tmp_path / "g.json"
    path.write_text(json.dumps(compact_set_to_dict(E)))
    F = load_compact_set(path)
    assert F.length() == pytest.approx(E.length(), rel=1e-12)
    assert F.anchors == pytest.approx(E.anchors)


def test_schema_errors_name_the_field(tmp_path):
    with pytest.raises(GeometryError, match=r"components\[1\]"):
        compact_set_from_dict({"components": [{"type": "circle", "center": [0, 0], "radius": 1},
                                              {"type": "circle", "center": [5, 0]}]})
    with pytest.raises(GeometryError, match="unknown component type"):
        compact_set_from_dict({"components": [{"type": "blob"}]})
    p = tmp_path / "bad.json"
    p.write_text('{"components": [\n  {"type": "circle",, }]}')
    with pytest.raises(GeometryError, match="line 2"):
        load_compact_set(p)


def test_contains_and_component_lookup():
    E = CompactSet((Circle(-2, 1.0), polygon([3, 4, 4 + 1j, 3 + 1j])))
    assert E.component_containing(-2.5) == 0
    assert E.component_containing(3.5 + 0.5j) == 1
    assert E.component_containing(10) is None
    assert list(E.contains(np.array([-2, 3.5 + 0.5j, 0]))) == [True, True, False]


def test_corner_offset_matches_point_difference():
    comp = half_disk(3, 1.0, math.pi / 2)
    for t0 in comp.breakpoints():
        for d in (1e-3, -1e-3, 0.02, -0.02):
            exact = comp.corner_offset(t0, np.array([d]))[0]
            assert exact == pytest.approx(complex(comp.point(t0 + d) - comp.point(t0)), abs=1e-13)
    # far below the rounding unit of z the offset keeps relative precision
    sq = polygon([1, 1j, -1, -1j])
    tiny = sq.corner_offset(sq.corner_params()[0], np.array([1e-30]))[0]
    assert abs(tiny) == pytest.approx(4 * math.sqrt(2) * 1e-30, rel=1e-12)
