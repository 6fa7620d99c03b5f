import mpmath
import pytest

from gammacap.oracles import (CLOSED_FORM, PUBLISHED_CONSTANT, UNIT_CROSS_SQUARE_DECIMAL, known_capacity,
                              registered_cases, square_constant)


def test_square_constant_against_mpmath():
    mpmath.mp.dps = 50
    ref = mpmath.sqrt(2) * mpmath.gamma(0.25) ** 2 / (4 * mpmath.pi ** 1.5)
    ours = mpmath.mpf(str(square_constant(40)))
    assert abs(ours - ref) < 1e-28
    # the 20-digit decimal agrees to its last digit
    assert abs(mpmath.mpf(str(UNIT_CROSS_SQUARE_DECIMAL)) - ref) < 1e-19


def test_closed_form_cases():
    assert known_capacity("Disk(2.5)").value == 2.5
    assert known_capacity("Disk(2.5)").provenance == CLOSED_FORM
    assert known_capacity("Segment(4)").value == 1.0
    assert known_capacity("Ellipse(2, 1)").value == 1.5
    assert known_capacity("UnitCrossSquare").value == pytest.approx(0.8346268416740732, abs=1e-16)


def test_disk_scales_linearly():
    for r in ("0.001", "1", "37.5"):
        assert known_capacity(f"Disk({r})").value == float(r)


def test_published_constant():
    v = known_capacity("TwoUnitDisksAtPM2")
    assert v.provenance == PUBLISHED_CONSTANT and v.value == pytest.approx(1.8755950190971197, abs=1e-16)


@pytest.mark.parametrize("case", ["Disk(-1)", "Disk(0)", "Disk(x)", "Ellipse(1)", "Triangle(1)", "", "Disk(nan)"])
def test_unknown_or_invalid_cases(case):
    with pytest.raises(KeyError):
        known_capacity(case)


def test_registered_cases():
    assert "UnitCrossSquare" in registered_cases()
