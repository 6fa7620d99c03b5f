"""Reference values of analytic capacity for validating solver output."""
from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, localcontext

# Gamma(1/4) to 30 digits.  It follows from the lemniscate constant
# varpi = Gamma(1/4)^2 / (2 sqrt(2 pi)) = 2.62205755429211981046...,
# i.e. Gamma(1/4) = sqrt(2 varpi sqrt(2 pi)).
GAMMA_QUARTER = Decimal("3.62560990822190831193068515586767")
PI = Decimal("3.14159265358979323846264338327950288419716939937510")

CLOSED_FORM = "closed-form"
PUBLISHED_CONSTANT = "published-constant"


@dataclass(frozen=True)
class ReferenceValue:
    name: str
    value: float
    provenance: str
    exact: Decimal | None = None

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("reference values are positive")
        if self.provenance not in (CLOSED_FORM, PUBLISHED_CONSTANT):
            raise ValueError(f"unknown provenance {self.provenance!r}")


def square_constant(digits: int = 40) -> Decimal:
    """``sqrt(2) Gamma(1/4)^2 / (4 pi^(3/2))``, the capacity of the square
    with corners ``+-1, +-i``."""
    with localcontext() as ctx:
        ctx.prec = digits
        two = Decimal(2)
        return +(two.sqrt() * GAMMA_QUARTER**2 / (4 * PI * PI.sqrt()))


TWO_UNIT_DISKS_AT_PM2 = Decimal("1.8755950190971197289")
UNIT_CROSS_SQUARE_DECIMAL = Decimal("0.83462684167407318630")

_CASE = re.compile(r"^(Disk|Segment|Ellipse)\(([^)]*)\)$")


def known_capacity(case: str) -> ReferenceValue:
    """Look up a reference value.

    Cases: ``"Disk(r)"`` (capacity ``r``), ``"Segment(L)"`` (capacity
    ``L/4``), ``"Ellipse(a,b)"`` (semi-axes, capacity ``(a+b)/2``),
    ``"TwoUnitDisksAtPM2"`` and ``"UnitCrossSquare"``.
    """
    m = _CASE.match(case.replace(" ", ""))
    if m:
        kind, arg = m.groups()
        try:
            args = [Decimal(a) for a in arg.split(",")]
        except ArithmeticError:
            raise KeyError(f"bad argument in {case!r}") from None
        if len(args) != (2 if kind == "Ellipse" else 1):
            raise KeyError(f"wrong number of arguments in {case!r}")
        if not all(a.is_finite() and a > 0 for a in args):
            raise KeyError(f"{kind} sizes must be positive numbers")
        exact = {"Disk": args[0], "Segment": args[0] / 4, "Ellipse": sum(args) / 2}[kind]
        return ReferenceValue(case, float(exact), CLOSED_FORM, exact)
    if case == "TwoUnitDisksAtPM2":
        return ReferenceValue(case, float(TWO_UNIT_DISKS_AT_PM2), PUBLISHED_CONSTANT, TWO_UNIT_DISKS_AT_PM2)
    if case == "UnitCrossSquare":
        exact = square_constant()
        return ReferenceValue(case, float(exact), CLOSED_FORM, exact)
    raise KeyError(f"unknown reference case {case!r}")


def registered_cases() -> list[str]:
    return ["Disk(r)", "Segment(L)", "Ellipse(a,b)", "TwoUnitDisksAtPM2", "UnitCrossSquare"]
