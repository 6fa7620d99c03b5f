"""Four ellipses (semi-axes 2 and 1) centred at +-3 and +-10i.

Ellipse boundaries have no closed-form integrals, so every Gram entry comes
from adaptive Simpson quadrature at tolerance 1e-9.  Poles sit at the centre
and on scaled copies of the four vertices.  Ring 4 (17 poles per ellipse)
takes a few seconds.
"""
from _common import DATA, print_stages

from gammacap import QuadratureConfig, SolverConfig, compute_bounds, load_compact_set

E = load_compact_set(DATA / "four_ellipses.json")
cfg = SolverConfig(basis="poles", max_stage=4, gap_target=1e-15, quadrature=QuadratureConfig(abs_tol=1e-9))
print_stages(compute_bounds(E, cfg), "rings")
