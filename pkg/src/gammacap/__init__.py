"""Certified numerical bounds for analytic capacity."""
from .basis import (BasisSet, CornerPower, MultiPole, SimplePole, corner_basis, disk_pole_layout, evaluate,
                    multipole_basis, pole_basis, residue_at_infinity)
from .capacity import (CapacityBounds, CapacityError, GramSystem, IllConditionedError, SolverConfig, assemble,
                       capacity_bracket, compute_bounds, hermitian_solve, lower_bound, solve_bounds, upper_bound)
from .geometry import (Circle, CompactSet, Corner, CircularArc, Ellipse, GeometryError, LineSegment, PiecewiseArcs,
                       half_disk, load_compact_set, min_pairwise_gap, parametrize, polygon, validate)
from .quadrature import QuadratureConfig, QuadratureError, adaptive_simpson, circle_moment, circle_pair_integral

__version__ = "0.1.0"
