"""A unit disk plus two half-disks, mixing circles, segments and arcs.

Corner powers are placed at the four corners of the half-disks; the disk gets
plain poles.  Exact offsets from each corner keep the graded quadrature
accurate right up to the vertex.
"""
from _common import DATA, print_stages

from gammacap import SolverConfig, compute_bounds, load_compact_set

E = load_compact_set(DATA / "disk_and_half_disks.json")
print_stages(compute_bounds(E, SolverConfig(basis="corner", first_stage=2, max_stage=6, gap_target=1e-15)), "n")
