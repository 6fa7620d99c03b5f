"""Two unit disks centred at -2 and 2.

Poles are placed on concentric rings inside each disk; ring count 0 is just
the centre.  All boundary integrals are closed form on circles, so the very
first row is exact: 1.875 and 1.8828125.  The bracket closes onto the reference
value 1.8755950190971197... within a few rings.
"""
from _common import DATA, print_stages

from gammacap import SolverConfig, compute_bounds, load_compact_set
from gammacap.oracles import known_capacity

E = load_compact_set(DATA / "two_disks.json")
stages = compute_bounds(E, SolverConfig(basis="poles", max_stage=4, gap_target=1e-15))
print_stages(stages, "rings")

exact = known_capacity("TwoUnitDisksAtPM2").value
last = stages[-1]
print(f"\nreference {exact:.16f} inside last bracket: {last.lower <= exact <= last.upper}")
print(f"bracket width {last.gap:.2e}")
