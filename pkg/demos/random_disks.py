"""Many small disjoint disks.

100 equal disks with seeded random centres; 5 poles per disk already give a
relative bracket width around 1e-10 because the disks are small compared to
their separation.  Increase N to see how assembly cost scales.
"""
import time

from _common import print_stages

from gammacap import CompactSet, SolverConfig, compute_bounds, min_pairwise_gap
from gammacap.experiments.subadditivity import random_configuration

N = 100
e, f = random_configuration(N // 2, N - N // 2, seed=2, box=30.0, min_gap=1.0)
centers = e + f
r = 0.02 * min_pairwise_gap(centers)
print(f"{N} disks of radius {r:.4f}")

t0 = time.perf_counter()
stages = compute_bounds(CompactSet.disks(centers, r), SolverConfig(basis="poles", max_stage=1, gap_target=1e-15))
print_stages(stages, "rings")
b = stages[-1]
print(f"\nrelative width {b.gap / b.upper:.2e}, total {time.perf_counter() - t0:.1f} s")
