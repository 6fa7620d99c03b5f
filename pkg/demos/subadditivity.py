"""Is capacity subadditive?  A numerical look with equal disks.

E and F are unions of disks of radius r about fixed centres.  The ratio
gamma(E u F) / (gamma(E) + gamma(F)) is bracketed by combining the three
certified brackets.  Conjecturally it stays below 1 and decreases in r, with
1 - R ~ C r^2 for small r.

The full 40-disk sweep (500 radii) is `gammacap subadd demos/data/forty_disks.json`;
this script uses a coarse grid and finishes in well under a minute.
"""
import numpy as np
from _common import DATA

from gammacap.experiments.subadditivity import (DiskPairConfig, asymptotic_fit, load_disk_pair_config,
                                                max_ratio_upper, monotonicity_scan, ratio_sweep)


def report(name, cfg, grid):
    points = ratio_sweep(DiskPairConfig(cfg.centers_e, cfg.centers_f, grid))
    print(f"\n{name}: delta = {cfg.delta:g}")
    print(f"{'r':>8}  {'ratio lower':>16}  {'ratio upper':>16}")
    for p in points:
        print(f"{p.r:>8.4f}  {p.ratio_lower:>16.12f}  {p.ratio_upper:>16.12f}")
    print(f"max certified upper bound {max_ratio_upper(points):.12f}")
    bad = monotonicity_scan(points)
    print("certified increases:", bad if bad else "none")
    return points


pair = load_disk_pair_config(DATA / "disk_pair.json")
small = tuple(np.linspace(0.004, 0.2, 8))
points = report("single pair at -2, 2", pair, small + (0.5, 1.0, 1.5, 1.996))
fit = asymptotic_fit([p for p in points if p.r <= 0.2])
print(f"fit (1-R)/r^2 ~ C + D r: C = {fit.C:.6f} (1/d^2 = {1 / 16:.6f}), residual {fit.residual:.1e}")

forty = load_disk_pair_config(DATA / "forty_disks.json")
report("40 disks on a lattice", forty, (0.001, 0.1, 0.2, 0.3, 0.4, 0.499))
