"""When is a rational map its own Ahlfors function?

For R(z) = sum a_j / (z - p_j) with n-connected preimage E of the unit disk,
R is the Ahlfors function of E exactly when gamma(E) = |sum a_j|.  We trace
the boundary of E (the level set |R| = 1), bracket gamma(E) with multipoles at
the poles and compare.
"""
from gammacap.experiments.rational import (DisconnectedError, RationalMap, critical_values_in_disk,
                                           symmetric_family, trace_boundary, verify_ahlfors)

maps = {
    "0.2/(z+2) + 0.1/z + 0.4/(z-5), degree 3": (RationalMap((0.2, 0.1, 0.4), (-2, 0, 5)), 3),
    "z^2/(z^3-1), degree 6": (symmetric_family("rotation", n=3, a=1.0), 6),
    "0.6/z + 1.2/(z-1-4i) + 1.2/(z-1+4i), degree 7": (RationalMap((0.6, 1.2, 1.2), (0, 1 + 4j, 1 - 4j)), 7),
}
for name, (R, degree) in maps.items():
    v = verify_ahlfors(R, degree=degree)
    print(f"\n{name}")
    for s in v.stages:
        print(f"  k={s.stage}  {s.stage_lower:.12f}  {s.stage_upper:.12f}")
    print(f"  sum of residues {v.sum_residues.real:g} -> {v.verdict}")

bad = RationalMap((1.5, 1.5), (1, -1))
ok, values = critical_values_in_disk(bad)
print(f"\n1.5/(z-1) + 1.5/(z+1): critical values {[complex(round(w.real, 6), round(w.imag, 6)) for w in values]}")
try:
    trace_boundary(bad)
except DisconnectedError as exc:
    print(f"  not n-connected: {exc}")
