"""Weyl group orbits, weight sets and the momentum-set coarseness example.

Run: python3 demos/02_weyl_orbits.py
"""
from hilie.sequences import DiagonalSequence
from hilie.weight import MSet, Weight, indicator_of_z_halfline
from hilie.weyl import (adapted_permutation, momentum_equivalent_chiM, orbit_canonical,
                        orbit_equivalent, orbit_in_window, orbit_pairing,
                        support_functional_chiM, weight_set_contains)

lam = Weight.finite([-2, 1])
print("D orbit of (-2, 1) in window 2:", orbit_in_window("D", [-2, 1]))
print("  canonical form, window 2:", orbit_canonical("D", lam, window=2).window(2))
print("  canonical form with a spare zero:", orbit_canonical("D", lam).window(3))

print("\nweight set of (1, 1, 0) for kind A:")
for mu in ([2, 0, 0], [0, 1, 1], [1, 0, 1]):
    print(f"  {mu}: {weight_set_contains('A', Weight.finite([1, 1]), Weight.finite(mu))}")

chi_n, chi_n0 = indicator_of_z_halfline(1), indicator_of_z_halfline(0)
print("\nindicators of N and N_0 inside Z (interleaved as 0, 1, -1, 2, -2, ...):")
print("  same Weyl orbit:", orbit_equivalent("A", chi_n, chi_n0))
print("  same momentum set:", momentum_equivalent_chiM(MSet.from_indicator(chi_n), MSet.from_indicator(chi_n0)))

x = DiagonalSequence.finite([1, -2, 3])
M = MSet.from_indicator(chi_n)
w = adapted_permutation(M, x, 3)
print("\nsupport functional at x = (1, -2, 3):", support_functional_chiM(M, x, 3))
print("  attained by the adapted permutation:", orbit_pairing(M, w, x, 3))
