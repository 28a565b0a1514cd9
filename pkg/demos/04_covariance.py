"""Diagonal automorphism groups: fixed points, energies and ground states.

Run: python3 demos/04_covariance.py
"""
from hilie.covariance import (WeightSet, energy_spectrum, fixed_point_decomposition,
                              ground_state_admissible, ground_state_by_energy, wsembo_infimum)
from hilie.sequences import DiagonalSequence
from hilie.weight import Weight

d = DiagonalSequence.finite([1, 1, 2, 2, 2], tail=2)
print("fixed-point blocks of d = (1, 1, 2, 2, 2, 2, ...):", fixed_point_decomposition(d, 5).to_json())

P = WeightSet([Weight.finite(v) for v in ([1, 0, 0], [0, 1, 0], [0, 0, 1])], 3)
print("energy spectrum of C^3 with d = (0, 1, 2) from e_1:",
      [str(e) for e in energy_spectrum(P, Weight.finite([1, 0, 0]), DiagonalSequence.finite([0, 1, 2]))])

for name, dd in (("d_j = j", DiagonalSequence.affine(1, 0)), ("d_j = -j", DiagonalSequence.affine(-1, 0))):
    r = wsembo_infimum(Weight.finite([1]), dd, 6)
    print(f"orbit pairing of (1, 0, ...) with {name}: window min {r.value}, bounded below {r.finite}")

print("\nground states for d = (2, 1):")
for v in ([1, 0], [0, 1]):
    P0 = WeightSet([Weight.finite(v)], 2)
    dd = DiagonalSequence.finite([2, 1])
    print(f"  P0 = {{{v}}}: criterion {ground_state_admissible(P0, dd)}, energy test {ground_state_by_energy(P0, dd)}")
