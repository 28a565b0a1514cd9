"""Cocycles omega_d: classification and boundedness of Theta.

Run: python3 demos/03_cocycles.py
"""
import math

import numpy as np

from hilie.cocycles import cocycle_class, haar_unitary, theta, theta_orbit_stats
from hilie.sequences import DiagonalSequence

cases = {
    "d = 5": DiagonalSequence.const(5),
    "d_j = 1/j": DiagonalSequence.power(1, -1),
    "d_j = 3 + 1/j^2": DiagonalSequence.power(1, -2) + DiagonalSequence.const(3),
    "d_j = (-1)^j": DiagonalSequence.alternating(1),
    "d_j = j": DiagonalSequence.affine(1, 0),
}
for name, d in cases.items():
    cls = cocycle_class(d)
    print(f"{name:16s} -> {cls.verdict}" + (f" (shift {cls.shift})" if cls.shift is not None else ""))

ev = cocycle_class(DiagonalSequence.power(1, -1)).evidence
print(f"\nsum 1/j^2 = {ev['tail_sum']:.15f}   pi^2/6 = {math.pi ** 2 / 6:.15f}")
print(f"integral bracket {ev['integral_bracket']}")

rng = np.random.default_rng(0)
d = DiagonalSequence.finite([1, -1, 2, 0])
g1, g2 = haar_unitary(4, rng), haar_unitary(4, rng)
res = theta(d, g1 @ g2).entries - theta(d, g1).entries - g1 @ theta(d, g2).entries @ g1.conj().T
print(f"\nTheta cocycle identity residual: {np.abs(res).max():.2e}")

print("\nlargest ||Theta(g)||_2 over 20 random window unitaries:")
for name in ("d_j = 1/j", "d_j = (-1)^j"):
    norms = [theta_orbit_stats(cases[name], n, 20, seed=1).max_norm for n in (8, 32, 128)]
    print(f"  {name:14s} N = 8, 32, 128: {[round(v, 3) for v in norms]}")
