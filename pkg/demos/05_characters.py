"""The characters det p_b(g) and the three-point factor measure.

Run: python3 demos/05_characters.py
"""
from fractions import Fraction

import numpy as np

from hilie.characters import FactorMeasure, fourier_check, max_atom_mass, pd_gram_check, voiculescu_char
from hilie.cocycles import haar_unitary

for b in (Fraction(1, 2), Fraction(1), Fraction(3)):
    m = FactorMeasure(b)
    print(f"b = {b}: atoms {dict((k, str(v)) for k, v in m.atoms.items())}, "
          f"Fourier error {fourier_check(b, 64):.1e}, largest atom of 10-fold product {max_atom_mass(b, 10)}")

g = haar_unitary(5, np.random.default_rng(3))
c = voiculescu_char(1, g)
print(f"\nchi(g) for a random 5x5 unitary: spectral {c.value:.12f}, determinant {c.det_value:.12f}, "
      f"trace-class identity residual {c.identity_residual:.1e}")
print("smallest Gram eigenvalue, dim 6, 20 samples:", [round(pd_gram_check(1, 6, 20, seed=s), 4) for s in range(3)])
