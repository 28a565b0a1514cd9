"""Weyl-von Neumann slicing, Trotter rates and perturbed one-parameter groups.

Run: python3 demos/06_spectral.py
"""
import numpy as np

from hilie.spectral import (BandedOp, ad_matrix, fit_loglog_slope, perturbed_flow,
                            random_hermitian_pair, trotter_limit, wvn_decompose)

print("free Jacobi operator, window 256: inner residual ||A - D||_2 by slice width")
for delta in (0.08, 0.04, 0.02, 0.01):
    print(f"  delta {delta:5.2f}: {wvn_decompose(BandedOp.free_jacobi(), 256, delta).residual_hs:.5f}")

A, B = random_hermitian_pair(6, np.random.default_rng(0))
ns = [8, 16, 32, 64, 128, 256, 512, 1024]
errs = [trotter_limit(A, B, 1.0, n).error for n in ns]
print(f"\nTrotter error for a random 6x6 pair: slope {fit_loglog_slope(ns, errs):.3f}")

rng = np.random.default_rng(1)
z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
x = 0.25 * (z - z.conj().T)
y = 0.25 * (z.T - z.conj())
D = ad_matrix(y)
print("\nperturbed flow defect ||Ad(delta_n) - exp(ad x + D)||:")
for n in (16, 32, 64, 128):
    print(f"  n = {n:4d}: {perturbed_flow(D, x, 1.0, n).defect:.3e}")
