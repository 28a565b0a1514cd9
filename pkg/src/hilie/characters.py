"""The characters chi(g) = det p_b(g) and the three-point factor measure.

p_b(z) = (1 + b z)(1 + b/z) / (1 + b)^2 on the unit circle; it is the
Fourier transform of the measure with masses (b, 1 + b^2, b) / (1 + b)^2
at (-1, 0, 1).
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List

import numpy as np

from .cocycles import haar_unitary
from .core import TruncOp
from .errors import InputError, NotOnCircle, NotUnitary
from .sequences import as_q, q_to_json

CIRCLE_TOL = 1e-12
UNITARY_TOL = 1e-10


def _b(b) -> Fraction:
    q = as_q(b)
    if q < 0:
        raise InputError("b must be non-negative")
    return q


def p_b(b, z) -> float:
    z = complex(z)
    if abs(abs(z) - 1) > CIRCLE_TOL:
        raise NotOnCircle(f"|z| = {abs(z)} is not 1")
    bf = float(_b(b))
    val = (1 + bf * z) * (1 + bf / z) / (1 + bf) ** 2
    return float(val.real)


@dataclass(frozen=True)
class FactorMeasure:
    b: Fraction

    @property
    def atoms(self):
        """Masses at -1, 0, +1."""
        b = _b(self.b)
        n = (1 + b) ** 2
        return {-1: b / n, 0: (1 + b * b) / n, 1: b / n}

    def total(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def fourier(self, theta: float) -> complex:
        return sum(float(m) * cmath.exp(1j * k * theta) for k, m in self.atoms.items())

    def to_json(self):
        return {"b": q_to_json(_b(self.b)), "atoms": {str(k): q_to_json(v) for k, v in self.atoms.items()}}


def max_atom_mass(b, n: int) -> Fraction:
    """Largest atom of the n-fold product measure: ((1 + b^2)/(1 + b)^2)^n."""
    if n < 1:
        raise InputError("n must be at least 1")
    b = _b(b)
    return ((1 + b * b) / (1 + b) ** 2) ** n


def product_atom_masses(b, n: int) -> dict:
    """All atoms of the n-fold product, keyed by the pattern in {-1,0,1}^n."""
    if n > 8:
        raise InputError("enumeration capped at n = 8")
    atoms = FactorMeasure(_b(b)).atoms
    out = {}
    for pat in itertools.product((-1, 0, 1), repeat=n):
        m = Fraction(1)
        for k in pat:
            m *= atoms[k]
        out[pat] = m
    return out


def fourier_rows(b, sample_count: int) -> List[tuple]:
    """(theta, p_b, nu_hat, error) at theta_k = 2 pi k / S."""
    if sample_count < 1:
        raise InputError("sample_count must be at least 1")
    meas = FactorMeasure(_b(b))
    rows = []
    for k in range(sample_count):
        th = 2 * math.pi * k / sample_count
        p = p_b(b, cmath.exp(1j * th))
        nu = meas.fourier(th)
        rows.append((th, p, nu.real, abs(nu - p)))
    return rows


def fourier_check(b, sample_count: int) -> float:
    return max(r[3] for r in fourier_rows(b, sample_count))


def _unitary(g) -> np.ndarray:
    if isinstance(g, TruncOp):
        if not (g.tail.kind == "scalar" and g.tail.value == 1):
            raise NotUnitary("g must have identity tail")
        a = np.asarray(g.entries)
    else:
        a = np.asarray(g, dtype=complex)
    if np.abs(a.conj().T @ a - np.eye(a.shape[0])).max() > UNITARY_TOL:
        raise NotUnitary("g is not unitary to 1e-10")
    return a


@dataclass(frozen=True)
class CharValue:
    value: float
    det_value: float
    identity_residual: float

    def to_json(self):
        return dict(self.__dict__)


def voiculescu_char(b, g) -> CharValue:
    """chi(g) = prod p_b(z_i) over eigenvalues, with two cross-checks.

    ``det_value`` evaluates det((1+b)^-2 (1 + b g)(1 + b g^-1)) directly;
    ``identity_residual`` is the operator norm of
    (1+b)^-2 (1+bg)(1+bg^-1) - 1 - b/(1+b)^2 (1+X)^-1 X^2 with X = g - 1.
    """
    u = _unitary(g)
    bf = float(_b(b))
    n = u.shape[0]
    z = np.linalg.eigvals(u)
    z = z / np.abs(z)
    val = float(np.prod([p_b(b, zi) for zi in z]))
    eye = np.eye(n)
    m = (eye + bf * u) @ (eye + bf * u.conj().T) / (1 + bf) ** 2
    det_val = float(np.real(np.linalg.det(m)))
    x = u - eye
    rhs = eye + bf / (1 + bf) ** 2 * u.conj().T @ x @ x
    resid = float(np.linalg.norm(m - rhs, 2))
    return CharValue(val, det_val, resid)


def pd_gram_check(b, group_dim: int, sample_count: int, seed: int) -> float:
    """Smallest eigenvalue of [chi(g_i^-1 g_j)] over Haar-random g_i in U(n)."""
    if group_dim < 1 or group_dim > 16:
        raise InputError("group_dim must lie in 1..16")
    if sample_count < 1 or sample_count > 64:
        raise InputError("sample_count must lie in 1..64")
    rng = np.random.default_rng(seed)
    gs = [haar_unitary(group_dim, rng) for _ in range(sample_count)]
    gram = np.empty((sample_count, sample_count))
    for i in range(sample_count):
        for j in range(sample_count):
            gram[i, j] = voiculescu_char(b, gs[i].conj().T @ gs[j]).value
    gram = (gram + gram.T) / 2
    return float(np.linalg.eigvalsh(gram).min())
