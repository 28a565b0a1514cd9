"""Weyl-von Neumann slicing, Trotter products and perturbed one-parameter groups.

Matrices acting on a matrix algebra use column-major vectorization:
vec(A X B) = (B^T kron A) vec(X).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .errors import InputError, NotDerivation, NotHermitian, SliceTooCoarse


# --------------------------------------------------------------------------
# banded operators


class BandedOp:
    """Hermitian band operator on l^2(J) given by closed-form diagonals.

    ``diag(j)`` is the entry (j, j); ``offdiag[r-1](j)`` is the entry
    (j, j + r) for r = 1..bandwidth.  The lower triangle is the conjugate.
    """

    def __init__(self, diag: Callable[[int], float], offdiag: Sequence[Callable[[int], complex]] = (),
                 hermitian: bool = True):
        self.diag = diag
        self.offdiag = list(offdiag)
        self.hermitian = hermitian

    @property
    def bandwidth(self) -> int:
        return len(self.offdiag)

    def to_dense(self, N: int) -> np.ndarray:
        a = np.zeros((N, N), dtype=complex)
        for j in range(1, N + 1):
            a[j - 1, j - 1] = self.diag(j)
        for r, f in enumerate(self.offdiag, start=1):
            for j in range(1, N - r + 1):
                v = complex(f(j))
                a[j - 1, j - 1 + r] = v
                a[j - 1 + r, j - 1] = v.conjugate()
        if self.hermitian and np.abs(np.imag(np.diag(a))).max() > 0:
            raise NotHermitian("diagonal entries must be real")
        return a

    @classmethod
    def free_jacobi(cls) -> "BandedOp":
        return cls(lambda j: 0.0, [lambda j: 1.0])

    @classmethod
    def from_dense(cls, a) -> "BandedOp":
        a = np.asarray(a, dtype=complex)
        n = a.shape[0]
        if np.abs(a - a.conj().T).max() > 1e-12:
            raise NotHermitian("matrix is not hermitian")
        bw = max([r for r in range(1, n) if np.abs(np.diag(a, r)).max() > 0], default=0)
        diag = lambda j, a=a: a[j - 1, j - 1].real if j <= n else 0.0
        offs = [lambda j, r=r, a=a: a[j - 1, j - 1 + r] if j + r <= n else 0.0 for r in range(1, bw + 1)]
        return cls(diag, offs)


@dataclass
class WvnResult:
    diag: np.ndarray
    residual_hs: float
    basis: np.ndarray
    claimed: list
    delta: float
    a_priori_delta: Optional[float]

    def to_json(self):
        return {"diag": self.diag.tolist(), "residual_hs": self.residual_hs,
                "delta": self.delta, "a_priori_delta": self.a_priori_delta,
                "claimed": self.claimed}


def inner_slice(N: int) -> slice:
    return slice(N // 4, (3 * N) // 4)


def wvn_decompose(A, N: int, delta: float, eps: Optional[float] = None) -> WvnResult:
    """Diagonal-plus-small-HS splitting of a banded hermitian operator's window.

    The window spectrum is cut into slices [k delta, (k+1) delta).  For each
    slice, in increasing order, the projections of the earliest unclaimed
    standard vectors onto the slice's spectral subspace are orthonormalized
    until the subspace is filled.  D is diagonal in the resulting basis with
    the Rayleigh quotients as entries; the residual is ||A - D||_2 on the
    inner half window.
    """
    if N < 16:
        raise InputError("window N must be at least 16")
    if not delta > 0:
        raise InputError("slice width delta must be positive")
    m = A.to_dense(N) if isinstance(A, BandedOp) else np.asarray(A, dtype=complex)
    if m.shape != (N, N):
        raise InputError("matrix size does not match N")
    if np.abs(m - m.conj().T).max() > 1e-12 * max(1.0, np.abs(m).max()):
        raise NotHermitian("operator is not hermitian")
    w, v = np.linalg.eigh(m)
    keys = np.floor(w / delta).astype(np.int64)
    claimed = np.zeros(N, dtype=bool)
    cols = []
    owners = []
    for key in np.unique(keys):
        vs = v[:, keys == key]
        dim = vs.shape[1]
        chosen = []          # coefficient vectors in the slice's eigenbasis
        order = [k for k in range(N) if not claimed[k]] + [k for k in range(N) if claimed[k]]
        for k in order:
            if len(chosen) == dim:
                break
            c = vs[k, :].conj()            # P e_k = vs @ c
            for _ in range(2):             # two Gram-Schmidt passes
                for q in chosen:
                    c = c - q * np.vdot(q, c)
            nrm = np.linalg.norm(c)
            if nrm < 1e-6:
                continue
            chosen.append(c / nrm)
            if not claimed[k]:
                claimed[k] = True
                owners.append(k)
            else:
                owners.append(N + len(owners))
        if len(chosen) < dim:
            raise RuntimeError("slice subspace could not be filled")
        cols.extend(vs @ c for c in chosen)
    basis = np.column_stack(cols)
    order = np.argsort(owners, kind="stable")
    basis = basis[:, order]
    owners = [int(owners[i]) for i in order]
    rq = np.real(np.einsum("ij,ij->j", basis.conj(), m @ basis))
    d_op = (basis * rq) @ basis.conj().T
    s = inner_slice(N)
    resid = float(np.linalg.norm((m - d_op)[s, s]))
    n_inner = s.stop - s.start
    apriori = eps / (4 * math.sqrt(n_inner)) if eps is not None else None
    res = WvnResult(rq, resid, basis, owners, float(delta), apriori)
    if eps is not None and resid > eps:
        raise SliceTooCoarse(f"residual {resid:.6g} exceeds tolerance {eps:.6g}", res)
    return res


# --------------------------------------------------------------------------
# Trotter products


def expm_taylor(x: np.ndarray, order: int = 20) -> np.ndarray:
    """Scaling and squaring with a truncated Taylor series (reference oracle)."""
    x = np.asarray(x, dtype=complex)
    nrm = np.linalg.norm(x, 1)
    s = max(0, int(math.ceil(math.log2(nrm / 0.25))) if nrm > 0.25 else 0)
    y = x / (2 ** s)
    term = np.eye(x.shape[0], dtype=complex)
    out = term.copy()
    for k in range(1, order + 1):
        term = term @ y / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


@dataclass
class TrotterResult:
    approx: np.ndarray
    error: float

    def to_json(self):
        return {"error": self.error}


def trotter_limit(A, B, t: float, n: int) -> TrotterResult:
    """(e^{tA/n} e^{tB/n})^n and its spectral-norm distance to e^{t(A+B)}."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("A and B must be square matrices of the same size")
    if n < 1:
        raise InputError("n must be positive")
    step = expm(t * A / n) @ expm(t * B / n)
    approx = np.linalg.matrix_power(step, n)
    exact = expm_taylor(t * (A + B))
    return TrotterResult(approx, float(np.linalg.norm(approx - exact, 2)))


def random_hermitian_pair(dim: int, rng):
    """Two hermitian matrices with standard complex Gaussian entries."""
    def herm():
        z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return (z + z.conj().T) / 2
    return herm(), herm()


def fit_loglog_slope(ns, errors) -> float:
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


# --------------------------------------------------------------------------
# perturbed one-parameter groups


def vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).reshape(-1, order="F")


def unvec(v: np.ndarray, m: int) -> np.ndarray:
    return np.asarray(v).reshape((m, m), order="F")


def ad_matrix(x: np.ndarray) -> np.ndarray:
    m = x.shape[0]
    eye = np.eye(m)
    return np.kron(eye, x) - np.kron(x.T, eye)


def Ad_matrix(g: np.ndarray) -> np.ndarray:
    return np.kron(np.linalg.inv(g).T, g)


def _check_derivation(D: np.ndarray, m: int, tol: float = 1e-8, trials: int = 4):
    rng = np.random.default_rng(0)
    scale = max(1.0, np.abs(D).max())
    for _ in range(trials):
        x = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        y = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        lhs = unvec(D @ vec(x @ y), m)
        rhs = unvec(D @ vec(x), m) @ y + x @ unvec(D @ vec(y), m)
        if np.abs(lhs - rhs).max() > tol * scale * np.abs(x).max() * np.abs(y).max() * m:
            raise NotDerivation("generator fails the Leibniz rule")


def _dims(D, x):
    D = np.asarray(D, dtype=complex)
    x = np.asarray(x, dtype=complex)
    m = x.shape[0]
    if x.shape != (m, m) or D.shape != (m * m, m * m):
        raise InputError("D must be (m^2 x m^2) for an (m x m) algebra element")
    return D, x, m


def alpha_flow(D: np.ndarray, s: float, g: np.ndarray) -> np.ndarray:
    """alpha_s(g) = unvec(e^{s D} vec g); an algebra automorphism for derivations D."""
    m = g.shape[0]
    return unvec(expm(s * D) @ vec(g), m)


def delta_trotter(D, x, t: float, n: int) -> np.ndarray:
    """G-component of (exp(t x / n), t / n)^n in G x_alpha R."""
    D, x, m = _dims(D, x)
    g = expm(t * x / n)
    step = expm((t / n) * D)
    out = np.eye(m, dtype=complex)
    cur = vec(g)
    for _ in range(n):
        out = out @ unvec(cur, m)
        cur = step @ cur
    return out


def delta_exact(D, x, t: float) -> np.ndarray:
    """Solution of delta' = delta * alpha_s(x), delta(0) = 1 (tight ODE tolerances)."""
    D, x, m = _dims(D, x)
    if t == 0:
        return np.eye(m, dtype=complex)

    def rhs(s, y):
        dl = unvec(y[: m * m] + 1j * y[m * m:], m)
        ax = unvec(expm(s * D) @ vec(x), m)
        dv = vec(dl @ ax)
        return np.concatenate([dv.real, dv.imag])

    y0 = np.concatenate([vec(np.eye(m)).real, np.zeros(m * m)])
    sol = solve_ivp(rhs, (0.0, t), y0, method="DOP853", rtol=1e-13, atol=1e-14)
    y = sol.y[:, -1]
    return unvec(y[: m * m] + 1j * y[m * m:], m)


@dataclass
class FlowResult:
    delta_g: np.ndarray
    defect: float

    def to_json(self):
        return {"defect": self.defect,
                "delta_g_re": self.delta_g.real.tolist(), "delta_g_im": self.delta_g.imag.tolist()}


def perturbed_flow(D, x, t: float, n: int) -> FlowResult:
    """Trotter approximation of delta(t) and the defect of Ad(delta) e^{tD} = e^{t(ad x + D)}."""
    D, x, m = _dims(D, x)
    if n < 1:
        raise InputError("n must be positive")
    _check_derivation(D, m)
    dg = delta_trotter(D, x, t, n)
    lhs = Ad_matrix(dg) @ expm(t * D)
    rhs = expm(t * (ad_matrix(x) + D))
    return FlowResult(dg, float(np.linalg.norm(lhs - rhs, 2)))


def flow_homomorphism_defect(D, x, pairs) -> float:
    """max defect of Phi(g, t) = (g delta(t), t) as a map G x_beta R -> G x_alpha R.

    ``pairs`` lists ((g1, t1), (g2, t2)); beta_t = Ad(delta(t)) alpha_t.
    """
    D, x, m = _dims(D, x)
    worst = 0.0
    cache = {}

    def delta(t):
        if t not in cache:
            cache[t] = delta_exact(D, x, t)
        return cache[t]

    for (g1, t1), (g2, t2) in pairs:
        d1 = delta(t1)
        beta_g2 = d1 @ alpha_flow(D, t1, g2) @ np.linalg.inv(d1)
        left = g1 @ beta_g2 @ delta(t1 + t2)
        right = g1 @ d1 @ alpha_flow(D, t1, g2 @ delta(t2))
        worst = max(worst, float(np.linalg.norm(left - right, 2)))
    return worst
