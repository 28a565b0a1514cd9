"""The cocycles omega_d on u_2, their classes, and the group cocycle Theta.

Storage convention: a DiagonalSequence holds the real sequence (d_j); the
skew-hermitian operator it stands for is ``D = diag(i d_j)``.  With this,

    omega_d(x, y) = tr(D [x, y])
    Theta(g)      = g D g^-1 - D.

omega_d is a coboundary iff d - c is square-summable for some real c, and
it vanishes iff d is constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import unitary_group

from .core import Tail, TruncOp, as_op, commutator
from .errors import InputError, MalformedPartition, NotSkew, NotUnitary, UndecidableTail
from .sequences import DiagonalSequence, q_to_json

UNITARY_TOL = 1e-10


def _diag_window(d: DiagonalSequence, n: int) -> np.ndarray:
    return 1j * np.array(d.values(n), dtype=float)


def omega_d(d: DiagonalSequence, x, y) -> float:
    """tr(diag(i d) [x, y]) for skew-hermitian windowed x, y."""
    x, y = as_op(x), as_op(y)
    if not x.is_skew() or not y.is_skew():
        raise NotSkew("omega_d takes skew-hermitian arguments")
    c = commutator(x, y)
    dd = _diag_window(d, c.n)
    return float(np.real(np.sum(dd * np.diag(c.entries))))


def trace_pairing(d: DiagonalSequence, z) -> float:
    """Real pairing z -> tr(diag(i d) z) for a windowed z."""
    z = as_op(z)
    return float(np.real(np.sum(_diag_window(d, z.n) * np.diag(z.entries))))


@dataclass(frozen=True)
class CocycleClass:
    verdict: str                      # "Zero" | "Coboundary" | "Nontrivial"
    shift: Optional[object] = None    # the constant c (exact) for Zero/Coboundary
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.shift is not None:
            out["shift"] = q_to_json(self.shift)
        out["evidence"] = self.evidence
        return out


def cocycle_class(d: DiagonalSequence) -> CocycleClass:
    """Zero / Coboundary(c) / Nontrivial from the table and tail law."""
    if not isinstance(d, DiagonalSequence):
        raise UndecidableTail("cocycle classes are decided for structured sequences only")
    c = d.constant_value()
    if c is not None:
        return CocycleClass("Zero", c, {"constant": q_to_json(c)})
    shift = d.l2_shift()
    if shift is not None:
        value, partial, bracket = d.sum_sq_evidence(shift)
        ev = {"tail_sum": value, "partial_sum": partial, "l2_norm": math.sqrt(value)}
        if bracket is not None:
            ev["integral_bracket"] = list(bracket)
        return CocycleClass("Coboundary", shift, ev)
    lim_even, lim_odd = d.limits()
    if lim_even != lim_odd:
        why = "parity classes have different limits"
    elif math.isinf(lim_even):
        why = "sequence is unbounded"
    else:
        why = "decay of d - lim is too slow for square-summability"
    return CocycleClass("Nontrivial", None, {
        "witness": why,
        "limits": [_lim_json(lim_even), _lim_json(lim_odd)],
    })


def _lim_json(v):
    if isinstance(v, float):
        return "inf" if v > 0 else "-inf"
    return q_to_json(v)


def one_param_equivalent(d1: DiagonalSequence, d2: DiagonalSequence) -> bool:
    """omega_{d1} and omega_{d2} differ by a coboundary."""
    return cocycle_class(d1 - d2).verdict in ("Zero", "Coboundary")


def _unitary_window(g) -> np.ndarray:
    if isinstance(g, TruncOp):
        if not (g.tail.kind == "scalar" and g.tail.value == 1):
            raise NotUnitary("g must have identity tail")
        a = np.asarray(g.entries)
    else:
        a = np.asarray(g, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("g must be a square matrix")
    if np.abs(a.conj().T @ a - np.eye(a.shape[0])).max() > UNITARY_TOL:
        raise NotUnitary("g is not unitary to 1e-10")
    return a


def _d_matrix(d, n: int) -> np.ndarray:
    if isinstance(d, DiagonalSequence):
        return np.diag(_diag_window(d, n))
    dm = as_op(d)
    if dm.n > n:
        raise InputError("d window exceeds the window of g")
    a = dm.pad(n).entries
    if np.abs(a - np.diag(np.diag(a))).max() > 0:
        raise InputError("d must be diagonal")
    return np.array(a)


def theta(d, g) -> TruncOp:
    """Theta(g) = g D g^-1 - D; g unitary on the window with identity tail."""
    u = _unitary_window(g)
    dm = _d_matrix(d, u.shape[0])
    return TruncOp(u @ dm @ u.conj().T - dm, Tail.zero())


def affine_coadjoint(d, g, alpha) -> TruncOp:
    """g alpha g^-1 + Theta(g)."""
    u = _unitary_window(g)
    a = as_op(alpha)
    if not a.is_skew():
        raise NotSkew("alpha must be skew-hermitian")
    n = max(u.shape[0], a.n)
    if a.n > u.shape[0]:
        big = np.eye(n, dtype=complex)
        big[: u.shape[0], : u.shape[0]] = u
        u = big
    am = a.pad(n).entries
    dm = _d_matrix(d, n)
    return TruncOp(u @ am @ u.conj().T + u @ dm @ u.conj().T - dm, Tail.zero())


def haar_unitary(n: int, rng) -> np.ndarray:
    return unitary_group.rvs(n, random_state=rng) if n > 1 else np.array([[np.exp(2j * np.pi * rng.random())]])


@dataclass(frozen=True)
class ThetaStats:
    max_norm: float
    cls: CocycleClass
    a_priori_bound: Optional[float]

    def to_json(self):
        return {"max_norm": self.max_norm, "class": self.cls.to_json(),
                "a_priori_bound": self.a_priori_bound}


def theta_orbit_stats(d: DiagonalSequence, N: int, samples: int, seed: int) -> ThetaStats:
    """Largest ||Theta(g)||_2 over Haar-random window unitaries."""
    if N < 1 or samples < 1:
        raise InputError("N and samples must be positive")
    rng = np.random.default_rng(seed)
    dm = np.diag(_diag_window(d, N))
    best = 0.0
    for _ in range(samples):
        u = haar_unitary(N, rng)
        best = max(best, float(np.linalg.norm(u @ dm @ u.conj().T - dm)))
    cls = cocycle_class(d)
    bound = None
    if cls.verdict == "Zero":
        bound = 0.0
    elif cls.verdict == "Coboundary":
        bound = 2 * cls.evidence["l2_norm"]
    return ThetaStats(best, cls, bound)


TAGS = ("identity", "zero", "hs", "nonhs")


def u_res_contains(g_blocks, partition) -> bool:
    """Whether every off-diagonal block g_ij (i != j) is Hilbert-Schmidt.

    ``partition`` lists (eigenvalue, dim) with dim a positive int or "inf";
    ``g_blocks[i][j]`` is a finite matrix or one of the tags identity, zero,
    hs, nonhs.
    """
    parts = list(partition)
    if not parts:
        raise MalformedPartition("empty partition")
    dims = []
    seen = set()
    for item in parts:
        try:
            ev, dim = item
        except (TypeError, ValueError) as exc:
            raise MalformedPartition("partition entries are (eigenvalue, dim) pairs") from exc
        if ev in seen:
            raise MalformedPartition(f"repeated eigenvalue {ev}")
        seen.add(ev)
        if dim in ("inf", math.inf, None):
            dims.append(math.inf)
        elif isinstance(dim, int) and not isinstance(dim, bool) and dim > 0:
            dims.append(dim)
        else:
            raise MalformedPartition(f"bad block dimension {dim!r}")
    k = len(dims)
    if len(g_blocks) != k or any(len(row) != k for row in g_blocks):
        raise MalformedPartition("block grid does not match the partition")
    ok = True
    for i in range(k):
        for j in range(k):
            b = g_blocks[i][j]
            if isinstance(b, str):
                tag = b.lower()
                if tag not in TAGS:
                    raise MalformedPartition(f"unknown block tag {b!r}")
                if tag == "identity" and dims[i] != dims[j]:
                    raise MalformedPartition("identity block between blocks of different size")
                if i == j:
                    continue
                if tag == "nonhs" or (tag == "identity" and math.isinf(dims[i])):
                    ok = False
            else:
                m = np.asarray(b)
                if m.ndim != 2:
                    raise MalformedPartition("matrix blocks must be 2-d")
                for ax, dim in zip(m.shape, (dims[i], dims[j])):
                    if not math.isinf(dim) and ax != dim:
                        raise MalformedPartition("matrix block shape does not match dims")
    return ok
