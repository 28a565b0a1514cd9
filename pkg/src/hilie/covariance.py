"""Diagonal one-parameter automorphism groups and covariant extensions.

alpha_t(g) = exp(t D) g exp(-t D) with D = diag(i d_j).  The energy of a
T-weight vector v_nu in the covariant extension is chi_d(nu - nu_0), where
chi_d(x) = sum_j d_j x_j.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import as_op, check_kind
from .errors import (InputError, LatticeMismatch, NotHermitian, NotInRootLattice,
                     UndecidableTail)
from .sequences import SCAN, DiagonalSequence, Q, as_q, q_to_json
from .weight import Weight
from .weyl import weight_set_contains

TWO_PI = 2 * math.pi


def _num_json(v):
    return q_to_json(v) if isinstance(v, Fraction) else v


@dataclass
class EigenPartition:
    blocks: List[Tuple[object, object]]            # (eigenvalue, dim or "inf")
    families: List[dict] = field(default_factory=list)
    center_generators: List[Tuple[object, float]] = field(default_factory=list)

    def finite_dim_total(self) -> int:
        return sum(d for _, d in self.blocks if d != "inf")

    def to_json(self):
        return {
            "blocks": [[_num_json(v), d] for v, d in self.blocks],
            "families": self.families,
            "center_generators": [[_num_json(v), n] for v, n in self.center_generators],
        }


def fixed_point_decomposition(d: DiagonalSequence, N: int) -> EigenPartition:
    """Eigenspace blocks of diag(d) seen through a window of size N.

    Window indices are grouped by value.  A parity class of the tail on
    which the law is constant contributes an infinite block; a parity class
    on which it is strictly monotone contributes a family of
    one-dimensional blocks (no eigenvalue repeats).  Values shared between
    the window and the scanned part of a family are merged.
    """
    if N < 1:
        raise InputError("window must be positive")
    const_vals = {}
    fam_parts = []
    for parity in (0, 1):
        part = d.law.parity_part(parity)
        if not part or set(part) == {Q(0)}:
            const_vals[parity] = part.get(Q(0), Q(0))
        else:
            fam_parts.append(parity)
    counts = {}
    for j in range(1, N + 1):
        v = d(j)
        counts[v] = counts.get(v, 0) + 1
    # tail indices off the constant classes, over a finite scan range;
    # beyond it family values are taken to be pairwise distinct
    tail_idx = {}
    for j in range(N + 1, max(N, d.table_end) + SCAN + 1):
        v = d(j)
        if const_vals.get(j % 2) == v:
            continue
        tail_idx.setdefault(v, []).append(j)
    inf_values = set(const_vals.values())
    blocks = []
    gens = []
    for v in sorted(set(counts) | inf_values | set(tail_idx)):
        if v in inf_values:
            blocks.append((v, "inf"))
            continue
        idx = tail_idx.get(v, [])
        if v not in counts and len(idx) == 1 and idx[0] > d.table_end:
            continue                      # ordinary member of a tail family
        dim = counts.get(v, 0) + len(idx)
        blocks.append((v, dim))
        gens.append((v, TWO_PI * math.sqrt(dim)))
    families = []
    if fam_parts:
        same = len(fam_parts) == 2 and d.law.parity_part(0) == d.law.parity_part(1)
        for parity in ([None] if same else fam_parts):
            part = d.law.parity_part(0 if parity is None else parity)
            p, c = max(part.items())
            families.append({
                "parity": "all" if parity is None else ("even" if parity == 0 else "odd"),
                "direction": "increasing" if (c > 0) == (p > 0) else "decreasing",
                "dim": 1,
                "center_norm": TWO_PI,
            })
    return EigenPartition(blocks, families, gens)


def diagonal_fixes_torus(H, N: Optional[int] = None, tol: float = 1e-10) -> dict:
    """Eigenbasis of a hermitian window H and whether H is already diagonal."""
    a = np.asarray(as_op(H).entries)
    if N is not None and a.shape[0] != N:
        raise InputError("window size does not match H")
    if np.abs(a - a.conj().T).max() > tol * max(1.0, np.abs(a).max()):
        raise NotHermitian("H is not hermitian")
    w, v = np.linalg.eigh(a)
    off = a - np.diag(np.diag(a))
    return {
        "diagonalizable": True,
        "fixes_diagonal_masa": bool(np.abs(off).max() <= tol) if a.size else True,
        "eigenvalues": w,
        "conjugator": v,
    }


def _finite_vector(elt: Weight) -> List[Fraction]:
    if elt.tail_const != 0:
        raise NotInRootLattice("lattice elements have finite support")
    return elt.window(max(elt.end, 1))


def chi_d(d: DiagonalSequence, elt: Weight):
    """sum_j elt_j d_j for elt in the root lattice Z[Delta] of kind A."""
    vec = _finite_vector(elt)
    if any(v.denominator != 1 for v in vec) or sum(vec) != 0:
        raise NotInRootLattice("element is not an integer vector with coordinate sum 0")
    return sum((v * d(j) for j, v in enumerate(vec, start=1) if v), Q(0))


@dataclass
class WeightSet:
    weights: List[Weight]
    window: int

    def __post_init__(self):
        if not self.weights:
            raise InputError("weight sets are non-empty")
        for w in self.weights:
            if w.tail_const != 0 or w.end > self.window:
                raise InputError("weights must be supported in the window")

    def vectors(self):
        return [w.window(self.window) for w in self.weights]

    def to_json(self):
        return {"window": self.window, "weights": [w.to_json() for w in self.weights]}

    @classmethod
    def from_json(cls, obj) -> "WeightSet":
        if not isinstance(obj, dict):
            raise InputError("weight set must be an object")
        extra = set(obj) - {"window", "weights"}
        if extra:
            raise InputError(f"unknown weight set fields: {sorted(extra)}")
        try:
            return cls([Weight.from_json(w) for w in obj["weights"]], int(obj["window"]))
        except KeyError as exc:
            raise InputError(f"weight set is missing field {exc}") from exc


def energy_spectrum(P: WeightSet, nu0: Weight, d: DiagonalSequence) -> list:
    """Sorted multiset {chi_d(nu - nu0) : nu in P}."""
    out = []
    for nu in P.weights:
        try:
            out.append(chi_d(d, nu - nu0))
        except NotInRootLattice as exc:
            raise LatticeMismatch(f"weight {nu!r} is not in nu0 + Z[Delta]") from exc
    return sorted(out)


# --------------------------------------------------------------------------
# semiboundedness of the orbit pairing


def _rearrangement_min(kind, lam, dv):
    if kind == "A":
        return sum(a * b for a, b in zip(sorted(lam, reverse=True), sorted(dv)))
    a = sorted((abs(x) for x in lam), reverse=True)
    b = sorted((abs(x) for x in dv), reverse=True)
    best = sum(x * y for x, y in zip(a, b))
    if kind == "D":
        sign = 1
        for x in list(lam) + [-y for y in dv]:
            sign = 0 if x == 0 else (sign if x > 0 else -sign)
        if sign < 0:
            best -= 2 * a[-1] * b[-1]
    return -best


def wsembo_window_min(kind: str, lam: Sequence, dv: Sequence):
    """min over the window group W_n of <w lam - lam, d> (closed form)."""
    kind = check_kind(kind)
    base = sum(a * b for a, b in zip(lam, dv))
    return _rearrangement_min(kind, lam, dv) - base


def wsembo_bruteforce(kind: str, lam: Sequence, dv: Sequence):
    """Exhaustive enumeration of all window group elements (n <= 7)."""
    kind = check_kind(kind)
    n = len(lam)
    if n > 7:
        raise InputError("exhaustive enumeration is capped at window 7")
    lam_q = [as_q(v) for v in lam]
    d_q = [as_q(v) for v in dv]
    den = math.lcm(*[x.denominator for x in lam_q + d_q])
    li = np.array([int(x * den) for x in lam_q], dtype=np.int64)
    di = np.array([int(x * den) for x in d_q], dtype=np.int64)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    if kind == "A":
        signs = np.ones((1, n), dtype=np.int64)
    else:
        signs = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int64)
        if kind == "D":
            signs = signs[(signs < 0).sum(axis=1) % 2 == 0]
    moved = li[perms] * di                          # (P, n)
    vals = moved @ signs.T                          # (P, S)
    best = int(vals.min()) - int(li @ di)
    return Fraction(best, den * den)


@dataclass(frozen=True)
class WsemboResult:
    value: object
    finite: bool
    reason: str

    def to_json(self):
        return {"value": _num_json(self.value), "finite": self.finite, "reason": self.reason}


def wsembo_infimum(lam: Weight, d: DiagonalSequence, N: int, kind: str = "A") -> WsemboResult:
    """Window minimum of <w lam - lam, d> plus the verdict on the full group.

    The full infimum is -infinity exactly when some entry of lam can be
    carried into the tail where it pairs with unboundedly favourable values
    of d: positive entries against d unbounded below, negative entries
    against d unbounded above (kind A), or any nonzero entry against d
    unbounded on either side once signs may flip (kinds B, C, D).
    """
    kind = check_kind(kind)
    if lam.tail_const != 0:
        raise InputError("lambda must be finitely supported")
    if lam.end > N:
        raise InputError("lambda must be supported in the window")
    vec = lam.window(N)
    if any(v.denominator != 1 for v in vec) and kind in ("A", "C"):
        raise InputError("lambda must be integral")
    dv = [d(j) for j in range(1, N + 1)]
    value = wsembo_window_min(kind, vec, dv)
    below, above = d.bounded_below(), d.bounded_above()
    has_pos = any(v > 0 for v in vec)
    has_neg = any(v < 0 for v in vec)
    if kind == "A":
        if has_pos and not below:
            return WsemboResult(value, False, "positive entry can move to where d -> -inf")
        if has_neg and not above:
            return WsemboResult(value, False, "negative entry can move to where d -> +inf")
    elif (has_pos or has_neg) and not (below and above):
        return WsemboResult(value, False, "nonzero entry can move to where |d| -> inf")
    return WsemboResult(value, True, "d bounded on the relevant side")


# --------------------------------------------------------------------------
# ground states


def ground_state_admissible(P0: WeightSet, d: DiagonalSequence, N: Optional[int] = None) -> bool:
    """Whether every nu in P0 sits at the bottom of its own energy spectrum.

    Equivalent to: nu_n <= nu_m whenever d_n > d_m (n, m in the window).
    With energy chi_d(mu - nu) a unit moved from index n to index m lowers
    the energy by d_n - d_m, and that move stays inside the weight set of
    nu exactly when nu_n > nu_m.
    """
    N = P0.window if N is None else N
    dv = [d(j) for j in range(1, N + 1)]
    for vec in P0.vectors():
        vec = vec + [Q(0)] * (N - len(vec))
        for n in range(N):
            for m in range(N):
                if dv[n] > dv[m] and vec[n] > vec[m]:
                    return False
    return True


def weight_set_points(nu: Sequence) -> List[list]:
    """All integer points of conv(S_n nu) cap (nu + Z[Delta_A]) in the window."""
    n = len(nu)
    lo, hi = int(min(nu)), int(max(nu))
    lam = Weight.finite(nu)
    out = []
    total = sum(nu)
    for pt in itertools.product(range(lo, hi + 1), repeat=n):
        if sum(pt) != total:
            continue
        if weight_set_contains("A", lam, Weight.finite(pt), window=n):
            out.append(list(pt))
    return out


def ground_state_by_energy(P0: WeightSet, d: DiagonalSequence) -> bool:
    """Energy-side test: min over P_nu of chi_d(mu - nu) is 0 for every nu in P0."""
    N = P0.window
    dv = [d(j) for j in range(1, N + 1)]
    for vec in P0.vectors():
        if any(Fraction(v).denominator != 1 for v in vec):
            raise InputError("ground-state energy test needs integer weights")
        energies = [sum((m - v) * x for m, v, x in zip(mu, vec, dv)) for mu in weight_set_points(vec)]
        if min(energies) < 0:
            return False
    return True


def spectral_ordering_check(blocks: Sequence) -> bool:
    """sup spec_mu <= inf spec_nu for all block labels mu < nu."""
    items = []
    for mu, vals in blocks:
        vals = list(vals)
        if not vals:
            raise InputError("block spectra are non-empty")
        items.append((mu, min(vals), max(vals)))
    labels = [m for m, _, _ in items]
    if len(set(labels)) != len(labels):
        raise InputError("block labels must be distinct")
    items.sort()
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i][2] > items[j][1]:
                return False
    return True


def id_semibounded(d: DiagonalSequence) -> dict:
    """Boundedness of the hermitian generator's spectrum from table and tail law."""
    if not isinstance(d, DiagonalSequence):
        raise UndecidableTail("semiboundedness is decided for structured sequences only")
    return {"below": d.bounded_below(), "above": d.bounded_above()}
