"""Weyl-group action on weights: orbits, canonical forms, weight sets.

The Weyl groups of A_J, B_J = C_J and D_J are the finitely supported
permutations of J, extended by finitely many sign changes for B and C and
by an even number of sign changes for D.  An element acts on a weight by

    (w lambda)_j = s_j * lambda_{p^-1(j)}.

Most functions accept an optional ``window``.  Without it J is the infinite
index set; with it the group acts on the finite window {1..window} only.
The two readings differ for kind D, where the infinite tail supplies zero
entries that absorb a stray sign change.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import check_kind
from .errors import (IllegalSigns, IncomparableTails, InputError, NotTraceClass,
                     UndecidableTail, UnsupportedTail, WindowTooLarge)
from .sequences import DiagonalSequence, Q, as_q
from .weight import MSet, Weight, _law_values_in_lattice

LP_WINDOW_CAP = 7


class WeylElement:
    """Finitely supported signed permutation of J."""

    __slots__ = ("perm", "signs")

    def __init__(self, perm: Optional[Dict[int, int]] = None, signs: Iterable[int] = ()):
        p = {int(a): int(b) for a, b in (perm or {}).items() if int(a) != int(b)}
        if sorted(p) != sorted(p.values()):
            raise InputError("perm is not a bijection of its support")
        if any(a < 1 for a in p):
            raise InputError("indices start at 1")
        self.perm = dict(sorted(p.items()))
        self.signs = frozenset(int(j) for j in signs)
        if any(j < 1 for j in self.signs):
            raise InputError("indices start at 1")

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def from_window(cls, images: Sequence[int], signs: Sequence[int] = ()):
        """images[i-1] = p(i) (1-based) on a window; signs lists flipped targets."""
        return cls({i + 1: int(v) for i, v in enumerate(images)}, signs)

    def p(self, j: int) -> int:
        return self.perm.get(j, j)

    def p_inv(self, j: int) -> int:
        for a, b in self.perm.items():
            if b == j:
                return a
        return j

    def support(self) -> set:
        return set(self.perm) | set(self.signs)

    def check(self, kind: str) -> "WeylElement":
        kind = check_kind(kind)
        if kind == "A" and self.signs:
            raise IllegalSigns("kind A has no sign changes")
        if kind == "D" and len(self.signs) % 2:
            raise IllegalSigns("kind D needs an even number of sign changes")
        return self

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        idx = self.support() | other.support()
        perm = {i: self.p(other.p(i)) for i in idx}
        inv1 = {b: a for a, b in self.perm.items()}
        signs = set()
        for t in idx | {self.p(other.p(i)) for i in idx}:
            s1 = t in self.signs
            s2 = inv1.get(t, t) in other.signs
            if s1 != s2:
                signs.add(t)
        return WeylElement(perm, signs)

    def inverse(self) -> "WeylElement":
        inv = {b: a for a, b in self.perm.items()}
        return WeylElement(inv, {inv.get(t, t) for t in self.signs})

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.perm == other.perm and self.signs == other.signs

    def __hash__(self):
        return hash((tuple(self.perm.items()), self.signs))

    def __repr__(self):
        return f"WeylElement(perm={self.perm}, signs={sorted(self.signs)})"

    def act_vector(self, vec: Sequence) -> list:
        """Action on a window vector (support must lie inside the window)."""
        n = len(vec)
        if any(j > n for j in self.support()):
            raise InputError("element moves indices outside the window")
        out = [None] * n
        for j in range(1, n + 1):
            v = vec[self.p_inv(j) - 1]
            out[j - 1] = -v if j in self.signs else v
        return out

    def to_json(self):
        return {"perm": {str(a): b for a, b in self.perm.items()}, "signs": sorted(self.signs)}

    @classmethod
    def from_json(cls, obj) -> "WeylElement":
        if not isinstance(obj, dict):
            raise InputError("Weyl element must be an object")
        extra = set(obj) - {"perm", "signs"}
        if extra:
            raise InputError(f"unknown Weyl element fields: {sorted(extra)}")
        perm = obj.get("perm", {})
        if isinstance(perm, list):
            return cls.from_window(perm, obj.get("signs", []))
        return cls({int(a): int(b) for a, b in perm.items()}, obj.get("signs", []))


def weyl_act(kind: str, w: WeylElement, lam: Weight) -> Weight:
    w.check(kind)
    idx = w.support() | set(lam.seq.table)
    table = {}
    for j in idx:
        v = lam(w.p_inv(j))
        table[j] = -v if j in w.signs else v
    return Weight(DiagonalSequence(table, lam.law))


def random_weyl_element(kind: str, n: int, rng) -> WeylElement:
    """Uniform element of the window group W_n of the kind."""
    kind = check_kind(kind)
    images = [int(v) + 1 for v in rng.permutation(n)]
    signs = []
    if kind != "A":
        signs = [j for j in range(1, n + 1) if rng.random() < 0.5]
        if kind == "D" and len(signs) % 2:
            signs = signs[:-1] if signs else []
    return WeylElement.from_window(images, signs)


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class WeightClass:
    integral: bool
    bounded: bool
    continuous: bool

    def to_json(self):
        return dict(self.__dict__)


def _all_in(lam: Weight, offset: Fraction) -> bool:
    if any((v - offset).denominator != 1 for v in lam.seq.table.values()):
        return False
    return all(_law_values_in_lattice(lam.law, offset, parity) for parity in (0, 1))


def classify_weight(kind: str, lam: Weight) -> WeightClass:
    kind = check_kind(kind)
    ints, halves = _all_in(lam, Q(0)), _all_in(lam, Q(1, 2))
    if kind == "C":
        integral = ints
    else:
        # kind A asks for integral pairwise differences, B/D for values all in Z
        # or all in 1/2 + Z; on (1/2)Z-valued weights the two conditions agree
        integral = ints or halves
    bounded = lam.tail_kind in ("const", "two")
    continuous = lam.tail_const == 0
    return WeightClass(integral, bounded, continuous)


# --------------------------------------------------------------------------
# orbits


def _signature(kind, vals):
    if kind == "A":
        return sorted(vals)
    return sorted(abs(v) for v in vals)


def _sign_product(vals) -> int:
    s = 1
    for v in vals:
        if v == 0:
            return 0
        if v < 0:
            s = -s
    return s


def _window_vec(lam: Weight, window: int) -> List[Fraction]:
    if lam.end > window and any(lam(j) != 0 for j in range(window + 1, lam.end + 1)):
        raise InputError("weight has entries outside the window")
    if lam.tail_const != 0:
        raise InputError("window semantics needs finitely supported weights")
    return lam.window(window)


def _vec_orbit_equivalent(kind, a, b) -> bool:
    if _signature(kind, a) != _signature(kind, b):
        return False
    if kind == "D":
        pa = _sign_product(a)
        return pa == 0 or pa == _sign_product(b)
    return True


def orbit_equivalent(kind: str, lam: Weight, mu: Weight, window: Optional[int] = None) -> bool:
    """Whether mu lies in the Weyl orbit of lam."""
    kind = check_kind(kind)
    if window is not None:
        return _vec_orbit_equivalent(kind, _window_vec(lam, window), _window_vec(mu, window))
    tk = lam.tail_kind
    if tk != mu.tail_kind:
        raise IncomparableTails("weights have tails of different kinds")
    if tk == "two" and lam.tail_values() != mu.tail_values():
        raise IncomparableTails("two-valued tails over different value pairs")
    if lam.law != mu.law:
        # finitely supported elements change finitely many entries only
        return False
    diff = sorted(set(lam.seq.table) | set(mu.seq.table))
    a = [lam(j) for j in diff]
    b = [mu(j) for j in diff]
    if _signature(kind, a) != _signature(kind, b):
        return False
    if kind == "D":
        tail_vals = lam.tail_values()
        zero_in_tail = tail_vals is not None and Q(0) in tail_vals
        if tk == "law":
            zero_in_tail = any(lam(j) == 0 for j in range(lam.end + 1, lam.end + 64))
        pa = _sign_product(a)
        if not zero_in_tail and pa != 0 and pa != _sign_product(b):
            return False
    return True


def orbit_canonical(kind: str, lam: Weight, window: Optional[int] = None) -> Weight:
    """Orbit representative with deviations from the tail sorted descending."""
    kind = check_kind(kind)
    if window is not None:
        vec = _window_vec(lam, window)
        return Weight.finite(_canonical_vec(kind, vec, spare_zero=False), 0)
    if lam.tail_kind != "const":
        raise UnsupportedTail("canonical forms need a constant tail")
    c = lam.tail_const
    devs = [lam(j) for j in sorted(lam.seq.table)]
    if kind == "A":
        vals = sorted(devs, reverse=True)
        return Weight.from_dict({i + 1: v for i, v in enumerate(vals)}, c)
    # c == 0 lets D borrow a zero from the tail
    vals = _canonical_signed(kind, devs, c, spare_zero=(c == 0))
    return Weight.from_dict({i + 1: v for i, v in enumerate(vals)}, c)


def _canonical_vec(kind, vec, spare_zero):
    if kind == "A":
        return sorted(vec, reverse=True)
    out = sorted((abs(v) for v in vec), reverse=True)
    if kind == "D" and not spare_zero and _sign_product(vec) == -1:
        out[-1] = -out[-1]
    return out


def _canonical_signed(kind, devs, c, spare_zero):
    """B/C/D canonical list for deviations over a constant tail c."""
    flips = 0
    keep = []
    for v in devs:
        target = abs(v) if abs(v) != abs(c) else c
        if v != target:
            flips += 1
        if abs(v) != abs(c):
            keep.append(abs(v))
    keep.sort(reverse=True)
    if kind == "D" and not spare_zero and flips % 2 and Q(0) not in [abs(v) for v in devs]:
        if keep and keep[-1] != 0:
            keep[-1] = -keep[-1]
        else:
            keep.append(-c)
    return keep


def orbit_contains_bruteforce(kind: str, lam: Sequence, mu: Sequence) -> bool:
    """Exhaustive search for w in W_n with w lam = mu on a finite window.

    Dynamic programming over (position, used-index set, sign parity); every
    signed assignment is explored, no sorting shortcut is used.
    """
    kind = check_kind(kind)
    n = len(lam)
    if len(mu) != n:
        raise InputError("vectors of different length")
    lam = tuple(lam)
    mu = tuple(mu)
    signs = (1,) if kind == "A" else (1, -1)

    @lru_cache(maxsize=None)
    def go(pos, used, parity):
        if pos == n:
            return kind != "D" or parity == 0
        for i in range(n):
            if used >> i & 1:
                continue
            for s in signs:
                if s * lam[i] == mu[pos]:
                    if go(pos + 1, used | (1 << i), parity ^ (s < 0)):
                        return True
        return False

    return go(0, 0, 0)


def orbit_in_window(kind: str, vec: Sequence) -> List[tuple]:
    """All distinct images of vec under the window group W_n, sorted."""
    kind = check_kind(kind)
    n = len(vec)
    if n > LP_WINDOW_CAP:
        raise WindowTooLarge(f"orbit enumeration capped at window {LP_WINDOW_CAP}")
    seen = set()
    for perm in set(itertools.permutations(vec)):
        if kind == "A":
            seen.add(perm)
            continue
        nz = [i for i, v in enumerate(perm) if v != 0]
        for mask in range(1 << len(nz)):
            # odd flips are reachable in D only when a zero entry absorbs one
            if kind == "D" and bin(mask).count("1") % 2 and len(nz) == n:
                continue
            u = list(perm)
            for b, i in enumerate(nz):
                if mask >> b & 1:
                    u[i] = -u[i]
            seen.add(tuple(u))
    return sorted(seen)


# --------------------------------------------------------------------------
# weight sets P_lambda = conv(W lambda) cap (lambda + Z[Delta])


def lattice_contains(kind: str, d: Sequence) -> bool:
    """d in Z[Delta] for a finitely supported difference vector d."""
    kind = check_kind(kind)
    if any(Fraction(v).denominator != 1 for v in d):
        return False
    total = sum(d)
    if kind == "A":
        return total == 0
    if kind == "B":
        return True
    return total % 2 == 0


def lattice_contains_oracle(kind: str, d: Sequence) -> bool:
    """Same question answered by solving d = sum of simple roots exactly.

    The simple roots of the window root system form a Z-basis of its root
    lattice, so membership holds iff the unique rational coefficients are
    integers (and the system is consistent).
    """
    kind = check_kind(kind)
    n = max(len(d), 2)
    d = [as_q(v) for v in d] + [Q(0)] * (n - len(d))
    basis = []
    for j in range(n - 1):
        v = [Q(0)] * n
        v[j], v[j + 1] = Q(1), Q(-1)
        basis.append(v)
    if kind != "A":
        v = [Q(0)] * n
        if kind == "B":
            v[n - 1] = Q(1)
        elif kind == "C":
            v[n - 1] = Q(2)
        else:
            v[n - 2], v[n - 1] = Q(1), Q(1)
        basis.append(v)
    coeffs = _solve_exact([list(col) for col in zip(*basis)], d)
    return coeffs is not None and all(c.denominator == 1 for c in coeffs)


def _solve_exact(a: List[List[Fraction]], b: List[Fraction]):
    """Least-structure Gaussian elimination over Q; None if inconsistent."""
    rows, cols = len(a), len(a[0])
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(m[i][cols] != 0 for i in range(r, rows)):
        return None
    sol = [Q(0)] * cols
    for i, c in enumerate(piv_cols):
        sol[c] = m[i][cols]
    return sol


def majorized(mu: Sequence, lam: Sequence) -> bool:
    """mu is majorized by lam (same length): top-k sums and equal totals."""
    a = sorted(mu, reverse=True)
    b = sorted(lam, reverse=True)
    if sum(a) != sum(b):
        return False
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb:
            return False
    # bottom-k sums follow from top-k sums and equal totals; checked anyway
    sa = sb = 0
    for x, y in zip(reversed(a), reversed(b)):
        sa += x
        sb += y
        if sa < sb:
            return False
    return True


def weakly_majorized_abs(mu: Sequence, lam: Sequence) -> bool:
    a = sorted((abs(v) for v in mu), reverse=True)
    b = sorted((abs(v) for v in lam), reverse=True)
    sa = sb = 0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb:
            return False
    return True


def hull_contains_lp(kind: str, lam: Sequence, mu: Sequence) -> bool:
    """mu in conv(W_n lam) by LP feasibility over the enumerated orbit."""
    from scipy.optimize import linprog

    pts = np.array(orbit_in_window(kind, [Fraction(v) for v in lam]), dtype=float)
    target = np.array([float(v) for v in mu])
    m = len(pts)
    a_eq = np.vstack([pts.T, np.ones((1, m))])
    b_eq = np.concatenate([target, [1.0]])
    res = linprog(np.zeros(m), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return res.status == 0


def _pair_vectors(lam: Weight, mu: Weight, window: Optional[int]):
    if window is not None:
        return _window_vec(lam, window), _window_vec(mu, window), window
    n = max(lam.end, mu.end, 1)
    return lam.window(n), mu.window(n), n


def weight_set_contains(kind: str, lam: Weight, mu: Weight, window: Optional[int] = None,
                        method: str = "auto") -> bool:
    """Decide mu in conv(W lam) cap (lam + Z[Delta]).

    ``method`` is "auto" (majorization fast path where it applies, LP
    otherwise) or "lp" (lattice by exact simple-root solve, hull by LP).
    """
    kind = check_kind(kind)
    if method not in ("auto", "lp"):
        raise InputError(f"unknown method {method!r}")
    c_lam, c_mu = lam.tail_const, mu.tail_const
    if c_lam is None or c_mu is None:
        raise UnsupportedTail("weight sets need constant tails")
    if c_lam != c_mu:
        return False
    if window is None and c_lam != 0:
        if kind != "A":
            raise InputError("nonzero constant tails need a window for kinds B/C/D")
        shift = Weight.from_dict({}, c_lam)
        return weight_set_contains(kind, lam - shift, mu - shift, None, method)
    if window is not None and c_lam != 0:
        a = lam.window(window)
        b = mu.window(window)
        if lam.end > window or mu.end > window:
            raise InputError("weight has entries outside the window")
        n = window
    else:
        a, b, n = _pair_vectors(lam, mu, window)
    d = [y - x for x, y in zip(a, b)]
    half = any(Fraction(v).denominator != 1 for v in a + b)

    if method == "lp" or kind == "D" or half:
        if not lattice_contains_oracle(kind, d):
            return False
        if kind == "D" and window is None:
            # the infinite index set always offers a spare zero entry
            a, b = a + [Q(0)], b + [Q(0)]
        if len(a) > LP_WINDOW_CAP:
            raise WindowTooLarge(f"exact hull test is capped at window {LP_WINDOW_CAP}")
        return hull_contains_lp(kind, a, b)

    if not lattice_contains(kind, d):
        return False
    if kind == "A":
        return majorized(b, a)
    return weakly_majorized_abs(b, a)


# --------------------------------------------------------------------------
# support functionals of chi_M and momentum sets


def _exact_terms(x: DiagonalSequence):
    """Values of an eventually-zero sequence as exact rationals, else None."""
    if not x.law.is_zero():
        return None
    return [x(j) for j in range(1, x.table_end + 1)]


def _scan_values(x: DiagonalSequence):
    end = x.table_end + 4096
    return sorted((float(x(j)) for j in range(1, end + 1)), reverse=True)


def support_functional_chiM(M: MSet, x: DiagonalSequence, N: Optional[int] = None):
    """sup over the Weyl orbit of chi_M of the pairing with x.

    Infinite co-infinite M gives tr(x^+); finite M of size m gives the sum
    of the m largest positive entries; co-finite M gives tr(x) minus the
    m' smallest entries padded with zeros.  Exact (Fraction) for eventually
    zero x, float otherwise.  ``N`` only bounds where witnesses are sought.
    """
    if not x.abs_summable():
        raise NotTraceClass("x must be absolutely summable")
    vals = _exact_terms(x)
    if vals is not None:
        pos = sorted((v for v in vals if v > 0), reverse=True)
        neg = sorted(v for v in vals if v < 0)
        total = sum(vals, Q(0))
        if M.kind == "infinite":
            return sum(pos, Q(0))
        if M.kind == "finite":
            return sum(pos[: len(M.elements)], Q(0))
        return total - sum(neg[: len(M.elements)], Q(0))
    if M.kind == "infinite":
        return x.positive_part_sum()
    vals = _scan_values(x)
    if M.kind == "finite":
        m = len(M.elements)
        return math.fsum(v for v in vals[:m] if v > 0)
    total = x.positive_part_sum() - (-x).positive_part_sum()
    m = len(M.elements)
    return total - math.fsum(v for v in vals[::-1][:m] if v < 0)


def adapted_permutation(M: MSet, x: DiagonalSequence, N: int) -> WeylElement:
    """A finite permutation w with <w chi_M, x> = tr(x^+), for x supported in {1..N}.

    Works for infinite co-infinite M (the case where the supremum is tr(x^+));
    the needed swaps pull members of M into the positive part of x and push
    the rest out beyond the window.
    """
    if M.kind != "infinite":
        raise InputError("adapted permutations are built for infinite co-infinite M")
    if not x.law.is_zero() or x.table_end > N:
        raise InputError("x must be supported in the window")
    positive = {j for j in range(1, N + 1) if x(j) > 0}
    inside = {j for j in range(1, N + 1) if M.contains(j)}
    out_of_place = sorted(inside - positive)      # members sitting on non-positive entries
    missing = sorted(positive - inside)           # positive entries not covered by M
    far_in = (j for j in itertools.count(N + 1) if M.contains(j))
    far_out = (j for j in itertools.count(N + 1) if not M.contains(j))
    perm = {}
    for j in out_of_place:
        k = next(far_out)
        perm[j], perm[k] = k, j
    for j in missing:
        k = next(far_in)
        perm[j], perm[k] = k, j
    return WeylElement(perm)


def orbit_pairing(M: MSet, w: WeylElement, x: DiagonalSequence, N: int):
    """<w chi_M, x> for x supported in {1..N}."""
    total = Q(0)
    for j in range(1, N + 1):
        if M.contains(w.p_inv(j)):
            total += as_q(x(j))
    return total


def max_sampled_pairing(M: MSet, x: DiagonalSequence, N: int, samples: int, seed: int, spread: int = 8):
    """Largest pairing over random permutations of {1..N+spread} applied to chi_M."""
    rng = np.random.default_rng(seed)
    L = N + spread
    best = None
    for _ in range(samples):
        w = WeylElement.from_window([int(v) + 1 for v in rng.permutation(L)])
        val = orbit_pairing(M, w, x, N)
        best = val if best is None or val > best else best
    return best


def momentum_equivalent_chiM(M1: MSet, M2: MSet) -> bool:
    """Same momentum set for the representations attached to chi_M1, chi_M2."""
    inf1, inf2 = M1.kind == "infinite", M2.kind == "infinite"
    if inf1 and inf2:
        return True
    if inf1 != inf2:
        return False
    a, b = M1.indicator(), M2.indicator()
    if a.tail_const != b.tail_const:
        return False
    return orbit_equivalent("A", a, b)


# --------------------------------------------------------------------------
# toroidal character groups


def _lead_exponents(seq: DiagonalSequence):
    out = []
    for parity in (0, 1):
        ld = seq.law.lead(parity)
        out.append(ld)
    return out


def toroidal_character_contains(w: DiagonalSequence, lam: Weight) -> bool:
    """sum_j lam_j^2 / w_j < infinity, decided from the tail laws."""
    if any(lam(j).denominator != 1 for j in lam.seq.table):
        raise InputError("toroidal characters are integer sequences")
    if not _all_in(lam, Q(0)):
        raise InputError("toroidal characters are integer sequences")
    lw = _lead_exponents(w)
    ll = _lead_exponents(lam.seq)
    for parity in (0, 1):
        if ll[parity] is None:
            continue
        if lw[parity] is None or lw[parity][1] <= 0:
            raise UndecidableTail("w must stay positive along the tail")
        if 2 * ll[parity][0] - lw[parity][0] >= -1:
            return False
    return True


def toroidal_characters_all_finite(w: DiagonalSequence) -> bool:
    """Every character finitely supported iff w is bounded above."""
    for parity in (0, 1):
        ld = w.law.lead(parity)
        if ld is None or ld[1] <= 0:
            raise UndecidableTail("w must stay positive along the tail")
    return w.bounded_above()
