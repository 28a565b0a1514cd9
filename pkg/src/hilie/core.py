"""Windowed operators with decidable tails, Schatten norms and brackets.

A :class:`TruncOp` is an N x N complex block acting on e_1..e_N together
with a declared diagonal tail on e_{N+1}, e_{N+2}, ...  The tail is either
zero, a scalar multiple of the identity, or ``factor * diag(d_j)`` for a
structured :class:`~hilie.sequences.DiagonalSequence` (``factor`` is ``i``
by default, matching the skew convention used for diagonal generators).
Since the window and the tail live on orthogonal subspaces, every norm
splits into a window part and a closed-form tail part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import _parallel
from .errors import EmptyInput, IncompatibleTail, InputError, NormUndefined, UnknownKind
from .sequences import DiagonalSequence, NotTraceClass

KINDS = ("A", "B", "C", "D")


def check_kind(kind: str) -> str:
    k = str(kind).upper()
    if k not in KINDS:
        raise UnknownKind(f"unknown root-system kind {kind!r}")
    return k


class Tail:
    """Diagonal tail beyond the window: zero, scalar c, or factor * diag(d)."""

    __slots__ = ("kind", "value", "seq", "factor")

    def __init__(self, kind="zero", value=0j, seq: Optional[DiagonalSequence] = None, factor=1j):
        if kind not in ("zero", "scalar", "diag"):
            raise InputError(f"unknown tail kind {kind!r}")
        self.kind = kind
        self.value = complex(value) if kind == "scalar" else 0j
        self.seq = seq if kind == "diag" else None
        self.factor = complex(factor) if kind == "diag" else 0j
        if kind == "diag" and seq is None:
            raise InputError("diag tail needs a sequence")

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def scalar(cls, c):
        c = complex(c)
        return cls("scalar", c) if c != 0 else cls("zero")

    @classmethod
    def diag(cls, seq: DiagonalSequence, factor=1j):
        if complex(factor) == 0:
            return cls("zero")
        return cls("diag", seq=seq, factor=factor)

    def at(self, j: int) -> complex:
        if self.kind == "zero":
            return 0j
        if self.kind == "scalar":
            return self.value
        return self.factor * float(self.seq(j))

    def is_zero(self) -> bool:
        if self.kind == "zero":
            return True
        if self.kind == "diag":
            return self.seq.constant_value() == 0
        return False

    def hs_sq_beyond(self, n: int) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "scalar":
            return math.inf
        return abs(self.factor) ** 2 * self.seq.sum_sq_beyond(n)

    def abs_beyond(self, n: int) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "scalar":
            return math.inf
        if not self.seq.abs_summable():
            return math.inf
        return abs(self.factor) * self.seq.abs_sum_beyond(n)

    def sup_abs_beyond(self, n: int) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "scalar":
            return abs(self.value)
        lo, hi = self.seq.inf_from(n + 1), self.seq.sup_from(n + 1)
        return abs(self.factor) * max(abs(lo), abs(hi))

    def conj(self) -> "Tail":
        if self.kind == "scalar":
            return Tail.scalar(self.value.conjugate())
        if self.kind == "diag":
            return Tail.diag(self.seq, self.factor.conjugate())
        return self

    def scaled(self, a) -> "Tail":
        a = complex(a)
        if self.kind == "scalar":
            return Tail.scalar(a * self.value)
        if self.kind == "diag":
            return Tail.diag(self.seq, a * self.factor)
        return self

    def mul(self, other: "Tail") -> "Tail":
        if self.kind == "zero" or other.kind == "zero":
            return Tail.zero()
        if self.kind == "scalar":
            return other.scaled(self.value)
        if other.kind == "scalar":
            return self.scaled(other.value)
        return Tail.diag(self.seq * other.seq, self.factor * other.factor)

    def add(self, other: "Tail") -> "Tail":
        if self.kind == "zero":
            return other
        if other.kind == "zero":
            return self
        if self.kind == "scalar" and other.kind == "scalar":
            return Tail.scalar(self.value + other.value)
        if self.kind == "scalar":
            return other.add(self)
        # self is diag
        if other.kind == "scalar":
            ratio = other.value / self.factor
            if abs(ratio.imag) > 1e-15 * max(1.0, abs(ratio)):
                raise IncompatibleTail("scalar and diagonal tails are not proportional over R")
            return Tail.diag(self.seq + Fraction(repr(ratio.real)), self.factor)
        ratio = other.factor / self.factor
        if abs(ratio.imag) > 1e-15 * max(1.0, abs(ratio)):
            raise IncompatibleTail("diagonal tails with non-real factor ratio")
        return Tail.diag(self.seq + other.seq * Fraction(repr(ratio.real)), self.factor)

    def is_skew(self) -> bool:
        if self.kind == "zero":
            return True
        if self.kind == "scalar":
            return self.value.real == 0
        return self.factor.real == 0

    def to_json(self):
        if self.kind == "zero":
            return {"kind": "zero", "value": 0}
        if self.kind == "scalar":
            return {"kind": "scalar", "value": [self.value.real, self.value.imag]}
        out = {"kind": "diag", "value": self.seq.to_json()}
        if self.factor != 1j:
            out["factor"] = [self.factor.real, self.factor.imag]
        return out

    @classmethod
    def from_json(cls, obj) -> "Tail":
        if obj is None:
            return cls.zero()
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputError("tail must be an object with a 'kind' field")
        extra = set(obj) - {"kind", "value", "factor"}
        if extra:
            raise InputError(f"unknown tail fields: {sorted(extra)}")
        kind = obj["kind"]
        if kind == "zero":
            return cls.zero()
        if kind == "scalar":
            return cls.scalar(_complex_from_json(obj.get("value", 0)))
        if kind == "diag":
            factor = _complex_from_json(obj.get("factor", [0, 1]))
            return cls.diag(DiagonalSequence.from_json(obj.get("value")), factor)
        raise InputError(f"unknown tail kind {kind!r}")

    def __repr__(self):
        if self.kind == "zero":
            return "Tail.zero()"
        if self.kind == "scalar":
            return f"Tail.scalar({self.value})"
        return f"Tail.diag({self.seq!r}, factor={self.factor})"


def _complex_from_json(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InputError("complex values are [re, im] pairs")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise InputError(f"cannot read complex value from {v!r}")


class TruncOp:
    """Window matrix on e_1..e_n plus a diagonal tail on the rest."""

    __slots__ = ("entries", "tail", "basis_label")

    def __init__(self, entries, tail: Optional[Tail] = None, basis_label: str = "e"):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise InputError("window entries must be a non-empty square matrix")
        a.setflags(write=False)
        self.entries = a
        self.tail = tail if tail is not None else Tail.zero()
        self.basis_label = basis_label

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, n: int, tail_identity: bool = True):
        return cls(np.eye(n), Tail.scalar(1) if tail_identity else Tail.zero())

    @classmethod
    def diag(cls, seq: DiagonalSequence, n: int, factor=1j):
        """factor * diag(d) with window n and the rest in the tail."""
        vals = np.array(seq.values(n), dtype=complex) * complex(factor)
        return cls(np.diag(vals), Tail.diag(seq, factor))

    def pad(self, m: int) -> "TruncOp":
        """Same operator, window enlarged to m by moving tail entries in."""
        if m < self.n:
            raise InputError("cannot shrink a window")
        if m == self.n:
            return self
        a = np.zeros((m, m), dtype=complex)
        a[: self.n, : self.n] = self.entries
        for j in range(self.n + 1, m + 1):
            a[j - 1, j - 1] = self.tail.at(j)
        return TruncOp(a, self.tail, self.basis_label)

    def _aligned(self, other: "TruncOp"):
        m = max(self.n, other.n)
        return self.pad(m), other.pad(m)

    def __matmul__(self, other: "TruncOp") -> "TruncOp":
        a, b = self._aligned(other)
        return TruncOp(a.entries @ b.entries, a.tail.mul(b.tail), self.basis_label)

    def __add__(self, other: "TruncOp") -> "TruncOp":
        a, b = self._aligned(other)
        return TruncOp(a.entries + b.entries, a.tail.add(b.tail), self.basis_label)

    def __sub__(self, other: "TruncOp") -> "TruncOp":
        return self + other.scale(-1)

    def scale(self, c) -> "TruncOp":
        return TruncOp(complex(c) * self.entries, self.tail.scaled(c), self.basis_label)

    def adjoint(self) -> "TruncOp":
        return TruncOp(self.entries.conj().T, self.tail.conj(), self.basis_label)

    def is_skew(self, tol: float = 1e-12) -> bool:
        a = self.entries
        scale = max(1.0, float(np.abs(a).max()))
        return bool(np.abs(a + a.conj().T).max() <= tol * scale) and self.tail.is_skew()

    def is_unitary(self, tol: float = 1e-10) -> bool:
        if not (self.tail.kind == "scalar" and abs(abs(self.tail.value) - 1) <= tol):
            return False
        a = self.entries
        return bool(np.abs(a.conj().T @ a - np.eye(self.n)).max() <= tol)

    # norms
    def hs_norm(self) -> float:
        sq = self.tail.hs_sq_beyond(self.n)
        if math.isinf(sq):
            return math.inf
        return math.sqrt(float(np.sum(np.abs(self.entries) ** 2)) + sq)

    def trace_norm(self) -> float:
        t = self.tail.abs_beyond(self.n)
        if math.isinf(t):
            return math.inf
        return float(np.linalg.norm(self.entries, "nuc")) + t

    def op_norm(self) -> float:
        return max(float(np.linalg.norm(self.entries, 2)), self.tail.sup_abs_beyond(self.n))

    def to_json(self):
        return {
            "n": self.n,
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
            "tail": self.tail.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "TruncOp":
        if not isinstance(obj, dict):
            raise InputError("operator must be a JSON object")
        extra = set(obj) - {"n", "re", "im", "tail", "basis_label"}
        if extra:
            raise InputError(f"unknown operator fields: {sorted(extra)}")
        if "re" not in obj:
            raise InputError("operator needs an 're' matrix")
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise InputError("'re' and 'im' shapes differ")
        if "n" in obj and (re.ndim != 2 or obj["n"] != re.shape[0]):
            raise InputError("'n' does not match the matrix size")
        return cls(re + 1j * im, Tail.from_json(obj.get("tail")), obj.get("basis_label", "e"))

    def __repr__(self):
        return f"TruncOp(n={self.n}, tail={self.tail!r})"


def as_op(x) -> TruncOp:
    if isinstance(x, TruncOp):
        return x
    return TruncOp(x)


def hs_norm(x) -> float:
    """Hilbert-Schmidt norm over window plus tail (``inf`` if not in B_2)."""
    return as_op(x).hs_norm()


def trace_norm(x) -> float:
    return as_op(x).trace_norm()


def op_norm(x) -> float:
    return as_op(x).op_norm()


def commutator(x, y) -> TruncOp:
    """[x, y] = xy - yx.  Both tails are diagonal, so the bracket's tail is zero."""
    x, y = as_op(x), as_op(y)
    a, b = x._aligned(y)
    w = a.entries @ b.entries - b.entries @ a.entries
    return TruncOp(w, Tail.zero(), x.basis_label)


@dataclass(frozen=True)
class SchattenReport:
    op_x: float
    hs_y: float
    hs_xy: float
    trace_y: Optional[float]
    trace_xy: Optional[float]
    slack_hs: float
    slack_hs_trace: Optional[float]
    slack_trace: Optional[float]

    def ok(self, tol: float = 1e-10) -> bool:
        slacks = [self.slack_hs, self.slack_hs_trace, self.slack_trace]
        return all(s is None or s >= -tol for s in slacks)

    def to_json(self):
        return dict(self.__dict__)


def check_schatten(x, y, strict: bool = True) -> SchattenReport:
    """Slacks of ||XY||_2 <= ||X|| ||Y||_2, ||Y||_2 <= ||Y||_1, ||XY||_1 <= ||X|| ||Y||_1.

    With ``strict`` an infinite trace norm of Y raises NormUndefined;
    otherwise the two trace-class slacks are reported as None.
    """
    x, y = as_op(x), as_op(y)
    ox = x.op_norm()
    hy = y.hs_norm()
    if math.isinf(ox):
        raise NormUndefined("operator norm of X is infinite")
    if math.isinf(hy):
        raise NormUndefined("Y is not Hilbert-Schmidt")
    xy = x @ y
    hxy = xy.hs_norm()
    ty = y.trace_norm()
    if math.isinf(ty):
        if strict:
            raise NormUndefined("Y is not trace class")
        return SchattenReport(ox, hy, hxy, None, None, ox * hy - hxy, None, None)
    txy = xy.trace_norm()
    return SchattenReport(ox, hy, hxy, ty, txy, ox * hy - hxy, ty - hy, ox * ty - txy)


# --------------------------------------------------------------------------
# compact real forms and the bracket constant


def real_form_dim(kind: str, n: int) -> int:
    """Matrix size of the window model of the kind's compact real form."""
    kind = check_kind(kind)
    return {"A": n, "B": 2 * n + 1, "C": 2 * n, "D": 2 * n}[kind]


def form_norm(kind: str, x: np.ndarray) -> float:
    """Invariant Hilbert norm; kind C uses the quaternionic trace (half of the complex one)."""
    sq = float(np.real(np.vdot(x, x)))
    if check_kind(kind) == "C":
        sq /= 2
    return math.sqrt(sq)


def sample_real_form(kind: str, n: int, rng: np.random.Generator) -> np.ndarray:
    """Gaussian entries projected onto the kind's real form."""
    kind = check_kind(kind)
    if kind == "A":
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return (g - g.conj().T) / 2
    if kind in ("B", "D"):
        m = real_form_dim(kind, n)
        g = rng.standard_normal((m, m))
        return ((g - g.T) / 2).astype(complex)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = (a - a.conj().T) / 2
    b = (b + b.T) / 2
    return np.block([[a, b], [-b.conj(), a.conj()]])


def bracket_witness(kind: str, n: int):
    """x = i*coroot of a long root, y = x_alpha - x_alpha^* in the same window model."""
    kind = check_kind(kind)
    m = real_form_dim(kind, n)
    x = np.zeros((m, m), dtype=complex)
    y = np.zeros((m, m), dtype=complex)
    if kind == "A":
        # alpha = eps_1 - eps_2
        x[0, 0], x[1, 1] = 1j, -1j
        y[0, 1], y[1, 0] = 1, -1
    elif kind == "C":
        # alpha = 2 eps_1, coroot E_1; quaternionic unit j in the (1, n+1) block
        x[0, 0], x[n, n] = 1j, -1j
        y[0, n], y[n, 0] = 1, -1
    else:
        # alpha = eps_1 + eps_2 on planes (e_1, I e_1), (e_2, I e_2); the
        # coroot E_1 + E_2 rotates both planes, y spans the -4 eigenspace of ad_x^2
        for plane in (0, 1):
            a, b = 2 * plane, 2 * plane + 1
            x[b, a], x[a, b] = 1, -1
        y[0, 2], y[1, 3], y[2, 0], y[3, 1] = 1, -1, -1, 1
    return x, y


def bracket_ratio(kind: str, x: np.ndarray, y: np.ndarray) -> float:
    c = x @ y - y @ x
    return form_norm(kind, c) / (form_norm(kind, x) * form_norm(kind, y))


@dataclass(frozen=True)
class BracketNormReport:
    kind: str
    window: int
    trials: int
    sampled_max: float
    exact_bound: float
    witness_ratio: float

    def to_json(self):
        return dict(self.__dict__)


def estimate_bracket_norm(kind: str, N: int, trials: int, seed: int) -> BracketNormReport:
    """Sampled max of ||[x,y]|| / (||x|| ||y||) next to the exact constant c_g."""
    from .rootdata import cg_exact

    kind = check_kind(kind)
    if N < 4:
        raise InputError("window N must be at least 4")
    if trials < 1:
        raise InputError("trials must be positive")

    def run(rng, count):
        best = 0.0
        for _ in range(count):
            x = sample_real_form(kind, N, rng)
            y = sample_real_form(kind, N, rng)
            best = max(best, bracket_ratio(kind, x, y))
        return best

    sampled = max(_parallel.map_chunks(run, trials, seed))
    wx, wy = bracket_witness(kind, N)
    return BracketNormReport(kind, N, trials, sampled, cg_exact(kind), bracket_ratio(kind, wx, wy))


@dataclass(frozen=True)
class InfsumBound:
    finite: bool
    derived_bound: float
    inf_w: float
    sup_c: float

    def to_json(self):
        return dict(self.__dict__)


def weighted_sum_bracket_bound(pairs: Sequence, c_tail: Optional[DiagonalSequence] = None,
                               w_tail: Optional[DiagonalSequence] = None) -> InfsumBound:
    """Bracket bound for a weighted Hilbert sum of Lie algebras.

    ``pairs`` lists (c_j, w_j) for the first factors; optional sequences
    continue c and w beyond them (indexed from len(pairs)+1 on).  The sum is
    a Hilbert-Lie algebra iff inf w > 0, with bracket constant at most
    sup c_j / sqrt(inf w_j).
    """
    pairs = list(pairs)
    if not pairs and w_tail is None:
        raise EmptyInput("no (c_j, w_j) pairs given")
    if (c_tail is None) != (w_tail is None):
        raise InputError("c and w tails must be given together")
    cs = [float(c) for c, _ in pairs]
    ws = [float(w) for _, w in pairs]
    if any(c <= 0 for c in cs) or any(w <= 0 for w in ws):
        raise InputError("all c_j and w_j must be positive")
    start = len(pairs) + 1
    inf_w = min(ws) if ws else math.inf
    sup_c = max(cs) if cs else 0.0
    if w_tail is not None:
        tw = w_tail.inf_from(start)
        if tw < 0 or c_tail.inf_from(start) <= 0:
            raise InputError("all c_j and w_j must be positive")
        inf_w = min(inf_w, tw)
        sup_c = max(sup_c, c_tail.sup_from(start))
    finite = inf_w > 0
    bound = sup_c / math.sqrt(inf_w) if finite else math.inf
    return InfsumBound(finite, bound, inf_w, sup_c)


__all__ = [
    "KINDS", "Tail", "TruncOp", "hs_norm", "trace_norm", "op_norm", "commutator",
    "check_schatten", "SchattenReport", "estimate_bracket_norm", "BracketNormReport",
    "weighted_sum_bracket_bound", "InfsumBound", "bracket_witness", "sample_real_form",
    "form_norm", "real_form_dim", "NotTraceClass",
]
