"""Structured real sequences indexed by J = {1, 2, 3, ...}.

A :class:`DiagonalSequence` is a finite table of exceptional values sitting
on top of a closed-form tail law.  The tail law is a finite linear
combination of terms ``c * s**j * j**p`` with ``s`` in {+1, -1} and ``p``
rational.  This covers constants, power laws, alternating sequences and
affine sequences, and it is closed under sums and products, which is what
makes the summability questions below decidable.

On each parity class (j even, j odd) a law collapses to an ordinary
generalized polynomial ``sum_p c_p j**p``; all asymptotic decisions are
made from the leading exponent of these two parity parts.
"""
from __future__ import annotations

import math
import numbers
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple, Union

import numpy as np

from .errors import InputError, NotTraceClass, UndecidableTail

Q = Fraction
Number = Union[int, Fraction, float]

# Exact scan length used when an infimum, supremum or absolute sum has to be
# read off before the tail settles into its asymptotic regime.
SCAN = 4096
# Partial-sum length before the Euler-Maclaurin remainder takes over.
PARTIAL = 10000


def as_q(v) -> Fraction:
    """Convert user input to an exact rational.

    Floats are read through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than its binary expansion.
    """
    if isinstance(v, bool):
        raise InputError(f"expected a number, got {v!r}")
    if isinstance(v, Fraction):
        return v
    if isinstance(v, numbers.Integral):
        return Fraction(int(v))
    if isinstance(v, numbers.Real):
        v = float(v)
        if not math.isfinite(v):
            raise InputError(f"non-finite value {v!r}")
        return Fraction(repr(v))
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse number {v!r}") from exc
    raise InputError(f"expected a number, got {type(v).__name__}")


def q_to_json(q: Fraction):
    """Integers stay integers; other rationals become ``"p/q"`` strings."""
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def _ipow(j: int, p: Fraction):
    if p.denominator == 1:
        return Fraction(j) ** p.numerator
    return float(j) ** float(p)


# --------------------------------------------------------------------------
# parity parts: plain dicts exponent -> coefficient


def _poly_mul(a: Dict[Fraction, Fraction], b: Dict[Fraction, Fraction]):
    out: Dict[Fraction, Fraction] = {}
    for p1, c1 in a.items():
        for p2, c2 in b.items():
            out[p1 + p2] = out.get(p1 + p2, 0) + c1 * c2
    return {p: c for p, c in out.items() if c != 0}


def _poly_lead(poly: Dict[Fraction, Fraction]) -> Optional[Tuple[Fraction, Fraction]]:
    if not poly:
        return None
    p = max(poly)
    return p, poly[p]


def _poly_eval(poly, j: int):
    return sum((c * _ipow(j, p) for p, c in poly.items()), Fraction(0))


def _em_tail(p: Fraction, a: int, h: float) -> float:
    """sum_{i > a} (i + h)**p for p < -1, by Euler-Maclaurin at x = a + h."""
    x = a + h
    pf = float(p)
    integral = -(x ** (pf + 1)) / (pf + 1)
    f0 = x ** pf
    f1 = pf * x ** (pf - 1)
    f3 = pf * (pf - 1) * (pf - 2) * x ** (pf - 3)
    f5 = pf * (pf - 1) * (pf - 2) * (pf - 3) * (pf - 4) * x ** (pf - 5)
    return integral - f0 / 2 - f1 / 12 + f3 / 720 - f5 / 30240


def _parity_tail_sum(poly, parity: int, m: int) -> float:
    """sum over j > 2m with j of the given parity of sum_p c_p j**p."""
    total = 0.0
    for p, c in poly.items():
        scale = float(c) * 2.0 ** float(p)
        if parity == 0:
            total += scale * _em_tail(p, m, 0.0)
        else:
            total += scale * ((m + 0.5) ** float(p) + _em_tail(p, m, 0.5))
    return total


def _parity_integral_bounds(poly, parity: int, m: int):
    """Integral bracket for a single positive decreasing parity term."""
    if len(poly) != 1:
        return None
    (p, c), = poly.items()
    if c <= 0 or p >= -1:
        return None
    pf = float(p)
    scale = float(c) * 2.0 ** pf
    # terms f(i) = scale * (i + h)^p for i from i0 on
    h, i0 = (0.0, m + 1) if parity == 0 else (0.5, m)

    def prim(x):
        return -(x ** (pf + 1)) / (pf + 1)

    lower = scale * prim(i0 + h)
    upper = scale * ((i0 + h) ** pf + prim(i0 + h))
    return lower, upper


# --------------------------------------------------------------------------


class TailLaw:
    """Finite combination of ``c * s**j * j**p`` terms, stored exactly."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Tuple[int, Fraction], Fraction]] = None):
        clean = {}
        for (s, p), c in (terms or {}).items():
            if s not in (1, -1):
                raise InputError("tail sign must be +1 or -1")
            c = as_q(c)
            if c != 0:
                key = (s, as_q(p))
                clean[key] = clean.get(key, 0) + c
        self.terms = {k: v for k, v in sorted(clean.items()) if v != 0}

    # constructors
    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        return cls({(1, Q(0)): as_q(c)})

    @classmethod
    def power(cls, a, p):
        return cls({(1, as_q(p)): as_q(a)})

    @classmethod
    def alternating(cls, a, p=0):
        return cls({(-1, as_q(p)): as_q(a)})

    @classmethod
    def affine(cls, a, b):
        return cls({(1, Q(1)): as_q(a), (1, Q(0)): as_q(b)})

    # evaluation
    def value(self, j: int):
        total = Fraction(0)
        for (s, p), c in self.terms.items():
            sign = 1 if (s == 1 or j % 2 == 0) else -1
            total = total + sign * c * _ipow(j, p)
        return total

    def float_values(self, js: np.ndarray) -> np.ndarray:
        """Vectorized float evaluation at the integer indices ``js``."""
        js = np.asarray(js, dtype=float)
        out = np.zeros_like(js)
        alt = np.where(np.mod(js, 2) == 0, 1.0, -1.0)
        for (s, p), c in self.terms.items():
            term = float(c) * js ** float(p)
            out += term if s == 1 else alt * term
        return out

    def parity_part(self, parity: int) -> Dict[Fraction, Fraction]:
        out: Dict[Fraction, Fraction] = {}
        for (s, p), c in self.terms.items():
            sign = 1 if (s == 1 or parity == 0) else -1
            out[p] = out.get(p, 0) + sign * c
        return {p: c for p, c in sorted(out.items()) if c != 0}

    def lead(self, parity: int):
        return _poly_lead(self.parity_part(parity))

    def limit(self, parity: int):
        """Limit along a parity class: a Fraction, or +-inf."""
        ld = self.lead(parity)
        if ld is None:
            return Fraction(0)
        p, c = ld
        if p > 0:
            return math.inf if c > 0 else -math.inf
        if p == 0:
            return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self) -> Optional[Fraction]:
        even, odd = self.parity_part(0), self.parity_part(1)
        if even != odd:
            return None
        if not even:
            return Fraction(0)
        if set(even) == {Q(0)}:
            return even[Q(0)]
        return None

    def is_exact(self) -> bool:
        return all(p.denominator == 1 for (_, p) in self.terms)

    # arithmetic
    def __add__(self, other: "TailLaw") -> "TailLaw":
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return TailLaw(t)

    def scale(self, a) -> "TailLaw":
        a = as_q(a)
        return TailLaw({k: a * v for k, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TailLaw") -> "TailLaw":
        t: Dict[Tuple[int, Fraction], Fraction] = {}
        for (s1, p1), c1 in self.terms.items():
            for (s2, p2), c2 in other.terms.items():
                k = (s1 * s2, p1 + p2)
                t[k] = t.get(k, 0) + c1 * c2
        return TailLaw(t)

    def shift(self, c) -> "TailLaw":
        return self - TailLaw.const(c)

    def __eq__(self, other):
        return isinstance(other, TailLaw) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self):
        return f"TailLaw({self.describe()})"

    def describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (s, p), c in self.terms.items():
            f = str(c)
            if s == -1:
                f += "*(-1)^j"
            if p != 0:
                f += f"*j^{p}"
            parts.append(f)
        return " + ".join(parts)

    # JSON
    def to_json(self):
        if not self.terms:
            return {"law": "zero"}
        items = list(self.terms.items())
        if len(items) == 1:
            (s, p), c = items[0]
            if s == 1 and p == 0:
                return {"law": "const", "value": q_to_json(c)}
            if s == 1:
                return {"law": "power", "a": q_to_json(c), "p": q_to_json(p)}
            return {"law": "alt", "a": q_to_json(c), "p": q_to_json(p)}
        if (len(items) == 2 and items[0][0] == (1, Q(0)) and items[1][0] == (1, Q(1))):
            return {"law": "affine", "a": q_to_json(items[1][1]), "b": q_to_json(items[0][1])}
        return {"law": "sum", "terms": [TailLaw({k: v}).to_json() for k, v in items]}

    @classmethod
    def from_json(cls, obj) -> "TailLaw":
        if not isinstance(obj, dict) or "law" not in obj:
            raise InputError("tail law must be an object with a 'law' field")
        law = obj["law"]
        allowed = {
            "zero": set(),
            "const": {"value"},
            "power": {"a", "p"},
            "alt": {"a", "p"},
            "affine": {"a", "b"},
            "sum": {"terms"},
        }
        if law not in allowed:
            raise InputError(f"unknown tail law {law!r}")
        extra = set(obj) - allowed[law] - {"law"}
        if extra:
            raise InputError(f"unknown fields for law {law!r}: {sorted(extra)}")
        try:
            if law == "zero":
                return cls.zero()
            if law == "const":
                return cls.const(obj["value"])
            if law == "power":
                return cls.power(obj["a"], obj["p"])
            if law == "alt":
                return cls.alternating(obj["a"], obj.get("p", 0))
            if law == "affine":
                return cls.affine(obj["a"], obj["b"])
        except KeyError as exc:
            raise InputError(f"tail law {law!r} is missing field {exc}") from exc
        out = cls.zero()
        for t in obj["terms"]:
            out = out + cls.from_json(t)
        return out


class DiagonalSequence:
    """Real sequence (d_j), j >= 1: exceptional table over a tail law."""

    __slots__ = ("table", "law")

    def __init__(self, table: Optional[Dict[int, Number]] = None, law: Optional[TailLaw] = None):
        self.law = law if law is not None else TailLaw.zero()
        tab = {}
        for j, v in (table or {}).items():
            j = int(j)
            if j < 1:
                raise InputError(f"sequence index must be >= 1, got {j}")
            v = v if isinstance(v, float) and not self.law.is_exact() else as_q(v)
            if v != self.law.value(j):
                tab[j] = v
        self.table = dict(sorted(tab.items()))

    # constructors
    @classmethod
    def const(cls, c, table=None):
        return cls(table, TailLaw.const(c))

    @classmethod
    def power(cls, a, p, table=None):
        return cls(table, TailLaw.power(a, p))

    @classmethod
    def alternating(cls, a, p=0, table=None):
        return cls(table, TailLaw.alternating(a, p))

    @classmethod
    def affine(cls, a, b, table=None):
        return cls(table, TailLaw.affine(a, b))

    @classmethod
    def finite(cls, values: Iterable[Number], tail=0):
        """(v_1, ..., v_n) followed by a constant tail."""
        return cls({i + 1: v for i, v in enumerate(values)}, TailLaw.const(tail))

    # evaluation
    def __call__(self, j: int):
        if j in self.table:
            return self.table[j]
        return self.law.value(j)

    def values(self, n: int, start: int = 1):
        """Float values d_start .. d_{start+n-1}."""
        return self.float_range(start, start + n - 1).tolist()

    def float_range(self, start: int, stop: int) -> np.ndarray:
        """Float values d_start .. d_stop as an array."""
        js = np.arange(start, stop + 1)
        out = self.law.float_values(js)
        for j, v in self.table.items():
            if start <= j <= stop:
                out[j - start] = float(v)
        return out

    def exact_values(self, n: int):
        return [self(j) for j in range(1, n + 1)]

    @property
    def table_end(self) -> int:
        return max(self.table) if self.table else 0

    # asymptotics
    def limits(self):
        return self.law.limit(0), self.law.limit(1)

    def bounded_below(self) -> bool:
        return all(lim != -math.inf for lim in self.limits())

    def bounded_above(self) -> bool:
        return all(lim != math.inf for lim in self.limits())

    def constant_value(self) -> Optional[Fraction]:
        c = self.law.constant_value()
        if c is None:
            return None
        if any(v != c for v in self.table.values()):
            return None
        return c

    def is_constant(self) -> bool:
        return self.constant_value() is not None

    def square_summable_after_shift(self, c) -> bool:
        law = self.law.shift(as_q(c))
        for parity in (0, 1):
            ld = law.lead(parity)
            if ld is not None and ld[0] >= Q(-1, 2):
                return False
        return True

    def l2_shift(self) -> Optional[Fraction]:
        """The only shift c that can make (d_j - c) square-summable.

        Both parity limits have to agree and be finite; that common limit is
        then the unique candidate.
        """
        a, b = self.limits()
        if a != b or not isinstance(a, Fraction):
            return None
        return a if self.square_summable_after_shift(a) else None

    def abs_summable(self) -> bool:
        for parity in (0, 1):
            ld = self.law.lead(parity)
            if ld is not None and ld[0] >= -1:
                return False
        return True

    def _scan_end(self, start: int) -> int:
        return max(start, self.table_end) + SCAN

    def inf_from(self, start: int = 1):
        """inf_{j >= start} d_j (float or -inf)."""
        lims = self.limits()
        if -math.inf in lims:
            return -math.inf
        end = self._scan_end(start)
        vals = self.float_range(start, end).tolist()
        return min(vals + [float(x) for x in lims if x != math.inf])

    def sup_from(self, start: int = 1):
        lims = self.limits()
        if math.inf in lims:
            return math.inf
        end = self._scan_end(start)
        vals = self.float_range(start, end).tolist()
        return max(vals + [float(x) for x in lims if x != -math.inf])

    # sums
    def sum_sq_beyond(self, n: int, c=0) -> float:
        """sum_{j > n} (d_j - c)**2; +inf when not square-summable."""
        c = as_q(c)
        if not self.square_summable_after_shift(c):
            return math.inf
        m = (max(n, self.table_end) + PARTIAL) // 2 + 1
        big = 2 * m
        head = math.fsum((self.float_range(n + 1, big) - float(c)) ** 2)
        law = self.law.shift(c)
        tail = 0.0
        for parity in (0, 1):
            part = law.parity_part(parity)
            tail += _parity_tail_sum(_poly_mul(part, part), parity, m)
        return head + tail

    def sum_sq_evidence(self, c=0):
        """Sum of (d_j - c)^2 over J with an integral bracket for the tail.

        Returns (value, partial, bracket) where bracket is (lo, hi) for the
        remainder when the squared tail is a single decreasing power on each
        parity class, else None.
        """
        c = as_q(c)
        if not self.square_summable_after_shift(c):
            return math.inf, math.inf, None
        m = (self.table_end + PARTIAL) // 2 + 1
        big = 2 * m
        partial = math.fsum((self.float_range(1, big) - float(c)) ** 2)
        law = self.law.shift(c)
        lo = hi = 0.0
        ok = True
        for parity in (0, 1):
            part = law.parity_part(parity)
            sq = _poly_mul(part, part)
            if not sq:
                continue
            br = _parity_integral_bounds(sq, parity, m)
            if br is None:
                ok = False
                break
            lo += br[0]
            hi += br[1]
        value = self.sum_sq_beyond(0, c)
        return value, partial, ((partial + lo, partial + hi) if ok else None)

    def abs_sum_beyond(self, n: int) -> float:
        """sum_{j > n} |d_j|; raises NotTraceClass when divergent."""
        if not self.abs_summable():
            raise NotTraceClass("sequence is not absolutely summable")
        m = (max(n, self.table_end) + PARTIAL) // 2 + 1
        big = 2 * m
        head = math.fsum(np.abs(self.float_range(n + 1, big)))
        tail = 0.0
        for parity in (0, 1):
            part = self.law.parity_part(parity)
            if not part:
                continue
            j_ref = big + 2 - parity
            sign = 1.0 if float(_poly_eval(part, j_ref)) >= 0 else -1.0
            lead_sign = 1.0 if _poly_lead(part)[1] > 0 else -1.0
            if sign != lead_sign:
                raise UndecidableTail("tail changes sign beyond the scan window")
            tail += sign * _parity_tail_sum(part, parity, m)
        return head + tail

    def positive_part_sum(self) -> float:
        """sum_j max(d_j, 0) for an absolutely summable sequence."""
        if not self.abs_summable():
            raise NotTraceClass("sequence is not absolutely summable")
        m = (self.table_end + PARTIAL) // 2 + 1
        big = 2 * m
        head = math.fsum(np.maximum(self.float_range(1, big), 0.0))
        tail = 0.0
        for parity in (0, 1):
            part = self.law.parity_part(parity)
            if part and _poly_lead(part)[1] > 0:
                tail += _parity_tail_sum(part, parity, m)
        return head + tail

    def is_eventually_zero(self) -> bool:
        return self.law.is_zero()

    # arithmetic
    def _combine(self, other: "DiagonalSequence", law: TailLaw, op):
        idx = set(self.table) | set(other.table)
        return DiagonalSequence({j: op(self(j), other(j)) for j in idx}, law)

    def __add__(self, other):
        other = _coerce(other)
        return self._combine(other, self.law + other.law, lambda a, b: a + b)

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        other = _coerce(other)
        return self._combine(other, self.law - other.law, lambda a, b: a - b)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return self._combine(other, self.law * other.law, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return DiagonalSequence({j: -v for j, v in self.table.items()}, -self.law)

    def __eq__(self, other):
        return (isinstance(other, DiagonalSequence) and self.law == other.law
                and self.table == other.table)

    def __hash__(self):
        return hash((tuple(self.table.items()), self.law))

    def __repr__(self):
        return f"DiagonalSequence(table={self.table}, law={self.law.describe()})"

    # JSON
    def to_json(self):
        tab = {str(j): (q_to_json(v) if isinstance(v, Fraction) else v) for j, v in self.table.items()}
        return {"table": tab, "tail": self.law.to_json()}

    @classmethod
    def from_json(cls, obj) -> "DiagonalSequence":
        if isinstance(obj, list):
            return cls.finite(obj)
        if not isinstance(obj, dict):
            raise InputError("sequence must be an object or a list")
        extra = set(obj) - {"table", "tail"}
        if extra:
            raise InputError(f"unknown sequence fields: {sorted(extra)}")
        table = obj.get("table", {})
        if not isinstance(table, dict):
            raise InputError("sequence table must be an object")
        try:
            tab = {int(k): as_q(v) for k, v in table.items()}
        except ValueError as exc:
            raise InputError(f"bad table index: {exc}") from exc
        law = TailLaw.from_json(obj.get("tail", {"law": "zero"}))
        return cls(tab, law)


def _coerce(x) -> DiagonalSequence:
    if isinstance(x, DiagonalSequence):
        return x
    return DiagonalSequence.const(x)
