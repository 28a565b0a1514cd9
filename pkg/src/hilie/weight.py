"""Weights J -> (1/2)Z with finite exceptions over a structured tail.

A weight is stored as a :class:`DiagonalSequence` whose values must lie in
(1/2)Z.  Its tail is reported as one of three kinds:

``const``  the tail law is a constant c;
``two``    the tail alternates between two values by parity, which is the
           normal form of every two-valued pattern built from the named
           bases below (each differs from "evens" or "odds" in finitely
           many places);
``law``    any other exact law, e.g. lambda_j = j.

Named bases for two-valued tails: ``evens``, ``odds`` and ``geq``.  The
latter is the half line {n >= param} of Z transported to J = {1, 2, ...}
through the interleaving 0 -> 1, n -> 2n (n > 0), n -> 2|n| + 1 (n < 0).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from .errors import InputError, MalformedWeight
from .sequences import DiagonalSequence, Q, TailLaw, _ipow, as_q, q_to_json


def z_to_j(n: int) -> int:
    """Interleaving bijection Z -> J."""
    if n == 0:
        return 1
    return 2 * n if n > 0 else 2 * (-n) + 1


def j_to_z(j: int) -> int:
    if j < 1:
        raise InputError(f"index {j} is not in J")
    if j == 1:
        return 0
    return j // 2 if j % 2 == 0 else -(j - 1) // 2


def _law_values_in_lattice(law: TailLaw, offset: Fraction, parity: int) -> bool:
    """Whether law(j) - offset is an integer for all j >= 1 of the given parity.

    The parity part is a polynomial when all exponents are non-negative
    integers; a degree-D polynomial is integer valued on an arithmetic
    progression iff it is integer on D+1 consecutive terms.
    """
    part = law.parity_part(parity)
    if any(p < 0 or p.denominator != 1 for p in part):
        return False
    deg = int(max(part)) if part else 0
    first = 2 if parity == 0 else 1
    for i in range(deg + 1):
        j = first + 2 * i
        v = sum((c * _ipow(j, p) for p, c in part.items()), Fraction(0)) - offset
        if v.denominator != 1:
            return False
    return True


class Weight:
    """A weight lambda: J -> (1/2)Z."""

    __slots__ = ("seq",)

    def __init__(self, seq: DiagonalSequence):
        if not seq.law.is_exact():
            raise MalformedWeight("weight tail laws need integer exponents")
        for j, v in seq.table.items():
            if not isinstance(v, Fraction) or (2 * v).denominator != 1:
                raise MalformedWeight(f"value {v} at index {j} is not in (1/2)Z")
        for parity in (0, 1):
            if not (_law_values_in_lattice(seq.law, Q(0), parity)
                    or _law_values_in_lattice(seq.law, Q(1, 2), parity)):
                raise MalformedWeight("tail law leaves (1/2)Z")
        self.seq = seq

    # constructors
    @classmethod
    def finite(cls, values: Iterable, tail=0) -> "Weight":
        return cls(DiagonalSequence.finite([as_q(v) for v in values], tail))

    @classmethod
    def from_dict(cls, entries: Dict[int, object], tail=0) -> "Weight":
        return cls(DiagonalSequence({int(j): as_q(v) for j, v in entries.items()}, TailLaw.const(tail)))

    @classmethod
    def two_valued(cls, a, b, base: str = "evens", param: Optional[int] = None,
                   add: Iterable[int] = (), remove: Iterable[int] = (),
                   exceptions: Optional[Dict[int, object]] = None) -> "Weight":
        a, b = as_q(a), as_q(b)
        if a == b:
            raise MalformedWeight("two-valued tail needs distinct values")
        add, remove = {int(j) for j in add}, {int(j) for j in remove}
        if add & remove:
            raise MalformedWeight("an index cannot be both added and removed")
        member = _base_pattern(base, param)
        if base in ("evens", "geq"):
            law = TailLaw({(1, Q(0)): (a + b) / 2, (-1, Q(0)): (a - b) / 2})
        else:
            law = TailLaw({(1, Q(0)): (a + b) / 2, (-1, Q(0)): (b - a) / 2})
        reach = max([3] + list(add) + list(remove) + [2 * abs(param or 0) + 3])
        table = {}
        for j in range(1, reach + 1):
            inside = (member(j) or j in add) and j not in remove
            table[j] = a if inside else b
        for j, v in (exceptions or {}).items():
            table[int(j)] = as_q(v)
        return cls(DiagonalSequence(table, law))

    @classmethod
    def from_law(cls, law: TailLaw, table: Optional[Dict[int, object]] = None) -> "Weight":
        return cls(DiagonalSequence({int(j): as_q(v) for j, v in (table or {}).items()}, law))

    # access
    def __call__(self, j: int) -> Fraction:
        return self.seq(j)

    @property
    def exceptional(self) -> Dict[int, Fraction]:
        return dict(self.seq.table)

    @property
    def law(self) -> TailLaw:
        return self.seq.law

    @property
    def tail_kind(self) -> str:
        if self.seq.law.constant_value() is not None:
            return "const"
        e, o = self.seq.law.parity_part(0), self.seq.law.parity_part(1)
        if set(e) <= {Q(0)} and set(o) <= {Q(0)}:
            return "two"
        return "law"

    @property
    def tail_const(self) -> Optional[Fraction]:
        return self.seq.law.constant_value()

    def tail_values(self):
        """Values the tail takes infinitely often (const and two kinds only)."""
        if self.tail_kind == "law":
            return None
        e = self.seq.law.parity_part(0).get(Q(0), Q(0))
        o = self.seq.law.parity_part(1).get(Q(0), Q(0))
        return frozenset({e, o})

    @property
    def end(self) -> int:
        """Last index carrying an exceptional value (0 if none)."""
        return self.seq.table_end

    def window(self, n: int) -> List[Fraction]:
        return [self(j) for j in range(1, n + 1)]

    def is_finite_support(self) -> bool:
        return self.tail_const == 0

    def __eq__(self, other):
        return isinstance(other, Weight) and self.seq == other.seq

    def __hash__(self):
        return hash(self.seq)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.seq + other.seq)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.seq - other.seq)

    def __neg__(self):
        return Weight(-self.seq)

    def __repr__(self):
        vals = ", ".join(str(v) for v in self.window(max(self.end, 1)))
        return f"Weight([{vals}], tail={self.law.describe()})"

    # JSON
    def to_json(self):
        kind = self.tail_kind
        if kind == "const":
            return {"except": {str(j): q_to_json(v) for j, v in self.seq.table.items()},
                    "tail": {"kind": "const", "value": q_to_json(self.tail_const)}}
        if kind == "law":
            return {"except": {str(j): q_to_json(v) for j, v in self.seq.table.items()},
                    "tail": {"kind": "law", "law": self.law.to_json()}}
        a = self.seq.law.parity_part(0).get(Q(0), Q(0))
        b = self.seq.law.parity_part(1).get(Q(0), Q(0))
        add, remove, exc = [], [], {}
        for j, v in self.seq.table.items():
            if v == a:
                add.append(j)
            elif v == b:
                remove.append(j)
            else:
                exc[str(j)] = q_to_json(v)
        out = {"tail": {"kind": "two", "a": q_to_json(a), "b": q_to_json(b), "base": "evens",
                        "add": add, "remove": remove}}
        if exc:
            out["except"] = exc
        return out

    @classmethod
    def from_json(cls, obj) -> "Weight":
        if isinstance(obj, list):
            return cls.finite(obj)
        if not isinstance(obj, dict):
            raise MalformedWeight("weight must be an object or a list")
        extra = set(obj) - {"except", "tail"}
        if extra:
            raise MalformedWeight(f"unknown weight fields: {sorted(extra)}")
        exc = obj.get("except", {})
        if not isinstance(exc, dict):
            raise MalformedWeight("'except' must be an object")
        try:
            exc = {int(k): as_q(v) for k, v in exc.items()}
        except ValueError as e:
            raise MalformedWeight(f"bad index in 'except': {e}") from e
        tail = obj.get("tail", {"kind": "const", "value": 0})
        if not isinstance(tail, dict) or "kind" not in tail:
            raise MalformedWeight("weight tail must be an object with a 'kind'")
        kind = tail["kind"]
        allowed = {"const": {"value"}, "two": {"a", "b", "base", "param", "add", "remove"},
                   "law": {"law"}}
        if kind not in allowed:
            raise MalformedWeight(f"unknown weight tail kind {kind!r}")
        extra = set(tail) - allowed[kind] - {"kind"}
        if extra:
            raise MalformedWeight(f"unknown tail fields: {sorted(extra)}")
        try:
            if kind == "const":
                return cls.from_dict(exc, tail.get("value", 0))
            if kind == "law":
                return cls.from_law(TailLaw.from_json(tail["law"]), exc)
            return cls.two_valued(tail["a"], tail["b"], tail.get("base", "evens"),
                                  tail.get("param"), tail.get("add", []),
                                  tail.get("remove", []), exc)
        except KeyError as e:
            raise MalformedWeight(f"weight tail is missing field {e}") from e


def _base_pattern(base: str, param):
    if base == "evens":
        return lambda j: j % 2 == 0
    if base == "odds":
        return lambda j: j % 2 == 1
    if base == "geq":
        if param is None:
            raise MalformedWeight("base 'geq' needs an integer param")
        k = int(param)
        return lambda j: j_to_z(j) >= k
    raise MalformedWeight(f"unknown base pattern {base!r}")


def indicator_of_z_halfline(k: int) -> Weight:
    """chi of {n in Z : n >= k}, carried to J by the interleaving."""
    return Weight.two_valued(1, 0, "geq", k)


class MSet:
    """A subset M of J for the chi_M family: finite, co-finite or infinite/co-infinite."""

    __slots__ = ("kind", "elements", "pattern")

    def __init__(self, kind: str, elements: Iterable[int] = (), pattern: Optional[Weight] = None):
        if kind not in ("finite", "cofinite", "infinite"):
            raise InputError(f"unknown set kind {kind!r}")
        self.kind = kind
        self.elements = frozenset(int(j) for j in elements)
        if kind == "infinite":
            if pattern is None or pattern.tail_kind != "two" or pattern.tail_values() != {Q(0), Q(1)}:
                raise InputError("infinite sets need a 0/1 two-valued indicator")
        self.pattern = pattern

    @classmethod
    def finite(cls, elements):
        return cls("finite", elements)

    @classmethod
    def cofinite(cls, complement):
        return cls("cofinite", complement)

    @classmethod
    def from_indicator(cls, w: Weight) -> "MSet":
        return cls("infinite", pattern=w)

    def contains(self, j: int) -> bool:
        if self.kind == "finite":
            return j in self.elements
        if self.kind == "cofinite":
            return j not in self.elements
        return self.pattern(j) == 1

    def indicator(self) -> Weight:
        if self.kind == "finite":
            return Weight.from_dict({j: 1 for j in self.elements}, 0)
        if self.kind == "cofinite":
            return Weight.from_dict({j: 0 for j in self.elements}, 1)
        return self.pattern

    def to_json(self):
        if self.kind == "infinite":
            return {"kind": "infinite", "indicator": self.pattern.to_json()}
        return {"kind": self.kind, "elements": sorted(self.elements)}

    @classmethod
    def from_json(cls, obj) -> "MSet":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputError("set descriptor must be an object with a 'kind'")
        extra = set(obj) - {"kind", "elements", "indicator"}
        if extra:
            raise InputError(f"unknown set fields: {sorted(extra)}")
        if obj["kind"] == "infinite":
            return cls.from_indicator(Weight.from_json(obj.get("indicator")))
        return cls(obj["kind"], obj.get("elements", []))
