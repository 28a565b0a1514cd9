"""Roots, coroots, reflections and the bracket constant for A_J, B_J, C_J, D_J.

Roots are written in the eps basis of Z^(J): a two-index root is
``sj*eps_j + sk*eps_k`` with j < k (shape ``diff`` when the signs differ,
``sum`` when they agree), and the single-index roots are ``sj*eps_j``
(shape ``eps``, kind B) and ``2*sj*eps_j`` (shape ``2eps``, kind C).

Norm conventions on the coroot side (all squared, all exact):

    A, C:  ||x||^2 = sum x_j^2
    B, D:  ||x||^2 = 2 sum x_j^2

and the dual conventions on weights are sum a_j^2 for A and C and
(1/2) sum a_j^2 for B and D.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .core import check_kind
from .errors import InputError, UndefinedPairing
from .sequences import Q, as_q, q_to_json
from .weight import Weight

SHAPE_RANK = {"diff": 0, "sum": 1, "eps": 2, "2eps": 3}
LEGAL_SHAPES = {
    "A": ("diff",),
    "B": ("diff", "sum", "eps"),
    "C": ("diff", "sum", "2eps"),
    "D": ("diff", "sum"),
}
# Factor in front of sum x_j^2 for coroot norms; the weight side uses its inverse.
COROOT_SCALE = {"A": Q(1), "B": Q(2), "C": Q(1), "D": Q(2)}


@dataclass(frozen=True, order=True)
class Root:
    kind: str
    shape: str
    j: int
    k: int = 0
    sj: int = 1
    sk: Optional[int] = None      # defaults to the sign the shape implies

    def __post_init__(self):
        kind = check_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.sk is None:
            object.__setattr__(self, "sk", -self.sj if self.shape == "diff" else self.sj)
        if self.shape not in SHAPE_RANK:
            raise InputError(f"unknown root shape {self.shape!r}")
        if self.shape not in LEGAL_SHAPES[kind]:
            raise InputError(f"shape {self.shape!r} is not a root of kind {kind}")
        if self.sj not in (1, -1) or self.sk not in (1, -1):
            raise InputError("root signs must be +1 or -1")
        if self.j < 1:
            raise InputError("root indices start at 1")
        if self.shape in ("diff", "sum"):
            if not (1 <= self.j < self.k):
                raise InputError("two-index roots need 1 <= j < k")
            if (self.shape == "diff") != (self.sj != self.sk):
                raise InputError("signs do not match the root shape")
        else:
            object.__setattr__(self, "k", 0)
            object.__setattr__(self, "sk", 1)

    def sort_key(self):
        return (SHAPE_RANK[self.shape], self.j, self.k, self.sj, self.sk)

    def vector(self) -> Dict[int, Fraction]:
        """Coefficients of the root in the eps basis."""
        if self.shape in ("diff", "sum"):
            return {self.j: Q(self.sj), self.k: Q(self.sk)}
        if self.shape == "eps":
            return {self.j: Q(self.sj)}
        return {self.j: Q(2 * self.sj)}

    def negate(self) -> "Root":
        if self.shape in ("diff", "sum"):
            return Root(self.kind, self.shape, self.j, self.k, -self.sj, -self.sk)
        return Root(self.kind, self.shape, self.j, 0, -self.sj, 1)

    def to_json(self):
        return {"kind": self.kind, "shape": self.shape, "j": self.j, "k": self.k,
                "sj": self.sj, "sk": self.sk}

    @classmethod
    def from_json(cls, obj) -> "Root":
        if not isinstance(obj, dict):
            raise InputError("root must be a JSON object")
        extra = set(obj) - {"kind", "shape", "j", "k", "sj", "sk"}
        if extra:
            raise InputError(f"unknown root fields: {sorted(extra)}")
        try:
            return cls(obj["kind"], obj["shape"], int(obj["j"]), int(obj.get("k", 0)),
                       int(obj.get("sj", 1)), obj.get("sk"))
        except KeyError as exc:
            raise InputError(f"root is missing field {exc}") from exc

    def __str__(self):
        def term(s, idx, mult=1):
            coef = "" if mult == 1 else str(mult)
            return ("-" if s < 0 else "+") + f"{coef}e{idx}"
        if self.shape in ("diff", "sum"):
            txt = term(self.sj, self.j) + term(self.sk, self.k)
        elif self.shape == "eps":
            txt = term(self.sj, self.j)
        else:
            txt = term(self.sj, self.j, 2)
        return txt.lstrip("+")


@dataclass(frozen=True)
class CoWeight:
    """Exact element of the coroot side: finitely many entries over a constant tail."""

    entries: tuple = ()
    tail: Fraction = Q(0)

    @classmethod
    def make(cls, entries: Dict[int, object], tail=0) -> "CoWeight":
        t = as_q(tail)
        clean = {int(j): as_q(v) for j, v in entries.items()}
        return cls(tuple(sorted((j, v) for j, v in clean.items() if v != t)), t)

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.entries)

    def __call__(self, j: int) -> Fraction:
        return self.as_dict().get(j, self.tail)

    def is_integral(self) -> bool:
        return self.tail.denominator == 1 and all(v.denominator == 1 for _, v in self.entries)

    def norm_sq(self, kind: str) -> Fraction:
        if self.tail != 0:
            raise UndefinedPairing("coweight with nonzero tail has infinite norm")
        return COROOT_SCALE[check_kind(kind)] * sum((v * v for _, v in self.entries), Q(0))

    def to_json(self):
        return {"except": {str(j): q_to_json(v) for j, v in self.entries},
                "tail": q_to_json(self.tail)}

    @classmethod
    def from_json(cls, obj) -> "CoWeight":
        if isinstance(obj, list):
            return cls.make({i + 1: v for i, v in enumerate(obj)})
        if not isinstance(obj, dict):
            raise InputError("coweight must be an object or a list")
        extra = set(obj) - {"except", "tail"}
        if extra:
            raise InputError(f"unknown coweight fields: {sorted(extra)}")
        return cls.make(obj.get("except", {}), obj.get("tail", 0))


def roots_in_window(kind: str, N: int) -> List[Root]:
    """All roots supported in {1..N}, sorted by (shape rank, j, k, sj, sk)."""
    kind = check_kind(kind)
    if N < 2:
        raise InputError("window N must be at least 2")
    out = []
    for shape in LEGAL_SHAPES[kind]:
        if shape in ("diff", "sum"):
            pairs = [(1, -1), (-1, 1)] if shape == "diff" else [(1, 1), (-1, -1)]
            for j in range(1, N + 1):
                for k in range(j + 1, N + 1):
                    for sj, sk in pairs:
                        out.append(Root(kind, shape, j, k, sj, sk))
        else:
            for j in range(1, N + 1):
                for s in (1, -1):
                    out.append(Root(kind, shape, j, 0, s, 1))
    return sorted(out, key=Root.sort_key)


def coroot(root: Root) -> CoWeight:
    if root.shape in ("diff", "sum"):
        return CoWeight.make({root.j: root.sj, root.k: root.sk})
    if root.shape == "eps":
        return CoWeight.make({root.j: 2 * root.sj})
    return CoWeight.make({root.j: root.sj})


def coroot_norm_sq(root: Root) -> Fraction:
    return coroot(root).norm_sq(root.kind)


def root_norm_sq(root: Root) -> Fraction:
    """Dual norm of the root as a functional on the coroot side."""
    return sum((v * v for v in root.vector().values()), Q(0)) / COROOT_SCALE[root.kind]


def pair_root_coweight(root: Root, x: CoWeight) -> Fraction:
    """alpha(x); always finite because roots have finite support."""
    return sum((c * x(j) for j, c in root.vector().items()), Q(0))


def pair_weight_coroot(beta: Weight, root: Root) -> Fraction:
    """beta(alpha^vee)."""
    return sum((c * beta(j) for j, c in coroot(root).entries), Q(0))


def cg_sq_exact(kind: str) -> Fraction:
    """c_g^2 = 4 / min ||alpha^vee||^2 over the root shapes of the kind."""
    kind = check_kind(kind)
    reps = roots_in_window(kind, 2)
    return Q(4) / min(coroot_norm_sq(r) for r in reps)


def cg_exact(kind: str) -> float:
    return math.sqrt(cg_sq_exact(kind))


def reflect_coweight(root: Root, x: CoWeight) -> CoWeight:
    """r_alpha(x) = x - alpha(x) alpha^vee."""
    a = pair_root_coweight(root, x)
    entries = x.as_dict()
    for j, c in coroot(root).entries:
        entries[j] = entries.get(j, x.tail) - a * c
    return CoWeight.make(entries, x.tail)


def reflect_weight(root: Root, beta: Weight) -> Weight:
    """r*_alpha(beta) = beta - beta(alpha^vee) alpha."""
    a = pair_weight_coroot(beta, root)
    table = dict(beta.seq.table)
    for j, c in root.vector().items():
        table[j] = beta(j) - a * c
    from .sequences import DiagonalSequence

    return Weight(DiagonalSequence(table, beta.law))


def reflection_element(root: Root):
    """The reflection r_alpha as a signed permutation."""
    from .weyl import WeylElement

    if root.shape == "diff":
        return WeylElement({root.j: root.k, root.k: root.j})
    if root.shape == "sum":
        return WeylElement({root.j: root.k, root.k: root.j}, {root.j, root.k})
    return WeylElement({}, {root.j})
