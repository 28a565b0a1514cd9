import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hilie.core import (Tail, TruncOp, bracket_ratio, bracket_witness, check_schatten, commutator,
                        estimate_bracket_norm, form_norm, hs_norm, op_norm, sample_real_form,
                        trace_norm, weighted_sum_bracket_bound)
from hilie.errors import EmptyInput, IncompatibleTail, NormUndefined, UnknownKind
from hilie.sequences import DiagonalSequence


def E(n, i, j):
    m = np.zeros((n, n), dtype=complex)
    m[i - 1, j - 1] = 1
    return m


def skew(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return TruncOp((z - z.conj().T) / 2, Tail.zero())


# hs_norm


def test_hs_identity_window():
    assert hs_norm(TruncOp.identity(4, tail_identity=False)) == pytest.approx(2.0, abs=1e-15)


def test_hs_diag():
    x = TruncOp(np.diag([1j, 2j]), Tail.zero())
    assert hs_norm(x) == pytest.approx(math.sqrt(5), abs=1e-15)


def test_hs_scalar_tail_is_infinite():
    assert hs_norm(TruncOp.identity(3)) == math.inf


def test_hs_includes_diag_tail():
    x = TruncOp(np.zeros((2, 2)), Tail.diag(DiagonalSequence.power(1, -1)))
    assert hs_norm(x) == pytest.approx(math.sqrt(math.pi ** 2 / 6 - 1.25), abs=1e-12)


def test_trace_norm_of_nonsummable_tail_is_infinite():
    x = TruncOp(np.zeros((2, 2)), Tail.diag(DiagonalSequence.power(1, -1)))
    assert trace_norm(x) == math.inf


def test_hs_monotone_in_window():
    d = DiagonalSequence.power(1, -1)
    norms = [hs_norm(TruncOp.diag(d, n)) for n in (2, 4, 8, 16)]
    assert all(a <= b + 1e-15 for a, b in zip(norms, norms[1:]))


# commutator


def test_commutator_hand_example():
    x = TruncOp(E(2, 1, 2) - E(2, 2, 1), Tail.zero())
    y = TruncOp(1j * (E(2, 1, 2) + E(2, 2, 1)), Tail.zero())
    c = commutator(x, y)
    assert np.allclose(c.entries, 2j * np.diag([1, -1]), atol=1e-15)
    assert c.tail.is_zero()


def test_commutator_self_is_zero():
    x = skew(np.random.default_rng(0), 5)
    assert np.abs(commutator(x, x).entries).max() == 0


def test_diag_tails_commute():
    x = TruncOp.diag(DiagonalSequence.power(1, -1), 3)
    y = TruncOp.diag(DiagonalSequence.alternating(1), 3)
    c = commutator(x, y)
    assert c.tail.is_zero() and np.abs(c.entries).max() == 0


def test_incompatible_tail_sum():
    a = Tail.diag(DiagonalSequence.power(1, -1), factor=1j)
    b = Tail.diag(DiagonalSequence.power(1, -1), factor=1 + 1j)
    with pytest.raises(IncompatibleTail):
        a.add(b)


@given(st.integers(0, 10 ** 6))
def test_jacobi_and_antisymmetry(seed):
    rng = np.random.default_rng(seed)
    x, y, z = (skew(rng, 4) for _ in range(3))
    anti = commutator(x, y) + commutator(y, x)
    jac = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) + commutator(z, commutator(x, y))
    assert np.abs(anti.entries).max() < 1e-10
    assert np.abs(jac.entries).max() < 1e-10


@given(st.integers(0, 10 ** 6))
def test_invariance_of_inner_product(seed):
    rng = np.random.default_rng(seed)
    x, y, z = (skew(rng, 4) for _ in range(3))

    def ip(a, b):
        return float(np.real(np.trace(a.entries.conj().T @ b.entries)))

    assert abs(ip(commutator(x, y), z) - ip(x, commutator(y, z))) < 1e-10


# Schatten inequalities


def test_schatten_identity_is_tight():
    rng = np.random.default_rng(1)
    y = skew(rng, 4)
    rep = check_schatten(TruncOp.identity(4, tail_identity=False), y)
    assert abs(rep.slack_hs) < 1e-12


def test_schatten_rank_one():
    x = TruncOp(E(3, 1, 1), Tail.zero())
    rep = check_schatten(x, x)
    assert rep.hs_y == pytest.approx(1) and rep.trace_y == pytest.approx(1)
    assert abs(rep.slack_hs) < 1e-12 and abs(rep.slack_hs_trace) < 1e-12


@given(st.integers(0, 10 ** 6))
def test_schatten_random_pairs(seed):
    rng = np.random.default_rng(seed)
    rep = check_schatten(skew(rng, 8), skew(rng, 8))
    assert rep.ok()
    assert min(rep.slack_hs, rep.slack_hs_trace, rep.slack_trace) >= -1e-10


def test_schatten_needs_finite_norms():
    with pytest.raises(NormUndefined):
        check_schatten(TruncOp.identity(2), TruncOp.identity(2))


# bracket norm constant


@pytest.mark.parametrize("kind,cg", [("A", math.sqrt(2)), ("B", 1.0), ("C", 2.0), ("D", 1.0)])
def test_bracket_norm_report(kind, cg):
    rep = estimate_bracket_norm(kind, 6, 200, seed=3)
    assert rep.exact_bound == pytest.approx(cg, abs=1e-15)
    assert rep.sampled_max <= cg + 1e-9
    assert abs(rep.witness_ratio - cg) < 1e-12


@pytest.mark.parametrize("kind", "ABCD")
def test_witness_lies_in_real_form(kind):
    x, y = bracket_witness(kind, 4)
    assert bracket_ratio(kind, x, y) == pytest.approx(estimate_bracket_norm(kind, 4, 1, 0).exact_bound)
    for m in (x, y):
        assert np.abs(m + m.conj().T).max() < 1e-15


@pytest.mark.parametrize("kind", "ABCD")
def test_sampled_elements_are_skew(kind):
    x = sample_real_form(kind, 4, np.random.default_rng(0))
    assert np.abs(x + x.conj().T).max() < 1e-14
    assert form_norm(kind, x) > 0


def test_unknown_kind():
    with pytest.raises(UnknownKind):
        estimate_bracket_norm("E", 4, 1, 0)


def test_bracket_norm_deterministic():
    a = estimate_bracket_norm("A", 5, 50, seed=11)
    b = estimate_bracket_norm("A", 5, 50, seed=11)
    assert a == b


# weighted sums


def test_infsum_examples():
    r = weighted_sum_bracket_bound([(math.sqrt(2), 1)] * 3)
    assert r.finite and r.derived_bound == pytest.approx(math.sqrt(2))
    assert weighted_sum_bracket_bound([(2, 4)]).derived_bound == pytest.approx(1.0)
    r = weighted_sum_bracket_bound([(1, 1)], c_tail=DiagonalSequence.const(1),
                                   w_tail=DiagonalSequence.power(1, -1))
    assert not r.finite and r.derived_bound == math.inf


def test_infsum_empty():
    with pytest.raises(EmptyInput):
        weighted_sum_bracket_bound([])


@given(st.integers(0, 10 ** 6))
def test_infsum_bound_holds_on_weighted_sums(seed):
    # two su(2) summands with scaled inner products w_j ||x||^2
    rng = np.random.default_rng(seed)
    cs = [math.sqrt(2), math.sqrt(2)]
    ws = list(rng.uniform(0.5, 3.0, size=2))
    bound = weighted_sum_bracket_bound(list(zip(cs, ws))).derived_bound

    def blocks():
        out = []
        for _ in range(2):
            m = skew(rng, 2).entries
            out.append(m - np.trace(m) / 2 * np.eye(2))
        return out

    xs, ys = blocks(), blocks()

    def nrm(parts):
        return math.sqrt(sum(w * np.linalg.norm(p) ** 2 for w, p in zip(ws, parts)))

    br = [a @ b - b @ a for a, b in zip(xs, ys)]
    assert nrm(br) <= bound * nrm(xs) * nrm(ys) + 1e-9


def test_json_roundtrip():
    x = TruncOp(np.array([[1j, 2], [-2, 0]]), Tail.diag(DiagonalSequence.power(1, -1)))
    y = TruncOp.from_json(x.to_json())
    assert np.array_equal(x.entries, y.entries)
    assert y.tail.at(5) == pytest.approx(0.2j)
    assert op_norm(x) == op_norm(y)
