import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hilie.cocycles import (affine_coadjoint, cocycle_class, haar_unitary, omega_d,
                            one_param_equivalent, theta, theta_orbit_stats, trace_pairing,
                            u_res_contains)
from hilie.core import Tail, TruncOp, commutator
from hilie.errors import MalformedPartition, NotSkew, NotUnitary
from hilie.sequences import DiagonalSequence

N = 5


def skew(rng, n=N):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return TruncOp((z - z.conj().T) / 2, Tail.zero())


def rand_d(rng):
    return DiagonalSequence.finite(list(rng.integers(-4, 5, size=N)))


# omega_d


def test_omega_diagonal_arguments_vanish():
    d = DiagonalSequence.finite([1, 2, 3])
    x = TruncOp(np.diag([1j, 2j, 0]), Tail.zero())
    y = TruncOp(np.diag([0, -1j, 5j]), Tail.zero())
    assert omega_d(d, x, y) == 0


def test_omega_hand_example():
    # tr(diag(i, 0) * 2i diag(1, -1)) = -2 with the operator D = diag(i d)
    d = DiagonalSequence.finite([1])
    x = TruncOp(np.array([[0, 1], [-1, 0]], dtype=complex), Tail.zero())
    y = TruncOp(np.array([[0, 1j], [1j, 0]]), Tail.zero())
    assert omega_d(d, x, y) == pytest.approx(-2.0, abs=1e-15)
    assert omega_d(d, y, x) == pytest.approx(2.0, abs=1e-15)


def test_omega_needs_skew_arguments():
    with pytest.raises(NotSkew):
        omega_d(DiagonalSequence.const(1), TruncOp(np.eye(2), Tail.zero()), TruncOp(np.eye(2), Tail.zero()))


@given(st.integers(0, 10 ** 6))
def test_omega_is_an_alternating_bilinear_cocycle(seed):
    rng = np.random.default_rng(seed)
    d = rand_d(rng)
    x, y, z = skew(rng), skew(rng), skew(rng)
    a, b = rng.standard_normal(2)
    assert abs(omega_d(d, x, x)) < 1e-12
    assert abs(omega_d(d, x, y) + omega_d(d, y, x)) < 1e-10
    lin = omega_d(d, x.scale(a) + z.scale(b), y) - a * omega_d(d, x, y) - b * omega_d(d, z, y)
    assert abs(lin) < 1e-9
    cyc = (omega_d(d, commutator(x, y), z) + omega_d(d, commutator(y, z), x)
           + omega_d(d, commutator(z, x), y))
    assert abs(cyc) < 1e-9


@given(st.integers(0, 10 ** 6), st.integers(-3, 3))
def test_coboundary_is_trace_pairing(seed, c):
    # omega_d(x, y) equals the functional tr(diag(i(d - c)) .) evaluated on [x, y]
    rng = np.random.default_rng(seed)
    d = rand_d(rng) + DiagonalSequence.const(c)
    x, y = skew(rng), skew(rng)
    alpha = d - DiagonalSequence.const(c)
    assert abs(omega_d(d, x, y) - trace_pairing(alpha, commutator(x, y))) < 1e-9


# classification


def test_class_examples():
    assert cocycle_class(DiagonalSequence.const(5)).verdict == "Zero"
    cls = cocycle_class(DiagonalSequence.power(1, -1))
    assert cls.verdict == "Coboundary" and cls.shift == 0
    assert abs(cls.evidence["tail_sum"] - math.pi ** 2 / 6) < 1e-9
    lo, hi = cls.evidence["integral_bracket"]
    assert lo <= math.pi ** 2 / 6 <= hi
    assert cocycle_class(DiagonalSequence.alternating(1)).verdict == "Nontrivial"
    assert cocycle_class(DiagonalSequence.affine(1, 0)).verdict == "Nontrivial"


def test_class_shift_is_tail_constant():
    cls = cocycle_class(DiagonalSequence.power(2, -1) + DiagonalSequence.const(3))
    assert cls.verdict == "Coboundary" and cls.shift == 3


def test_slow_decay_is_nontrivial():
    assert cocycle_class(DiagonalSequence.power(1, -0.5)).verdict == "Nontrivial"


@given(st.integers(-5, 5), st.integers(1, 4))
def test_class_invariant_under_constants_and_l2_changes(c, k):
    for base in (DiagonalSequence.power(1, -1), DiagonalSequence.alternating(1), DiagonalSequence.const(2)):
        moved = base + DiagonalSequence.const(c) + DiagonalSequence.power(k, -2)
        v0, v1 = cocycle_class(base).verdict, cocycle_class(moved).verdict
        assert (v0 == "Nontrivial") == (v1 == "Nontrivial")


def test_one_param_equivalence():
    j = DiagonalSequence.affine(1, 0)
    assert one_param_equivalent(j, j + DiagonalSequence.const(7))
    assert one_param_equivalent(j, j + DiagonalSequence.power(1, -1))
    assert not one_param_equivalent(j, DiagonalSequence.affine(2, 0))


# Theta


def test_theta_commuting_is_zero():
    d = TruncOp(np.diag([1j, 2j]), Tail.zero())
    g = np.diag([1j, -1])
    assert np.abs(theta(d, g).entries).max() < 1e-15


def test_theta_rotation_swaps():
    d = TruncOp(np.diag([1j, 2j]), Tail.zero())
    g = np.array([[0, -1], [1, 0]], dtype=complex)
    assert np.allclose(theta(d, g).entries, np.diag([1j, -1j]), atol=1e-15)


def test_theta_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        theta(DiagonalSequence.const(1), np.array([[2, 0], [0, 1]], dtype=complex))
    with pytest.raises(NotUnitary):
        theta(DiagonalSequence.const(1), TruncOp(np.eye(2), Tail.zero()))


@given(st.integers(0, 10 ** 6))
def test_theta_cocycle_identity(seed):
    rng = np.random.default_rng(seed)
    d = rand_d(rng)
    g1, g2 = haar_unitary(N, rng), haar_unitary(N, rng)
    lhs = theta(d, g1 @ g2).entries
    rhs = theta(d, g1).entries + g1 @ theta(d, g2).entries @ g1.conj().T
    assert np.abs(lhs - rhs).max() < 1e-10
    assert theta(d, g1).is_skew(1e-12)


@given(st.integers(0, 10 ** 6))
def test_affine_action_law(seed):
    rng = np.random.default_rng(seed)
    d = rand_d(rng)
    g1, g2, alpha = haar_unitary(N, rng), haar_unitary(N, rng), skew(rng)
    lhs = affine_coadjoint(d, g1 @ g2, alpha).entries
    rhs = affine_coadjoint(d, g1, affine_coadjoint(d, g2, alpha)).entries
    assert np.abs(lhs - rhs).max() < 1e-10


def test_affine_trivial_cases():
    rng = np.random.default_rng(0)
    d, alpha, g = rand_d(rng), skew(rng), haar_unitary(N, rng)
    assert np.abs(affine_coadjoint(d, np.eye(N), alpha).entries - alpha.entries).max() < 1e-14
    zero = TruncOp(np.zeros((N, N)), Tail.zero())
    assert np.abs(affine_coadjoint(d, g, zero).entries - theta(d, g).entries).max() < 1e-14


def test_theta_stats():
    assert theta_orbit_stats(DiagonalSequence.const(3), 6, 5, seed=0).max_norm < 1e-12
    st_ = theta_orbit_stats(DiagonalSequence.power(1, -1), 16, 20, seed=1)
    assert st_.max_norm <= 2 * math.pi / math.sqrt(6) + 1e-6
    assert st_.a_priori_bound == pytest.approx(2 * math.pi / math.sqrt(6), abs=1e-9)
    norms = [theta_orbit_stats(DiagonalSequence.alternating(1), n, 5, seed=2).max_norm for n in (8, 32, 128)]
    assert norms == sorted(norms) and norms[-1] > 3 * norms[0]


# restricted group


def test_ures_examples():
    part = [(1, "inf"), (2, "inf")]
    assert u_res_contains([["identity", "zero"], ["zero", "identity"]], part)
    assert not u_res_contains([["identity", "nonhs"], ["nonhs", "identity"]], part)
    assert u_res_contains([["hs", "hs"], ["hs", "hs"]], part)
    assert u_res_contains([["nonhs"]], [(0, "inf")])
    assert u_res_contains([[np.eye(2), np.ones((2, 3))], [np.ones((3, 2)), np.eye(3)]], [(0, 2), (1, 3)])


def test_ures_malformed():
    with pytest.raises(MalformedPartition):
        u_res_contains([["zero"]], [(0, 1), (0, 2)])
    with pytest.raises(MalformedPartition):
        u_res_contains([["zero", "zero"]], [(0, 1), (1, 1)])
    with pytest.raises(MalformedPartition):
        u_res_contains([["bogus"]], [(0, 1)])
