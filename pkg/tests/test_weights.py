import itertools
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hilie.errors import IllegalSigns, IncomparableTails, MalformedWeight, UnsupportedTail, WindowTooLarge
from hilie.rootdata import reflection_element, roots_in_window
from hilie.sequences import DiagonalSequence, TailLaw
from hilie.weight import MSet, Weight, indicator_of_z_halfline, j_to_z, z_to_j
from hilie.weyl import (WeylElement, adapted_permutation, classify_weight, hull_contains_lp,
                        lattice_contains, lattice_contains_oracle, majorized,
                        momentum_equivalent_chiM, orbit_canonical, orbit_contains_bruteforce,
                        orbit_equivalent, orbit_in_window, orbit_pairing, random_weyl_element,
                        max_sampled_pairing, support_functional_chiM, toroidal_character_contains,
                        toroidal_characters_all_finite, weight_set_contains, weyl_act)

half = Q(1, 2)
CHI_N = indicator_of_z_halfline(1)
CHI_N0 = indicator_of_z_halfline(0)


# weights and index sets


def test_interleaving_is_a_bijection():
    assert [j_to_z(j) for j in range(1, 6)] == [0, 1, -1, 2, -2]
    assert all(z_to_j(j_to_z(j)) == j for j in range(1, 200))


def test_halfline_indicators():
    assert [CHI_N(z_to_j(z)) for z in range(-3, 4)] == [0, 0, 0, 0, 1, 1, 1]
    assert [CHI_N0(z_to_j(z)) for z in range(-3, 4)] == [0, 0, 0, 1, 1, 1, 1]


def test_weight_rejects_non_half_integers():
    with pytest.raises(MalformedWeight):
        Weight.finite([Q(1, 3)])


def test_weight_json_examples():
    w = Weight.from_json({"except": {"3": 2, "7": -1}, "tail": {"kind": "const", "value": 0}})
    assert w(3) == 2 and w(7) == -1 and w(8) == 0
    t = Weight.from_json({"tail": {"kind": "two", "a": 1, "b": 0, "base": "geq", "param": 5,
                                   "add": [2], "remove": [6]}})
    assert t.tail_kind == "two"
    assert Weight.from_json(t.to_json()).window(40) == t.window(40)
    with pytest.raises(MalformedWeight):
        Weight.from_json({"tail": {"kind": "const", "value": 0}, "extra": 1})


# classify


def test_classify_examples():
    assert classify_weight("A", Weight.finite([1, 1, 0])).to_json() == \
        {"integral": True, "bounded": True, "continuous": True}
    c = classify_weight("B", Weight.finite([], tail=half))
    assert c.integral and c.bounded and not c.continuous
    c = classify_weight("A", Weight.from_law(TailLaw.affine(1, 0)))
    assert (c.integral, c.bounded, c.continuous) == (True, False, False)


def test_classify_mixed_parity():
    assert not classify_weight("B", Weight.finite([half, 1])).integral
    assert not classify_weight("C", Weight.finite([half])).integral
    assert classify_weight("A", Weight.finite([half, Q(3, 2)], tail=half)).integral


# Weyl action


def test_weyl_act_examples():
    lam = Weight.finite([2, 1, 0])
    assert weyl_act("A", WeylElement.identity(), lam).window(3) == [2, 1, 0]
    assert weyl_act("A", WeylElement.from_window([2, 1]), lam).window(3) == [1, 2, 0]
    assert weyl_act("C", WeylElement.from_window([1], [1]), Weight.finite([3])).window(2) == [-3, 0]


def test_illegal_signs():
    with pytest.raises(IllegalSigns):
        weyl_act("A", WeylElement.from_window([1], [1]), Weight.finite([1]))
    with pytest.raises(IllegalSigns):
        weyl_act("D", WeylElement.from_window([1, 2], [1]), Weight.finite([1]))


def small_vec(n=4, lo=-3, hi=3):
    return st.lists(st.integers(lo, hi), min_size=n, max_size=n)


@pytest.mark.parametrize("kind", "ABCD")
@given(seed=st.integers(0, 10 ** 6), v=small_vec())
def test_group_law(kind, seed, v):
    rng = np.random.default_rng(seed)
    w1, w2 = random_weyl_element(kind, 4, rng), random_weyl_element(kind, 4, rng)
    lam = Weight.finite(v)
    assert weyl_act(kind, w1 * w2, lam).window(5) == weyl_act(kind, w1, weyl_act(kind, w2, lam)).window(5)
    assert weyl_act(kind, w1.inverse(), weyl_act(kind, w1, lam)).window(5) == lam.window(5)


@pytest.mark.parametrize("kind", "ABCD")
def test_reflections_generate_window_group(kind):
    n = 3
    vec = (3, 2, 1)
    gens = [reflection_element(r) for r in roots_in_window(kind, n)]
    seen = {vec}
    frontier = [vec]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                u = tuple(g.act_vector(v))
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    assert seen == set(orbit_in_window(kind, vec))


# orbits


def test_orbit_equivalent_examples():
    assert orbit_equivalent("A", Weight.finite([2, 0, 1]), Weight.finite([2, 1, 0]))
    assert orbit_equivalent("C", Weight.finite([3]), Weight.finite([-3]))
    assert not orbit_equivalent("D", Weight.finite([3]), Weight.finite([-3]), window=1)
    assert orbit_equivalent("D", Weight.finite([3]), Weight.finite([-3]))
    assert not orbit_equivalent("A", CHI_N, CHI_N0)


def test_orbit_two_valued_finite_moves():
    moved = Weight.two_valued(1, 0, "evens", add=[3], remove=[4])
    assert orbit_equivalent("A", CHI_N, moved)


def test_incomparable_tails():
    with pytest.raises(IncomparableTails):
        orbit_equivalent("A", Weight.finite([1]), CHI_N)


def test_canonical_examples():
    assert orbit_canonical("A", Weight.finite([0, 3, 1])).window(4) == [3, 1, 0, 0]
    assert orbit_canonical("C", Weight.finite([-2, 1])).window(2) == [2, 1]
    assert orbit_canonical("D", Weight.finite([-2, 1]), window=2).window(2) == [2, -1]
    assert orbit_canonical("D", Weight.finite([-2, 1])).window(3) == [2, 1, 0]
    with pytest.raises(UnsupportedTail):
        orbit_canonical("A", CHI_N)


def test_canonical_nonzero_tail():
    lam = Weight.finite([5, 1, 2], tail=2)
    assert orbit_canonical("A", lam).window(4) == [5, 1, 2, 2]


@pytest.mark.parametrize("kind", "ABCD")
@given(data=st.data())
def test_canonical_agrees_with_bruteforce(kind, data):
    n = data.draw(st.integers(1, 5))
    a = data.draw(small_vec(n))
    b = data.draw(small_vec(n))
    if data.draw(st.booleans()):
        b = random_weyl_element(kind, n, np.random.default_rng(data.draw(st.integers(0, 99)))).act_vector(a)
    brute = orbit_contains_bruteforce(kind, a, b)
    lam, mu = Weight.finite(a), Weight.finite(b)
    assert (orbit_canonical(kind, lam, n).window(n) == orbit_canonical(kind, mu, n).window(n)) == brute
    assert orbit_equivalent(kind, lam, mu, window=n) == brute


# weight sets


def test_weight_set_examples():
    assert weight_set_contains("A", Weight.finite([1]), Weight.finite([0, 1]))
    assert not weight_set_contains("A", Weight.finite([1, 1]), Weight.finite([2]))
    assert not weight_set_contains("A", Weight.finite([1]), Weight.finite([half, half]))


def test_lattice_oracle_agreement():
    for kind in "ABCD":
        for d in itertools.product(range(-2, 3), repeat=3):
            assert lattice_contains(kind, d) == lattice_contains_oracle(kind, d), (kind, d)


def test_majorization():
    assert majorized([1, 1, 0], [2, 0, 0])
    assert not majorized([2, 0, 0], [1, 1, 0])


def test_d_window_cap():
    with pytest.raises(WindowTooLarge):
        weight_set_contains("D", Weight.finite([1] * 8), Weight.finite([1] * 8))


@pytest.mark.parametrize("kind", "ABCD")
@given(data=st.data())
def test_orbit_lies_in_weight_set(kind, data):
    v = data.draw(small_vec(4))
    w = random_weyl_element(kind, 4, np.random.default_rng(data.draw(st.integers(0, 999))))
    lam = Weight.finite(v)
    assert weight_set_contains(kind, lam, lam)
    assert weight_set_contains(kind, lam, weyl_act(kind, w, lam))


@pytest.mark.parametrize("kind", "ABC")
@given(data=st.data())
def test_fast_path_matches_lp(kind, data):
    n = data.draw(st.integers(1, 4))
    a, b = data.draw(small_vec(n)), data.draw(small_vec(n))
    lam, mu = Weight.finite(a), Weight.finite(b)
    assert weight_set_contains(kind, lam, mu) == weight_set_contains(kind, lam, mu, method="lp")


def test_half_integer_weights_use_lp():
    lam = Weight.finite([Q(3, 2), half])
    assert weight_set_contains("B", lam, Weight.finite([half, half]))
    assert hull_contains_lp("B", [Q(3, 2), half], [half, -half])


# support functional and momentum sets


def test_support_functional_examples():
    x = DiagonalSequence.finite([1, -2, 3])
    assert support_functional_chiM(MSet.from_indicator(CHI_N), x, 3) == 4
    assert support_functional_chiM(MSet.from_indicator(CHI_N), DiagonalSequence.finite([-1, -2])) == 0


def test_support_functional_is_independent_of_infinite_M():
    x = DiagonalSequence.finite([2, -1, Q(1, 2), 0, -3])
    assert support_functional_chiM(MSet.from_indicator(CHI_N), x) == \
        support_functional_chiM(MSet.from_indicator(CHI_N0), x)


def test_adapted_permutation_attains_support():
    x = DiagonalSequence.finite([1, -2, 3, 0, Q(-1, 2)])
    M = MSet.from_indicator(CHI_N)
    w = adapted_permutation(M, x, 5)
    assert orbit_pairing(M, w, x, 5) == support_functional_chiM(M, x, 5)


def test_max_sampled_pairing_bounded():
    x = DiagonalSequence.finite([1, -2, 3, 0, -1])
    M = MSet.from_indicator(CHI_N0)
    s = support_functional_chiM(M, x, 5)
    assert max_sampled_pairing(M, x, 5, 2000, seed=4) <= s


def test_momentum_equivalence():
    assert momentum_equivalent_chiM(MSet.from_indicator(CHI_N), MSet.from_indicator(CHI_N0))
    assert momentum_equivalent_chiM(MSet.finite([1, 3]), MSet.finite([1, 3]))
    assert momentum_equivalent_chiM(MSet.finite([1, 3]), MSet.finite([2, 5]))
    assert not momentum_equivalent_chiM(MSet.finite([1, 3]), MSet.finite([2]))


# toroidal characters


def test_toroidal_examples():
    ones = Weight.finite([], tail=1)
    assert toroidal_character_contains(DiagonalSequence.power(1, 2), ones)
    assert not toroidal_character_contains(DiagonalSequence.const(1), ones)
    assert toroidal_character_contains(DiagonalSequence.const(1), Weight.finite([3, -1]))
    assert toroidal_characters_all_finite(DiagonalSequence.const(2))
    assert not toroidal_characters_all_finite(DiagonalSequence.power(1, 1))


@pytest.mark.parametrize("kind", "ABCD")
@given(data=st.data())
def test_orbit_equivalence_is_an_equivalence_relation(kind, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 999)))
    a = data.draw(small_vec(3))
    b = random_weyl_element(kind, 3, rng).act_vector(a)
    c = random_weyl_element(kind, 3, rng).act_vector(b) if data.draw(st.booleans()) else data.draw(small_vec(3))
    la, lb, lc = (Weight.finite(v) for v in (a, b, c))
    assert orbit_equivalent(kind, la, la)
    assert orbit_equivalent(kind, la, lb) == orbit_equivalent(kind, lb, la)
    if orbit_equivalent(kind, la, lb) and orbit_equivalent(kind, lb, lc):
        assert orbit_equivalent(kind, la, lc)
