"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line."""
import itertools
import json
import math
import os
import subprocess
import sys
import time
from fractions import Fraction as Q

import numpy as np
import pytest

from hilie.cli import main
from hilie.cocycles import cocycle_class, haar_unitary, theta
from hilie.core import estimate_bracket_norm
from hilie.covariance import (WeightSet, ground_state_admissible, ground_state_by_energy,
                              wsembo_bruteforce, wsembo_infimum, wsembo_window_min)
from hilie.characters import fourier_check, max_atom_mass, pd_gram_check
from hilie.rootdata import Root, cg_exact, coroot_norm_sq, roots_in_window
from hilie.sequences import DiagonalSequence
from hilie.spectral import (BandedOp, fit_loglog_slope, random_hermitian_pair, trotter_limit,
                            wvn_decompose)
from hilie.weight import MSet, Weight, indicator_of_z_halfline
from hilie.weyl import (adapted_permutation, max_sampled_pairing, momentum_equivalent_chiM,
                        orbit_canonical, orbit_contains_bruteforce, orbit_equivalent, orbit_pairing,
                        random_weyl_element, support_functional_chiM, weight_set_contains)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def check(acceptance, criterion, passed, detail):
    acceptance(criterion, bool(passed), detail)
    assert passed, detail


def test_01_coroot_norm_tables(acceptance):
    expected = {
        ("A", "diff"): Q(2),
        ("B", "sum"): Q(4), ("B", "diff"): Q(4), ("B", "eps"): Q(8),
        ("C", "sum"): Q(2), ("C", "diff"): Q(2), ("C", "2eps"): Q(1),
        ("D", "sum"): Q(4), ("D", "diff"): Q(4),
    }
    with Timer() as t:
        got = {}
        for kind in "ABCD":
            for r in roots_in_window(kind, 4):
                got.setdefault((kind, r.shape), set()).add(coroot_norm_sq(r))
    ok = all(got[k] == {v} and isinstance(v, Q) for k, v in expected.items()) and set(got) == set(expected)
    check(acceptance, 1, ok and t.elapsed < 1.0, f"coroot norms exact, {t.elapsed:.3f}s")


def test_02_bracket_constant(acceptance):
    exact = {"A": math.sqrt(2), "B": 1.0, "C": 2.0, "D": 1.0}
    with Timer() as t:
        reports = {k: estimate_bracket_norm(k, 32, 2000, seed=2024) for k in "ABCD"}
    ok = True
    parts = []
    for k, rep in reports.items():
        ok &= cg_exact(k) == pytest.approx(exact[k], abs=1e-15)
        ok &= cg_exact(k) ** 2 == pytest.approx([2, 1, 4, 1]["ABCD".index(k)])
        ok &= rep.sampled_max <= rep.exact_bound + 1e-9
        ok &= abs(rep.witness_ratio - rep.exact_bound) <= 1e-12
        parts.append(f"{k}:max {rep.sampled_max:.3f}/cg {rep.exact_bound:.3f}")
    check(acceptance, 2, ok and t.elapsed < 10.0, f"{', '.join(parts)}, {t.elapsed:.2f}s")


def _hull_pair(kind, rng):
    n = int(rng.integers(1, 6))
    lam = rng.integers(-3, 4, n)
    if n < 2 or rng.random() < 0.25:
        return lam.tolist(), rng.integers(-3, 4, n).tolist()
    mu = np.array(random_weyl_element(kind, n, rng).act_vector(lam.tolist()), dtype=int)
    roots = roots_in_window(kind, n)
    for _ in range(int(rng.integers(1, 3))):
        for j, c in roots[int(rng.integers(len(roots)))].vector().items():
            mu[j - 1] += int(c)
    return lam.tolist(), mu.tolist()


def test_03_weight_set_fast_path_vs_lp(acceptance):
    rng = np.random.default_rng(3)
    agree = total = members = 0
    with Timer() as t:
        for kind in "ABC":
            for _ in range(1000):
                a, b = _hull_pair(kind, rng)
                lam, mu = Weight.finite(a), Weight.finite(b)
                fast = weight_set_contains(kind, lam, mu)
                lp = weight_set_contains(kind, lam, mu, method="lp")
                agree += fast == lp
                members += lp
                total += 1
    check(acceptance, 3, agree == total and t.elapsed < 30.0,
          f"{agree}/{total} agree ({members} members), {t.elapsed:.2f}s")


def test_04_orbit_canonical_vs_bruteforce(acceptance):
    rng = np.random.default_rng(4)
    agree = total = 0
    for kind in "ABCD":
        for _ in range(1000):
            n = int(rng.integers(1, 7))
            a = rng.integers(-3, 4, n).tolist()
            if rng.random() < 0.5:
                b = random_weyl_element(kind, n, rng).act_vector(a)
            else:
                b = rng.integers(-3, 4, n).tolist()
            brute = orbit_contains_bruteforce(kind, a, b)
            canon = orbit_canonical(kind, Weight.finite(a), n).window(n) == \
                orbit_canonical(kind, Weight.finite(b), n).window(n)
            agree += canon == brute
            total += 1
    chi_n, chi_n0 = indicator_of_z_halfline(1), indicator_of_z_halfline(0)
    orbit = orbit_equivalent("A", chi_n, chi_n0)
    momentum = momentum_equivalent_chiM(MSet.from_indicator(chi_n), MSet.from_indicator(chi_n0))
    check(acceptance, 4, agree == total and orbit is False and momentum is True,
          f"{agree}/{total} agree; fixture orbit={orbit} momentum={momentum}")


def test_05_support_functional(acceptance):
    rng = np.random.default_rng(5)
    M_list = [MSet.from_indicator(indicator_of_z_halfline(1)), MSet.from_indicator(indicator_of_z_halfline(0))]
    exact_ok = attained = True
    worst = -math.inf
    for trial in range(20):
        n = int(rng.integers(1, 7))
        vals = [Q(int(p), int(q)) for p, q in zip(rng.integers(-9, 10, n), rng.integers(1, 5, n))]
        x = DiagonalSequence.finite(vals)
        trace_pos = sum((v for v in vals if v > 0), Q(0))
        for M in M_list:
            s = support_functional_chiM(M, x, n)
            exact_ok &= isinstance(s, Q) and s == trace_pos
            attained &= orbit_pairing(M, adapted_permutation(M, x, n), x, n) == s
    x = DiagonalSequence.finite([1, -2, 3, Q(1, 2), -1, 0])
    s = support_functional_chiM(M_list[0], x, 6)
    best = max_sampled_pairing(M_list[0], x, 6, 10 ** 4, seed=55)
    worst = best - s
    check(acceptance, 5, exact_ok and attained and best <= s,
          f"exact={exact_ok}, witness attains={attained}, sampled max - s = {float(worst)}")


def test_06_cocycle_classes(acceptance):
    c0 = cocycle_class(DiagonalSequence.const(Q(7, 3)))
    c1 = cocycle_class(DiagonalSequence.power(1, -1))
    c2 = cocycle_class(DiagonalSequence.alternating(1))
    tail_err = abs(c1.evidence["tail_sum"] - math.pi ** 2 / 6)
    lo, hi = c1.evidence["integral_bracket"]
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        d = DiagonalSequence.finite(list(rng.normal(size=n)))
        g1, g2 = haar_unitary(n, rng), haar_unitary(n, rng)
        lhs = theta(d, g1 @ g2).entries
        rhs = theta(d, g1).entries + g1 @ theta(d, g2).entries @ g1.conj().T
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    ok = (c0.verdict == "Zero" and c1.verdict == "Coboundary" and c1.shift == 0
          and tail_err <= 1e-9 and lo <= math.pi ** 2 / 6 <= hi and c2.verdict == "Nontrivial"
          and worst <= 1e-10)
    check(acceptance, 6, ok, f"tail-sum error {tail_err:.1e}, Theta residual {worst:.1e}")


def test_07_wsembo(acceptance):
    rng = np.random.default_rng(7)
    agree = total = 0
    for _ in range(500):
        kind = "ABCD"[int(rng.integers(4))]
        n = int(rng.integers(1, 7))
        lam = rng.integers(-3, 4, n).tolist()
        dv = rng.integers(-5, 6, n).tolist()
        agree += wsembo_window_min(kind, lam, dv) == wsembo_bruteforce(kind, lam, dv)
        total += 1
    up = wsembo_infimum(Weight.finite([1]), DiagonalSequence.affine(1, 0), 6)
    down = wsembo_infimum(Weight.finite([1]), DiagonalSequence.affine(-1, 0), 6)
    ok = agree == total and up.finite and up.value == 0 and not down.finite
    check(acceptance, 7, ok, f"{agree}/{total} exact; d=j finite={up.finite}, d=-j finite={down.finite}")


def test_08_ground_state(acceptance):
    rng = np.random.default_rng(8)
    agree = total = positives = 0
    while total < 200:
        n = int(rng.integers(2, 6))
        k = int(rng.integers(1, 3))
        vecs = [rng.integers(-1, 3, n).tolist() for _ in range(k)]
        d = rng.integers(-3, 4, n)
        if rng.random() < 0.5:
            # steer toward admissible cases: sort each weight against d
            order = np.argsort(-d, kind="stable")
            vecs = [list(np.array(sorted(v))[np.argsort(order)]) for v in vecs]
        P0 = WeightSet([Weight.finite([int(x) for x in v]) for v in vecs], n)
        seq = DiagonalSequence.finite([int(x) for x in d])
        a, b = ground_state_admissible(P0, seq), ground_state_by_energy(P0, seq)
        agree += a == b
        positives += a
        total += 1
    check(acceptance, 8, agree == total, f"{agree}/{total} agree ({positives} admissible)")


def test_09_trotter_rate(acceptance):
    ns = [8, 16, 32, 64, 128, 256, 512, 1024]
    slopes = []
    with Timer() as t:
        for seed in range(10):
            A, B = random_hermitian_pair(6, np.random.default_rng(seed))
            errs = [trotter_limit(A, B, 1.0, n).error for n in ns]
            slopes.append(fit_loglog_slope(ns, errs))
    ok = all(-1.25 <= s <= -0.8 for s in slopes) and t.elapsed < 20.0
    check(acceptance, 9, ok, f"slopes in [{min(slopes):.3f}, {max(slopes):.3f}], {t.elapsed:.2f}s")


def test_10_weyl_von_neumann(acceptance):
    A = BandedOp.free_jacobi()
    with Timer() as t:
        res = [wvn_decompose(A, 256, d).residual_hs for d in (0.08, 0.04, 0.02, 0.01)]
    monotone = all(a >= b for a, b in zip(res, res[1:]))
    ok = res[-1] <= 0.25 and monotone and t.elapsed < 30.0
    check(acceptance, 10, ok, f"residuals {[round(r, 4) for r in res]}, {t.elapsed:.2f}s")


def test_11_measures(acceptance):
    atoms_ok = all(max_atom_mass(1, n) == Q(1, 2 ** n) for n in range(1, 40))
    fourier = max(fourier_check(b, 64) for b in (Q(1, 2), Q(1), Q(3)))
    gram = min(pd_gram_check(1, 6, 20, seed=s) for s in range(5))
    ok = atoms_ok and fourier <= 1e-12 and gram >= -1e-8
    check(acceptance, 11, ok, f"atoms exact={atoms_ok}, fourier {fourier:.1e}, gram min {gram:.3e}")


CLI_RUNS = [
    ["core", "bracket-norm", "--kind", "C", "--n", "6", "--trials", "100", "--seed", "1"],
    ["weights", "pairings", "--n", "4", "--samples", "200", "--seed", "2", "--input", "pairings.json"],
    ["cocycle", "stats", "--n", "8", "--samples", "10", "--seed", "3", "--input", "stats.json"],
    ["character", "gram", "--b", "1", "--n", "4", "--samples", "8", "--seed", "4"],
    ["trotter", "sweep", "--seed", "5"],
    ["trotter", "sweep", "--seed", "5", "--format", "json"],
    ["wvn", "sweep", "--n", "64"],
    ["character", "fourier", "--b", "3", "--samples", "16"],
    ["rootdata", "roots", "--kind", "D", "--n", "3", "--format", "json"],
    ["rootdata", "cg", "--kind", "C"],
]


def test_12_cli_determinism(acceptance, tmp_path):
    chi = {"kind": "infinite", "indicator": {"tail": {"kind": "two", "a": 1, "b": 0, "base": "evens"}}}
    (tmp_path / "pairings.json").write_text(json.dumps({"M": chi, "x": [1, -2, 3, -1]}))
    (tmp_path / "stats.json").write_text(json.dumps({"d": {"tail": {"law": "alt", "a": 1}}}))
    identical = 0
    for argv in CLI_RUNS:
        outs = []
        for _ in range(2):
            proc = subprocess.run([sys.executable, "-m", "hilie.cli", *argv], cwd=tmp_path,
                                  capture_output=True, check=True)
            outs.append(proc.stdout)
        identical += outs[0] == outs[1] and len(outs[0]) > 0
    # file output through the atomic writer
    files = []
    for k in range(2):
        target = tmp_path / f"out{k}.csv"
        assert main(["trotter", "sweep", "--seed", "9", "--output", str(target)]) == 0
        files.append(target.read_bytes())
    ok = identical == len(CLI_RUNS) and files[0] == files[1]
    check(acceptance, 12, ok, f"{identical}/{len(CLI_RUNS)} subprocess pairs identical, file outputs identical={files[0] == files[1]}")
