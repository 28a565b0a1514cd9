"""Command-line entry point: ``hilie <subcommand> <verb> [options]``.

Structured arguments come from a JSON object given with ``--input`` (a path,
or ``-`` for stdin); scalar parameters come from flags.  Results go to
stdout or, atomically, to ``--output``.  Exit codes: 0 success, 1 input
error, 2 contract violation.
"""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from typing import Callable, Dict, NamedTuple, Tuple

import numpy as np

from . import characters as ch
from . import cocycles as co
from . import core
from . import covariance as cv
from . import rootdata as rd
from . import spectral as sp
from . import weyl as wy
from .errors import ContractViolation, HilieError, InputError, SliceTooCoarse
from .sequences import DiagonalSequence, as_q, q_to_json
from .weight import MSet, Weight


# --------------------------------------------------------------------------
# output


def _plain(obj):
    """Convert a result into JSON-compatible builtins (floats kept as float)."""
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return q_to_json(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dump_json(obj) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, list):
        return "[" + ", ".join(dump_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        return "{" + ", ".join(json.dumps(k) + ": " + dump_json(v) for k, v in obj.items()) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return fmt_float(v).strip('"')
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict)):
        return dump_json(v)
    return "" if v is None else str(v)


def dump_csv(obj) -> str:
    """Lists of records become a table; objects become key,value rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(obj, dict) and "rows" in obj and isinstance(obj["rows"], list):
        obj = obj["rows"]
    if isinstance(obj, list) and obj and all(isinstance(r, dict) for r in obj):
        header = list(obj[0])
        w.writerow(header)
        for r in obj:
            w.writerow([_csv_cell(r.get(h)) for h in header])
    elif isinstance(obj, dict):
        w.writerow(["key", "value"])
        for k, v in obj.items():
            w.writerow([k, _csv_cell(v)])
    elif isinstance(obj, list):
        w.writerow(["value"])
        for v in obj:
            w.writerow([_csv_cell(v)])
    else:
        w.writerow(["value"])
        w.writerow([_csv_cell(obj)])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hilie-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------------
# input helpers


def load_input(path) -> dict:
    if path is None:
        return {}
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read input: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise InputError("input must be a JSON object")
    return obj


def _need(inp: dict, key: str):
    if key not in inp:
        raise InputError(f"input is missing field {key!r}")
    return inp[key]


def _flag(args, name: str):
    v = getattr(args, name)
    if v is None:
        raise InputError(f"--{name} is required for this verb")
    return v


def _matrix(obj) -> np.ndarray:
    if isinstance(obj, dict):
        return np.asarray(core.TruncOp.from_json(obj).entries)
    try:
        a = np.array(obj, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad matrix: {exc}") from exc
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("matrix must be square")
    return a


def _op(obj) -> core.TruncOp:
    if isinstance(obj, dict):
        return core.TruncOp.from_json(obj)
    return core.TruncOp(_matrix(obj), core.Tail.zero())


def _seq(obj) -> DiagonalSequence:
    return DiagonalSequence.from_json(obj)


def _diag_or_op(obj):
    if isinstance(obj, dict) and "re" in obj:
        return core.TruncOp.from_json(obj)
    return _seq(obj)


def _weight(obj) -> Weight:
    return Weight.from_json(obj)


def _complex(obj) -> complex:
    if isinstance(obj, list) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    if isinstance(obj, (int, float)):
        return complex(obj)
    raise InputError("complex numbers are [re, im] pairs")


def _block(obj):
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return np.asarray(core.TruncOp.from_json(obj).entries)
    try:
        return np.array(obj, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad block matrix: {exc}") from exc


def _banded(inp) -> sp.BandedOp:
    a = inp.get("A", "free-jacobi")
    if a == "free-jacobi":
        return sp.BandedOp.free_jacobi()
    return sp.BandedOp.from_dense(_matrix(a))


# --------------------------------------------------------------------------
# verbs


class Verb(NamedTuple):
    fn: Callable
    fields: Tuple[str, ...] = ()
    sampling: bool = False
    rows: bool = False


def _core_hs(a, i):
    return core.hs_norm(_op(_need(i, "x")))


def _core_comm(a, i):
    return core.commutator(_op(_need(i, "x")), _op(_need(i, "y")))


def _core_schatten(a, i):
    return core.check_schatten(_op(_need(i, "x")), _op(_need(i, "y")))


def _core_bracket(a, i):
    return core.estimate_bracket_norm(_flag(a, "kind"), _flag(a, "n"), _flag(a, "trials"), a.seed)


def _core_infsum(a, i):
    pairs = [(as_q(c), as_q(w)) for c, w in _need(i, "pairs")]
    ct = _seq(i["c_tail"]) if "c_tail" in i else None
    wt = _seq(i["w_tail"]) if "w_tail" in i else None
    return core.weighted_sum_bracket_bound(pairs, ct, wt)


def _rd_roots(a, i):
    return [{"root": str(r), **r.to_json()} for r in rd.roots_in_window(_flag(a, "kind"), _flag(a, "n"))]


def _rd_root(i):
    return rd.Root.from_json(_need(i, "root"))


def _rd_coroot(a, i):
    return rd.coroot(_rd_root(i))


def _rd_coroot_norm(a, i):
    return rd.coroot_norm_sq(_rd_root(i))


def _rd_cg(a, i):
    return rd.cg_exact(_flag(a, "kind"))


def _rd_refl_co(a, i):
    return rd.reflect_coweight(_rd_root(i), rd.CoWeight.from_json(_need(i, "x")))


def _rd_refl_w(a, i):
    return rd.reflect_weight(_rd_root(i), _weight(_need(i, "beta")))


def _w_classify(a, i):
    return wy.classify_weight(_flag(a, "kind"), _weight(_need(i, "lambda")))


def _w_act(a, i):
    return wy.weyl_act(_flag(a, "kind"), wy.WeylElement.from_json(_need(i, "w")), _weight(_need(i, "lambda")))


def _w_orbit_equal(a, i):
    return wy.orbit_equivalent(_flag(a, "kind"), _weight(_need(i, "lambda")), _weight(_need(i, "mu")), a.window)


def _w_contains(a, i):
    return wy.weight_set_contains(_flag(a, "kind"), _weight(_need(i, "lambda")), _weight(_need(i, "mu")), a.window)


def _w_canonical(a, i):
    return wy.orbit_canonical(_flag(a, "kind"), _weight(_need(i, "lambda")), a.window)


def _w_support(a, i):
    return wy.support_functional_chiM(MSet.from_json(_need(i, "M")), _seq(_need(i, "x")), a.n)


def _w_pairings(a, i):
    M, x, N = MSet.from_json(_need(i, "M")), _seq(_need(i, "x")), _flag(a, "n")
    best = wy.max_sampled_pairing(M, x, N, _flag(a, "samples"), a.seed)
    return {"max_pairing": best, "support_functional": wy.support_functional_chiM(M, x, N)}


def _w_momentum(a, i):
    return wy.momentum_equivalent_chiM(MSet.from_json(_need(i, "M1")), MSet.from_json(_need(i, "M2")))


def _w_toroidal(a, i):
    return wy.toroidal_character_contains(_seq(_need(i, "w")), _weight(_need(i, "lambda")))


def _w_toroidal_all(a, i):
    return wy.toroidal_characters_all_finite(_seq(_need(i, "w")))


def _co_omega(a, i):
    return co.omega_d(_seq(_need(i, "d")), _op(_need(i, "x")), _op(_need(i, "y")))


def _co_class(a, i):
    return co.cocycle_class(_seq(_need(i, "d")))


def _unitary_op(obj) -> core.TruncOp:
    if isinstance(obj, dict):
        return core.TruncOp.from_json(obj)
    return core.TruncOp(_matrix(obj), core.Tail.scalar(1))


def _co_theta(a, i):
    return co.theta(_diag_or_op(_need(i, "d")), _unitary_op(_need(i, "g")))


def _co_affine(a, i):
    return co.affine_coadjoint(_diag_or_op(_need(i, "d")), _unitary_op(_need(i, "g")), _op(_need(i, "alpha")))


def _co_stats(a, i):
    return co.theta_orbit_stats(_seq(_need(i, "d")), _flag(a, "n"), _flag(a, "samples"), a.seed)


def _co_ures(a, i):
    blocks = [[_block(b) for b in row] for row in _need(i, "blocks")]
    return co.u_res_contains(blocks, [tuple(p) for p in _need(i, "partition")])


def _co_equiv(a, i):
    return co.one_param_equivalent(_seq(_need(i, "d1")), _seq(_need(i, "d2")))


def _cv_decompose(a, i):
    return cv.fixed_point_decomposition(_seq(_need(i, "d")), _flag(a, "n"))


def _cv_torus(a, i):
    return cv.diagonal_fixes_torus(_op(_need(i, "H")), a.n)


def _cv_chi(a, i):
    return cv.chi_d(_seq(_need(i, "d")), _weight(_need(i, "elt")))


def _cv_energy(a, i):
    return cv.energy_spectrum(cv.WeightSet.from_json(_need(i, "P")), _weight(_need(i, "nu0")), _seq(_need(i, "d")))


def _cv_wsembo(a, i):
    return cv.wsembo_infimum(_weight(_need(i, "lambda")), _seq(_need(i, "d")), _flag(a, "n"), a.kind or "A")


def _cv_ground(a, i):
    return cv.ground_state_admissible(cv.WeightSet.from_json(_need(i, "P0")), _seq(_need(i, "d")), a.n)


def _cv_ordering(a, i):
    blocks = [(float(mu), [float(v) for v in vals]) for mu, vals in _need(i, "blocks")]
    return cv.spectral_ordering_check(blocks)


def _cv_semibounded(a, i):
    return cv.id_semibounded(_seq(_need(i, "d")))


def _ch_eval(a, i):
    b = _flag(a, "b")
    if "z" in i:
        z = _complex(i["z"])
    else:
        z = cmath.exp(1j * _flag(a, "t"))
    return ch.p_b(b, z)


def _ch_char(a, i):
    return ch.voiculescu_char(_flag(a, "b"), _unitary_op(_need(i, "g")))


def _ch_atoms(a, i):
    b = _flag(a, "b")
    out = ch.FactorMeasure(as_q(b)).to_json()
    if a.n is not None:
        out["n"] = a.n
        out["max_atom_mass"] = q_to_json(ch.max_atom_mass(b, a.n))
    return out


def _ch_fourier(a, i):
    rows = ch.fourier_rows(_flag(a, "b"), _flag(a, "samples"))
    return [{"theta": t, "p": p, "nu_hat": nu, "error": e} for t, p, nu, e in rows]


def _ch_gram(a, i):
    return ch.pd_gram_check(_flag(a, "b"), _flag(a, "n"), _flag(a, "samples"), a.seed)


def _wvn_decompose(a, i):
    r = sp.wvn_decompose(_banded(i), _flag(a, "n"), _flag(a, "delta"), a.eps)
    if a.format == "csv":
        return [{"N": a.n, "delta": r.delta, "residual": r.residual_hs}]
    return r


def _wvn_sweep(a, i):
    N = _flag(a, "n")
    deltas = [float(d) for d in i.get("deltas", [0.08, 0.04, 0.02, 0.01])]
    A = _banded(i)
    return [{"N": N, "delta": d, "residual": sp.wvn_decompose(A, N, d).residual_hs} for d in deltas]


def _trotter_limit(a, i):
    return sp.trotter_limit(_matrix(_need(i, "A")), _matrix(_need(i, "B")), _flag(a, "t"), _flag(a, "n"))


TROTTER_NS = (8, 16, 32, 64, 128, 256, 512, 1024)


def _trotter_sweep(a, i):
    t = a.t if a.t is not None else 1.0
    if "A" in i or "B" in i:
        A, B = _matrix(_need(i, "A")), _matrix(_need(i, "B"))
    else:
        A, B = sp.random_hermitian_pair(a.n or 6, np.random.default_rng(a.seed))
    rows = [{"n": n, "error": sp.trotter_limit(A, B, t, n).error} for n in TROTTER_NS]
    if a.format == "csv":
        return rows
    return {"rows": rows, "slope": sp.fit_loglog_slope([r["n"] for r in rows], [r["error"] for r in rows])}


def _trotter_flow(a, i):
    return sp.perturbed_flow(_matrix(_need(i, "D")), _matrix(_need(i, "x")), _flag(a, "t"), _flag(a, "n"))


VERBS: Dict[Tuple[str, str], Verb] = {
    ("core", "hs-norm"): Verb(_core_hs, ("x",)),
    ("core", "commutator"): Verb(_core_comm, ("x", "y")),
    ("core", "schatten"): Verb(_core_schatten, ("x", "y")),
    ("core", "bracket-norm"): Verb(_core_bracket, (), sampling=True),
    ("core", "infsum"): Verb(_core_infsum, ("pairs", "c_tail", "w_tail")),
    ("rootdata", "roots"): Verb(_rd_roots, (), rows=True),
    ("rootdata", "coroot"): Verb(_rd_coroot, ("root",)),
    ("rootdata", "coroot-norm"): Verb(_rd_coroot_norm, ("root",)),
    ("rootdata", "cg"): Verb(_rd_cg),
    ("rootdata", "reflect-coweight"): Verb(_rd_refl_co, ("root", "x")),
    ("rootdata", "reflect-weight"): Verb(_rd_refl_w, ("root", "beta")),
    ("weights", "classify"): Verb(_w_classify, ("lambda",)),
    ("weights", "act"): Verb(_w_act, ("w", "lambda")),
    ("weights", "orbit-equal"): Verb(_w_orbit_equal, ("lambda", "mu")),
    ("weights", "contains"): Verb(_w_contains, ("lambda", "mu")),
    ("weights", "canonical"): Verb(_w_canonical, ("lambda",)),
    ("weights", "support"): Verb(_w_support, ("M", "x")),
    ("weights", "pairings"): Verb(_w_pairings, ("M", "x"), sampling=True),
    ("weights", "momentum-equal"): Verb(_w_momentum, ("M1", "M2")),
    ("weights", "toroidal"): Verb(_w_toroidal, ("w", "lambda")),
    ("weights", "toroidal-all"): Verb(_w_toroidal_all, ("w",)),
    ("cocycle", "omega"): Verb(_co_omega, ("d", "x", "y")),
    ("cocycle", "class"): Verb(_co_class, ("d",)),
    ("cocycle", "theta"): Verb(_co_theta, ("d", "g")),
    ("cocycle", "affine"): Verb(_co_affine, ("d", "g", "alpha")),
    ("cocycle", "stats"): Verb(_co_stats, ("d",), sampling=True),
    ("cocycle", "ures"): Verb(_co_ures, ("blocks", "partition")),
    ("cocycle", "equivalent"): Verb(_co_equiv, ("d1", "d2")),
    ("covariance", "decompose"): Verb(_cv_decompose, ("d",)),
    ("covariance", "torus"): Verb(_cv_torus, ("H",)),
    ("covariance", "chi"): Verb(_cv_chi, ("d", "elt")),
    ("covariance", "energy"): Verb(_cv_energy, ("P", "nu0", "d")),
    ("covariance", "wsembo"): Verb(_cv_wsembo, ("lambda", "d")),
    ("covariance", "ground"): Verb(_cv_ground, ("P0", "d")),
    ("covariance", "ordering"): Verb(_cv_ordering, ("blocks",)),
    ("covariance", "semibounded"): Verb(_cv_semibounded, ("d",)),
    ("character", "eval"): Verb(_ch_eval, ("z",)),
    ("character", "char"): Verb(_ch_char, ("g",)),
    ("character", "atoms"): Verb(_ch_atoms),
    ("character", "fourier"): Verb(_ch_fourier, (), rows=True),
    ("character", "gram"): Verb(_ch_gram, (), sampling=True),
    ("wvn", "decompose"): Verb(_wvn_decompose, ("A",)),
    ("wvn", "sweep"): Verb(_wvn_sweep, ("A", "deltas"), rows=True),
    ("trotter", "limit"): Verb(_trotter_limit, ("A", "B")),
    ("trotter", "sweep"): Verb(_trotter_sweep, ("A", "B"), sampling=True, rows=True),
    ("trotter", "flow"): Verb(_trotter_flow, ("D", "x")),
}

SUBCOMMANDS = ("core", "rootdata", "weights", "cocycle", "covariance", "character", "wvn", "trotter")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hilie", description="Computations for unitary representations of Hilbert-Lie groups.")
    p.add_argument("--list", action="store_true", help="list every (subcommand, verb) pair")
    p.add_argument("subcommand", nargs="?", choices=SUBCOMMANDS)
    p.add_argument("verb", nargs="?")
    p.add_argument("--kind", choices=("A", "B", "C", "D"))
    p.add_argument("--n", type=int, help="window size, matrix size or iteration count")
    p.add_argument("--trials", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--b", type=str, help="rational parameter of the factor measure")
    p.add_argument("--t", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--window", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--input", help="JSON object with structured arguments; '-' reads stdin")
    p.add_argument("--output", help="write the result here atomically instead of stdout")
    p.add_argument("--format", choices=("json", "csv"))
    return p


def run(argv) -> Tuple[int, str, object]:
    """Parse ``argv`` and execute; returns (exit code, rendered text, output path)."""
    args = build_parser().parse_args(argv)
    if args.list:
        return 0, "".join(f"{s} {v}\n" for s, v in VERBS), args.output
    if args.subcommand is None or args.verb is None:
        raise InputError("subcommand and verb are required (see --list)")
    key = (args.subcommand, args.verb)
    if key not in VERBS:
        verbs = sorted(v for s, v in VERBS if s == args.subcommand)
        raise InputError(f"unknown verb {args.verb!r} for {args.subcommand}; choose from {verbs}")
    verb = VERBS[key]
    if verb.sampling and args.seed is None:
        raise InputError("--seed is required for sampling verbs")
    if args.b is not None:
        args.b = as_q(_parse_rational(args.b))
    if args.format is None:           # row-valued verbs default to CSV
        args.format = "csv" if verb.rows else "json"
    inp = load_input(args.input)
    extra = set(inp) - set(verb.fields)
    if extra:
        raise InputError(f"unknown input fields: {sorted(extra)}")
    result = _plain(verb.fn(args, inp))
    text = dump_csv(result) if args.format == "csv" else dump_json(result) + "\n"
    return 0, text, args.output


def _parse_rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}") from exc


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, text, output = run(argv)
    except SliceTooCoarse as exc:
        res = exc.result
        extra = f" (achieved residual {fmt_float(res.residual_hs)})" if res is not None else ""
        print(f"hilie: contract violation: {exc}{extra}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"hilie: contract violation: {exc}", file=sys.stderr)
        return 2
    except (HilieError, ValueError, IndexError, KeyError, TypeError) as exc:
        print(f"hilie: error: {exc}", file=sys.stderr)
        return 1
    if output is not None:
        write_atomic(output, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
