"""Hilbert-Lie toolkit: exact root-system combinatorics and operator numerics.

Submodules:

- ``sequences``: exact diagonal sequences with closed-form tails
- ``core``: windowed operators, Schatten norms, bracket-norm constants
- ``rootdata``: roots, coroots and reflections for the four classical kinds
- ``weight`` and ``weyl``: weights, Weyl group orbits, weight-set membership
- ``cocycles``: the cocycles omega_d, their classes and Theta
- ``covariance``: fixed-point groups, energy spectra, ground states
- ``characters``: the characters det p_b(g) and the factor measure
- ``spectral``: Weyl-von Neumann slicing, Trotter products, perturbed flows
"""
from .errors import ContractViolation, HilieError, InputError
from .sequences import DiagonalSequence, TailLaw
from .core import Tail, TruncOp, check_schatten, commutator, estimate_bracket_norm, hs_norm
from .weight import MSet, Weight
from .rootdata import CoWeight, Root, cg_exact, coroot, coroot_norm_sq, roots_in_window
from .weyl import (WeylElement, classify_weight, orbit_canonical, orbit_equivalent,
                   weight_set_contains, weyl_act)
from .cocycles import cocycle_class, omega_d, theta
from .covariance import WeightSet, ground_state_admissible, wsembo_infimum
from .characters import max_atom_mass, p_b, voiculescu_char
from .spectral import BandedOp, trotter_limit, wvn_decompose

__all__ = [
    "ContractViolation", "HilieError", "InputError",
    "DiagonalSequence", "TailLaw", "Tail", "TruncOp",
    "check_schatten", "commutator", "estimate_bracket_norm", "hs_norm",
    "MSet", "Weight", "CoWeight", "Root",
    "cg_exact", "coroot", "coroot_norm_sq", "roots_in_window",
    "WeylElement", "classify_weight", "orbit_canonical", "orbit_equivalent",
    "weight_set_contains", "weyl_act",
    "cocycle_class", "omega_d", "theta",
    "WeightSet", "ground_state_admissible", "wsembo_infimum",
    "max_atom_mass", "p_b", "voiculescu_char",
    "BandedOp", "trotter_limit", "wvn_decompose",
]
