"""Root data of the four classical kinds and the bracket constant c_g.

Run: python3 demos/01_root_data.py
"""
from hilie.core import estimate_bracket_norm
from hilie.rootdata import cg_exact, cg_sq_exact, coroot, coroot_norm_sq, roots_in_window

for kind in "ABCD":
    shapes = {}
    for r in roots_in_window(kind, 3):
        shapes.setdefault(r.shape, (r, coroot_norm_sq(r)))
    print(f"kind {kind}:")
    for shape, (r, nsq) in shapes.items():
        print(f"  root {str(r):10s} coroot {coroot(r).as_dict()}  |coroot|^2 = {nsq}")
    print(f"  c_g = 2 / min |coroot| = {cg_exact(kind):.6f}   (c_g^2 = {cg_sq_exact(kind)})")

print("\nMonte-Carlo check of |[x, y]| <= c_g |x| |y| on window 16:")
for kind in "ABCD":
    rep = estimate_bracket_norm(kind, 16, 500, seed=1)
    print(f"  {kind}: sampled max {rep.sampled_max:.4f}, witness ratio {rep.witness_ratio:.12f}, c_g {rep.exact_bound:.6f}")
