"""
Planted instances and checker timings
=====================================

Instances are generated backwards: grow a random binary tree, pick
interior vertices and take one leaf from each branch around them.  The
resulting triples have distinct medians by construction.
"""

import statistics

from hallmedian import GenSpec, build_tree, check_poly, generate, verify_injective
from hallmedian.genbench import bench_checkers, write_bench_csv

C, planted = generate(GenSpec(leaf_count=30, set_count=20, seed=4))
print(len(C.ground), len(C.sets), check_poly(C).status)

# %%
# The rebuilt tree usually differs from the planted one, but it also
# gives every triple its own median.
tree = build_tree(C)
print(verify_injective(tree, C).verdict, verify_injective(planted, C).verdict)

# %%
# A violating instance: extra triples squeezed into a four-element window.
V, _ = generate(GenSpec(9, 4, seed=4, violating=True))
print(check_poly(V).describe())

# %%
# Timings of both checkers on small instances (microseconds, median of 3).
rows = bench_checkers([6, 8, 10, 12], range(3), modes=("poly", "brute"), repeats=3)
print(write_bench_csv(rows))

for mode in ("poly", "brute"):
    print(mode, statistics.median(r.micros for r in rows if r.mode == mode))
