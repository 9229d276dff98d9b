"""
Median blocks that partition the interior
=========================================

For sets larger than three, each set Y owns the medians of all its
3-subsets.  Those blocks tile the interior vertices exactly when the
weighted condition holds with equality for the whole family.
"""

from hallmedian import (build_partition_tree, check_partition_condition, median_set, parse_set_system,
                        serialize_newick, verify_partition)

C = parse_set_system("1 2 3 4\n3 4 5 6")
print(check_partition_condition(C).to_document())

# %%
tree = build_partition_tree(C)
print(serialize_newick(tree))
for y in C.sets:
    print(sorted(y), sorted(median_set(tree, y)))

# %%
report = verify_partition(tree, C)
print(report.verdict)

# %%
# Two sets sharing three elements can never work, and a family that is
# one block short leaves an interior vertex uncovered.
print(check_partition_condition(parse_set_system("1 2 3 4\n1 2 3 5")).describe())
print(check_partition_condition(parse_set_system("1 2 3\n3 4 5")).describe())
