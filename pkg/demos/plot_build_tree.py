"""
Building a tree with distinct medians
=====================================

When the condition holds there is a binary tree with leaf set X in which
every triple has its own median vertex.  ``build_tree`` constructs one by
removing elements one at a time and hanging them back on the way out.
"""

from hallmedian import build_tree, parse_set_system, serialize_newick, verify_injective

C = parse_set_system("1 2 3\n2 3 5\n1 4 6\n4 5 6")
print(C.coverages())

# %%
# Every element lies in exactly two triples here, so the first step merges
# the two triples through element 1 into one.
trace = []
tree = build_tree(C, trace)
for step in trace:
    print(step.to_document())

# %%
newick = serialize_newick(tree)
print(newick)

# the verifier recomputes all medians from scratch
report = verify_injective(tree, C)
print(report.verdict, report.to_document()["assignment"])

# %%
# Adding a triple that shares a median with an existing one is caught.
crowded = parse_set_system(C.to_text() + "1 2 5\n")
print(verify_injective(tree, crowded).to_document()["collisions"])
