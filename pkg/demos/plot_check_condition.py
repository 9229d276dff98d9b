"""
Checking the strengthened Hall condition
========================================

A family of triples passes when every subfamily covers at least two more
elements than it has members.  Two checkers decide this: an exhaustive
one and a matching-based one that scales to hundreds of elements.
"""

from hallmedian import check_bruteforce, check_poly, parse_set_system, tight_sets

good = parse_set_system("1 2 3\n1 3 4\n3 4 5")
bad = parse_set_system("1 2 3\n1 2 4\n1 3 4\n4 5 6")

# %%
# Both checkers agree on the small family.
print(check_poly(good).status, check_bruteforce(good).status)

# %%
# The second family covers 6 elements with 4 sets, which is fine overall,
# but its first three triples only cover {1, 2, 3, 4}.
out = check_bruteforce(bad)
print(out.describe())

# the polynomial checker finds a pair whose deletion breaks Hall's condition
out = check_poly(bad)
print(out.pair, [sorted(s) for s in out.subfamily])

# %%
# Tight subfamilies (exactly two spare elements) are closed under union and
# intersection whenever two of them overlap.
P = tight_sets(good)
for member in P.members:
    print([sorted(s) for s in member.sets], sorted(member.union))
print("patchwork:", P.is_patchwork())
