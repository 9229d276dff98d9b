"""Independent reference implementations used as test oracles.

Nothing here calls into the routines it is used to check.
"""

from itertools import combinations


def raw_adjacency(t):
    return {v: set(t.neighbors(v)) for v in t.vertices}


def path_vertices(adj, u, v):
    """Vertices of the u-v path by depth-first search with an explicit stack."""
    stack = [(u, [u])]
    seen = {u}
    while stack:
        w, path = stack.pop()
        if w == v:
            return path
        for z in adj[w]:
            if z not in seen:
                seen.add(z)
                stack.append((z, path + [z]))
    raise AssertionError("disconnected")


def median_by_paths(t, x, y, z):
    """Intersect the three pairwise label paths; must be a single vertex."""
    adj = raw_adjacency(t)
    vx, vy, vz = t.vertex(x), t.vertex(y), t.vertex(z)
    common = set(path_vertices(adj, vx, vy)) & set(path_vertices(adj, vx, vz)) & set(path_vertices(adj, vy, vz))
    assert len(common) == 1, common
    return common.pop()


def vertex_median_by_paths(t, a, b, c):
    adj = raw_adjacency(t)
    common = set(path_vertices(adj, a, b)) & set(path_vertices(adj, a, c)) & set(path_vertices(adj, b, c))
    assert len(common) == 1
    return common.pop()


def violating_subfamilies(sets, weight=lambda s: 1):
    """All non-empty subfamilies with |union| - 2 < sum of weights (plain loops)."""
    sets = list(sets)
    out = []
    for k in range(1, len(sets) + 1):
        for sub in combinations(sets, k):
            union = set().union(*sub)
            if len(union) - 2 < sum(weight(s) for s in sub):
                out.append(sub)
    return out


def condition_holds(sets):
    sets = list(sets)
    for k in range(1, len(sets) + 1):
        for sub in combinations(sets, k):
            if len(set().union(*sub)) < k + 2:
                return False
    return True


def partition_condition(sets, ground):
    """(inequality holds, equality holds) by plain enumeration."""
    w = lambda s: len(s) - 2  # noqa: E731
    ineq = not violating_subfamilies(sets, w)
    eq = len(ground) - 2 == sum(w(s) for s in sets)
    return ineq, eq


def tight_subfamilies(sets):
    sets = list(sets)
    out = set()
    for k in range(1, len(sets) + 1):
        for sub in combinations(sets, k):
            if len(set().union(*sub)) == k + 2:
                out.add(frozenset(sub))
    return out


def max_matching_size(adj_left):
    """Exhaustive maximum matching size: try every choice for each left vertex."""
    best = 0

    def go(i, used, size):
        nonlocal best
        if size + (len(adj_left) - i) <= best:
            return
        if i == len(adj_left):
            best = max(best, size)
            return
        for r in adj_left[i]:
            if r not in used:
                used.add(r)
                go(i + 1, used, size + 1)
                used.discard(r)
        go(i + 1, used, size)

    go(0, set(), 0)
    return best


def has_sdr(sets):
    sets = [list(s) for s in sets]
    return max_matching_size(sets) == len(sets)


def splits(t):
    """Label bipartitions, one per edge."""
    labels = set(t.labels.values())
    adj = raw_adjacency(t)
    out = set()
    for u, v in t.edges:
        side = set()
        stack = [v]
        seen = {u, v}
        while stack:
            w = stack.pop()
            if t.label(w) is not None:
                side.add(t.label(w))
            for z in adj[w]:
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
        side = frozenset(side)
        out.add(frozenset({side, frozenset(labels) - side}))
    return out


def label_distances(t):
    adj = raw_adjacency(t)
    names = sorted(t.labels.values())
    return {(a, b): len(path_vertices(adj, t.vertex(a), t.vertex(b))) - 1 for a, b in combinations(names, 2)}


def isomorphic(t1, t2):
    """Labelled-tree isomorphism test via splits, distances and vertex counts."""
    return (len(t1.vertices) == len(t2.vertices)
            and set(t1.labels.values()) == set(t2.labels.values())
            and label_distances(t1) == label_distances(t2)
            and splits(t1) == splits(t2))


def spanning_subtree(t, names):
    """Vertex set and restricted degrees of the minimal subtree connecting ``names``."""
    adj = raw_adjacency(t)
    verts = set()
    names = list(names)
    for a in names[1:]:
        verts |= set(path_vertices(adj, t.vertex(names[0]), t.vertex(a)))
    if len(names) == 1:
        verts = {t.vertex(names[0])}
    deg = {v: len(adj[v] & verts) for v in verts}
    return verts, deg
