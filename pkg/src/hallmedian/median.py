"""Median vertices of triples and larger sets, plus the two verifiers."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass, field
from itertools import combinations

from .core import SetSystem, Tree, canonical_vertex_order, set_key
from .errors import LabelMismatchError, TreeError

__all__ = [
    "median",
    "median_of_vertices",
    "MedianIndex",
    "median_set",
    "Collision",
    "VerificationReport",
    "verify_injective",
    "verify_partition",
    "ENUMERATION_THRESHOLD",
]

#: ``median_set`` enumerates every 3-subset up to this size.
ENUMERATION_THRESHOLD = 12


def median_of_vertices(t: Tree, u: int, v: int, w: int) -> int:
    """Vertex shared by the three pairwise paths between ``u``, ``v``, ``w``.

    Walks from ``w`` towards ``u`` until it meets the ``u``-``v`` path.
    """
    parent = t.parents_from(u)
    on_path = {v}
    x = v
    while x != u:
        x = parent[x]
        on_path.add(x)
    x = w
    while x not in on_path:
        x = parent[x]
    return x


def median(t: Tree, x: str, y: str, z: str) -> int:
    if len({x, y, z}) != 3:
        raise ValueError(f"median needs three distinct labels, got {(x, y, z)}")
    return median_of_vertices(t, t.vertex(x), t.vertex(y), t.vertex(z))


class MedianIndex:
    """Answers many median queries on one tree through LCA lookups.

    The tree is rooted at its smallest vertex id; the median of three
    vertices is the deepest of their three pairwise LCAs.  Binary lifting
    gives ``O(log n)`` per query.
    """

    def __init__(self, t: Tree):
        self.tree = t
        root = t.vertices[0]
        parent = t.parents_from(root)
        self.depth = {root: 0}
        for v in parent:
            if parent[v] is not None:
                self.depth[v] = self.depth[parent[v]] + 1
        up = [{v: (p if p is not None else v) for v, p in parent.items()}]
        for _ in range(max(self.depth.values()).bit_length()):
            prev = up[-1]
            up.append({v: prev[prev[v]] for v in prev})
        self._up = up

    def lca(self, u: int, v: int) -> int:
        depth, up = self.depth, self._up
        if depth[u] < depth[v]:
            u, v = v, u
        diff = depth[u] - depth[v]
        k = 0
        while diff:
            if diff & 1:
                u = up[k][u]
            diff >>= 1
            k += 1
        if u == v:
            return u
        for k in range(len(up) - 1, -1, -1):
            if up[k][u] != up[k][v]:
                u, v = up[k][u], up[k][v]
        return up[0][u]

    def median_of_vertices(self, u: int, v: int, w: int) -> int:
        return max(self.lca(u, v), self.lca(u, w), self.lca(v, w), key=self.depth.__getitem__)

    def median(self, x: str, y: str, z: str) -> int:
        t = self.tree
        return self.median_of_vertices(t.vertex(x), t.vertex(y), t.vertex(z))


def _fan_medians(index: MedianIndex, ys: list[str]) -> list[int]:
    y1, y2 = ys[0], ys[1]
    return [index.median(y1, y2, y) for y in ys[2:]]


def median_set(t: Tree, Y: Iterable[str], *, threshold: int = ENUMERATION_THRESHOLD,
               index: MedianIndex | None = None) -> frozenset[int]:
    """All medians of 3-subsets of ``Y``.

    Above ``threshold`` elements the fan shortcut is tried first: when the
    medians of ``{y1, y2, y}`` (``y1 < y2`` the two smallest labels) are
    pairwise distinct, ``Y`` spans a caterpillar with spine ``y1``-``y2``
    and those medians already form the whole set.  Otherwise all triples
    are enumerated.
    """
    ys = sorted(set(Y))
    if len(ys) < 3:
        raise ValueError("median_set needs at least 3 elements")
    for y in ys:
        t.vertex(y)
    index = index or MedianIndex(t)
    if len(ys) > threshold:
        fan = _fan_medians(index, ys)
        if len(set(fan)) == len(fan):
            return frozenset(fan)
    return frozenset(index.median(*s) for s in combinations(ys, 3))


@dataclass(frozen=True)
class Collision:
    """Two member sets sharing the vertex ``vertex``."""

    first: frozenset[str]
    second: frozenset[str]
    vertex: int


@dataclass(frozen=True)
class VerificationReport:
    """Median assignment for a family plus the verdict.

    ``kind`` is ``"injective"`` (one vertex per triple) or ``"partition"``
    (one vertex block per set).  ``collisions`` lists every shared vertex,
    ``uncovered`` every interior vertex outside all blocks (partition only).
    """

    kind: str
    assignment: dict[frozenset[str], int | frozenset[int]]
    collisions: tuple[Collision, ...] = ()
    uncovered: tuple[int, ...] = ()
    _tree: Tree | None = field(default=None, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return not self.collisions and not self.uncovered

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_document(self) -> dict:
        ids = canonical_vertex_order(self._tree) if self._tree is not None else {}
        vid = lambda v: ids.get(v, v)  # noqa: E731

        def name(s):
            return " ".join(set_key(s))

        assignment = {}
        for s in sorted(self.assignment, key=set_key):
            val = self.assignment[s]
            assignment[name(s)] = sorted(map(vid, val)) if isinstance(val, frozenset) else vid(val)
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "assignment": assignment,
            "collisions": [{"sets": [list(set_key(c.first)), list(set_key(c.second))], "vertex": vid(c.vertex)}
                           for c in self.collisions],
            "uncovered": sorted(vid(v) for v in self.uncovered),
        }


def _check_labels(t: Tree, C: SetSystem):
    missing = sorted(x for x in C.ground if not t.has_label(x))
    if missing:
        raise LabelMismatchError(f"ground elements {missing} do not label the tree")
    not_leaf = sorted(x for x in C.ground if t.degree(t.vertex(x)) != 1)
    if not_leaf and len(t.vertices) > 1:
        raise LabelMismatchError(f"ground elements {not_leaf} label interior vertices")


def _collisions(owners: dict[int, list[frozenset[str]]]) -> tuple[Collision, ...]:
    out = []
    for v, sets in owners.items():
        sets = sorted(sets, key=set_key)
        out.extend(Collision(a, b, v) for a, b in combinations(sets, 2))
    out.sort(key=lambda c: (set_key(c.first), set_key(c.second), c.vertex))
    return tuple(out)


def verify_injective(t: Tree, C: SetSystem) -> VerificationReport:
    """Check that the triples of ``C`` have pairwise distinct medians in ``t``."""
    if not C.is_triple_system:
        raise ValueError("verify_injective needs a triple system")
    _check_labels(t, C)
    index = MedianIndex(t)
    assignment = {}
    owners = defaultdict(list)
    for s in C.sets:
        v = index.median(*set_key(s))
        assignment[s] = v
        owners[v].append(s)
    return VerificationReport("injective", assignment, _collisions(owners), (), t)


def verify_partition(t: Tree, C: SetSystem, *, threshold: int = ENUMERATION_THRESHOLD) -> VerificationReport:
    """Check that the median sets of ``C`` partition the interior of ``t``."""
    _check_labels(t, C)
    if len(t.vertices) < 3:
        raise TreeError("tree has no interior vertex")
    index = MedianIndex(t)
    assignment = {}
    owners = defaultdict(list)
    for s in C.sets:
        block = median_set(t, s, threshold=threshold, index=index)
        assignment[s] = block
        for v in block:
            owners[v].append(s)
    uncovered = tuple(v for v in t.interior if v not in owners)
    return VerificationReport("partition", assignment, _collisions(owners), uncovered, t)
