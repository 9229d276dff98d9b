"""Set systems, leaf-labelled trees, tree surgery and Newick I/O.

Elements are opaque strings compared in plain ``str`` order (code point
order, which coincides with UTF-8 byte order).  Every tie-break in the
package refers to that order.
"""

from __future__ import annotations

import json
import re
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import count

from .errors import (
    DuplicateLabelError,
    DuplicateSetError,
    EdgeNotFoundError,
    EmptyInputError,
    LabelNotFoundError,
    MalformedTokenError,
    SetTooSmallError,
    TreeError,
    UnbalancedParensError,
    UnknownElementError,
    UnlabeledLeafError,
)

__all__ = [
    "SetSystem",
    "Tree",
    "set_key",
    "validate_element",
    "parse_set_system",
    "load_set_system",
    "parse_newick",
    "load_newick",
    "serialize_newick",
    "canonical_vertex_order",
    "subdivide_and_attach",
    "edge_at_leaf",
    "star",
    "caterpillar",
    "canonicalize_to_binary",
]

_FORBIDDEN = re.compile(r"[\s(),:;\[\]]")


def validate_element(name: str) -> str:
    if not isinstance(name, str) or not name or _FORBIDDEN.search(name):
        raise MalformedTokenError(f"invalid element name {name!r}")
    return name


def set_key(s: Iterable[str]) -> tuple[str, ...]:
    """Canonical sort key of a member set: its sorted elements."""
    return tuple(sorted(s))


@dataclass(frozen=True)
class SetSystem:
    """A ground set ``X`` together with a duplicate-free family of subsets.

    ``ground`` keeps the declared order; ``sets`` is stored in canonical
    order (each set compared by its sorted element tuple).  Use
    :meth:`from_sets` to build one from arbitrary iterables.
    """

    ground: tuple[str, ...]
    sets: tuple[frozenset[str], ...]
    _ground_set: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ground = tuple(self.ground)
        for x in ground:
            validate_element(x)
        gset = frozenset(ground)
        if len(gset) != len(ground):
            raise MalformedTokenError("ground set declares an element twice")
        seen = set()
        for s in self.sets:
            s = frozenset(s)
            if len(s) < 3:
                raise SetTooSmallError(f"set {set_key(s)} has fewer than 3 elements")
            if not s <= gset:
                extra = sorted(s - gset)
                raise UnknownElementError(f"elements {extra} are outside the ground set")
            if s in seen:
                raise DuplicateSetError(f"set {set_key(s)} occurs twice")
            seen.add(s)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "sets", tuple(sorted(seen, key=set_key)))
        object.__setattr__(self, "_ground_set", gset)

    @classmethod
    def _trusted(cls, ground: Sequence[str], sets: Iterable[frozenset[str]]) -> SetSystem:
        # caller guarantees validity (internal reductions only)
        obj = object.__new__(cls)
        object.__setattr__(obj, "ground", tuple(ground))
        object.__setattr__(obj, "sets", tuple(sorted(sets, key=set_key)))
        object.__setattr__(obj, "_ground_set", frozenset(obj.ground))
        return obj

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[str]], ground: Sequence[str] | None = None) -> SetSystem:
        sets = [frozenset(s) for s in sets]
        if ground is None:
            ground = sorted(frozenset().union(*sets))
        return cls(tuple(ground), tuple(sets))

    @property
    def ground_set(self) -> frozenset[str]:
        return self._ground_set

    @property
    def is_triple_system(self) -> bool:
        return all(len(s) == 3 for s in self.sets)

    def coverage(self, x: str) -> int:
        """Number of member sets containing ``x``."""
        return sum(1 for s in self.sets if x in s)

    def coverages(self) -> dict[str, int]:
        cov = dict.fromkeys(self.ground, 0)
        for s in self.sets:
            for x in s:
                cov[x] += 1
        return cov

    def union_of(self, family: Iterable[Iterable[str]] | None = None) -> frozenset[str]:
        family = self.sets if family is None else family
        return frozenset().union(*map(frozenset, family))

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    def __contains__(self, s):
        return frozenset(s) in set(self.sets)

    def to_text(self) -> str:
        lines = ["#X: " + " ".join(self.ground)]
        lines += [" ".join(set_key(s)) for s in self.sets]
        return "\n".join(lines) + "\n"

    def to_document(self) -> dict:
        return {"elements": list(self.ground), "sets": [list(set_key(s)) for s in self.sets]}


def _check_members(raw_sets: list[list[str]], declared: list[str] | None) -> SetSystem:
    seen = set()
    for members in raw_sets:
        for x in members:
            validate_element(x)
        if len(set(members)) != len(members):
            raise MalformedTokenError(f"set {members} repeats an element")
        key = frozenset(members)
        if key in seen:
            raise DuplicateSetError(f"set {set_key(key)} occurs twice")
        seen.add(key)
    return SetSystem.from_sets(raw_sets, declared)


def parse_set_system(document: str | Mapping) -> SetSystem:
    """Parse an instance from plain text, JSON text, or a parsed mapping.

    Plain text: an optional first line ``#X: e1 e2 ...`` declares the
    ground set, other ``#`` lines are comments, and every remaining
    non-blank line lists one set.  Structured form: ``{"elements": [...],
    "sets": [[...], ...]}`` with ``elements`` optional.
    """
    if isinstance(document, Mapping):
        return _parse_structured(document)
    if not isinstance(document, str):
        raise MalformedTokenError(f"unsupported document type {type(document).__name__}")
    stripped = document.strip()
    if stripped.startswith("{"):
        try:
            return _parse_structured(json.loads(stripped))
        except json.JSONDecodeError as exc:
            raise MalformedTokenError(f"invalid JSON instance: {exc}") from None

    declared = None
    raw_sets = []
    first = True
    for line in document.splitlines():
        line = line.strip()
        if not line:
            continue
        if first and line.startswith("#X:"):
            declared = line[3:].split()
            first = False
            continue
        first = False
        if line.startswith("#"):
            continue
        raw_sets.append(line.split())
    return _check_members(raw_sets, declared)


def _parse_structured(doc) -> SetSystem:
    if not isinstance(doc, Mapping) or "sets" not in doc:
        raise MalformedTokenError("structured instance needs a 'sets' field")
    declared = doc.get("elements")
    if declared is not None and not (isinstance(declared, list) and all(isinstance(x, str) for x in declared)):
        raise MalformedTokenError("'elements' must be an array of strings")
    raw = doc["sets"]
    if not isinstance(raw, list) or not all(isinstance(s, list) and all(isinstance(x, str) for x in s) for s in raw):
        raise MalformedTokenError("'sets' must be an array of arrays of strings")
    return _check_members([list(s) for s in raw], declared)


def load_set_system(path) -> SetSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_set_system(fh.read())


class Tree:
    """Unrooted tree with integer vertex ids and optional string labels.

    Labels are unique.  A labelled vertex is usually a leaf, but interior
    labels are allowed so that trees with ``X`` inside the vertex set can be
    represented before :func:`canonicalize_to_binary`.  Instances are
    treated as immutable; all surgery returns new trees.
    """

    __slots__ = ("_adj", "_label", "_vertex")

    def __init__(self, adjacency: Mapping[int, Iterable[int]], labels: Mapping[int, str] | None = None):
        adj = {int(v): frozenset(nbrs) for v, nbrs in adjacency.items()}
        if not adj:
            raise TreeError("a tree needs at least one vertex")
        n_half_edges = 0
        for v, nbrs in adj.items():
            for u in nbrs:
                if u == v:
                    raise TreeError(f"self-loop at vertex {v}")
                if u not in adj or v not in adj[u]:
                    raise TreeError(f"edge {v}-{u} is not symmetric")
            n_half_edges += len(nbrs)
        if n_half_edges // 2 != len(adj) - 1:
            raise TreeError("edge count must equal vertex count minus one")
        start = next(iter(adj))
        seen = {start}
        queue = [start]
        while queue:
            v = queue.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        if len(seen) != len(adj):
            raise TreeError("graph is not connected")

        labels = dict(labels or {})
        vertex = {}
        for v, name in labels.items():
            if v not in adj:
                raise TreeError(f"label {name!r} on unknown vertex {v}")
            validate_element(name)
            if name in vertex:
                raise DuplicateLabelError(f"label {name!r} used twice")
            vertex[name] = v
        self._adj = adj
        self._label = labels
        self._vertex = vertex

    @classmethod
    def _trusted(cls, adjacency: dict[int, frozenset[int]], labels: dict[int, str]) -> Tree:
        # caller guarantees a valid tree (surgery on an existing tree)
        obj = object.__new__(cls)
        obj._adj = adjacency
        obj._label = labels
        obj._vertex = {name: v for v, name in labels.items()}
        return obj

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], labels: Mapping[int, str] | None = None,
                   vertices: Iterable[int] = ()) -> Tree:
        adj = {v: set() for v in vertices}
        for u, v in edges:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        for v in labels or {}:
            adj.setdefault(v, set())
        return cls(adj, labels)

    # -- structure -------------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._adj))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((u, v) for u in self._adj for v in self._adj[u] if u < v))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self._adj[v]))

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def adjacency(self) -> dict[int, frozenset[int]]:
        return dict(self._adj)

    @property
    def leaves(self) -> tuple[int, ...]:
        if len(self._adj) == 1:
            return self.vertices
        return tuple(v for v in self.vertices if len(self._adj[v]) == 1)

    @property
    def interior(self) -> tuple[int, ...]:
        if len(self._adj) == 1:
            return ()
        return tuple(v for v in self.vertices if len(self._adj[v]) > 1)

    # -- labels ----------------------------------------------------------

    @property
    def labels(self) -> dict[int, str]:
        return dict(self._label)

    def label(self, v: int) -> str | None:
        return self._label.get(v)

    def vertex(self, name: str) -> int:
        try:
            return self._vertex[name]
        except KeyError:
            raise LabelNotFoundError(f"label {name!r} not in tree") from None

    def has_label(self, name: str) -> bool:
        return name in self._vertex

    @property
    def leaf_labels(self) -> tuple[str, ...]:
        return tuple(sorted(self._label[v] for v in self.leaves if v in self._label))

    @property
    def label_set(self) -> frozenset[str]:
        return frozenset(self._vertex)

    def is_binary(self) -> bool:
        """True for a binary phylogenetic tree on its labels.

        Labelled vertices are exactly the leaves and every other vertex has
        degree 3.
        """
        if len(self._adj) == 1:
            return len(self._label) == 1
        for v, nbrs in self._adj.items():
            if len(nbrs) == 1:
                if v not in self._label:
                    return False
            elif len(nbrs) != 3 or v in self._label:
                return False
        return True

    # -- paths -----------------------------------------------------------

    def parents_from(self, root: int) -> dict[int, int | None]:
        parent = {root: None}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in self._adj[v]:
                if u not in parent:
                    parent[u] = v
                    queue.append(u)
        return parent

    def path(self, u: int, v: int) -> list[int]:
        """Vertices on the unique ``u``-``v`` path, endpoints included."""
        parent = self.parents_from(u)
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        out.reverse()
        return out

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self._adj == other._adj and self._label == other._label

    def __hash__(self):
        return hash((frozenset(self._adj.items()), frozenset(self._label.items())))

    def __repr__(self):
        try:
            return f"Tree({serialize_newick(self)!r})"
        except TreeError:
            return f"Tree(vertices={len(self._adj)}, labels={len(self._label)})"


def star(labels: Sequence[str]) -> Tree:
    """Star with centre 0 and leaves 1..k labelled in the given order."""
    return Tree.from_edges([(0, i + 1) for i in range(len(labels))],
                           {i + 1: name for i, name in enumerate(labels)})


def caterpillar(labels: Sequence[str]) -> Tree:
    """Binary caterpillar with the leaves in the given order along the spine.

    For ``k >= 3`` labels the spine vertices are ``0..k-3``; leaf ``i`` gets
    id ``k - 2 + i``.
    """
    k = len(labels)
    if k == 1:
        return Tree({0: ()}, {0: labels[0]})
    if k == 2:
        return Tree.from_edges([(0, 1)], {0: labels[0], 1: labels[1]})
    spine = k - 2
    leaf = [spine + i for i in range(k)]
    edges = [(i, i + 1) for i in range(spine - 1)]
    edges.append((0, leaf[0]))
    for i in range(1, k - 1):
        edges.append((i - 1, leaf[i]))
    edges.append((spine - 1, leaf[k - 1]))
    return Tree.from_edges(edges, {leaf[i]: labels[i] for i in range(k)})


def edge_at_leaf(t: Tree, name: str) -> tuple[int, int]:
    """The edge incident to the leaf carrying ``name``."""
    v = t.vertex(name)
    nbrs = t.neighbors(v)
    if len(nbrs) != 1:
        raise TreeError(f"{name!r} does not label a leaf")
    return (v, nbrs[0])


def subdivide_and_attach(t: Tree, edge: tuple[int, int], label: str) -> Tree:
    """Split ``edge`` with a new midpoint and hang a new leaf ``label`` on it.

    The midpoint receives id ``max(vertices) + 1`` and the leaf the next id;
    all existing ids and labels are kept.
    """
    u, v = edge
    if not t.has_edge(u, v):
        raise EdgeNotFoundError(f"{u}-{v} is not an edge")
    validate_element(label)
    if t.has_label(label):
        raise DuplicateLabelError(f"label {label!r} already in tree")
    adj = t.adjacency()
    mid = max(adj) + 1
    leaf = mid + 1
    adj[u] = (adj[u] - {v}) | {mid}
    adj[v] = (adj[v] - {u}) | {mid}
    adj[mid] = frozenset((u, v, leaf))
    adj[leaf] = frozenset((mid,))
    labels = t.labels
    labels[leaf] = label
    return Tree._trusted(adj, labels)


# -- canonical traversal and Newick ------------------------------------------


def _canonical_layout(t: Tree):
    """Root, children lists (canonically ordered) and preorder of ``t``.

    The root is the neighbour of the smallest-labelled leaf; children are
    ordered by the smallest label in their subtree.
    """
    vertices = t.vertices
    if len(vertices) == 1:
        return vertices[0], {vertices[0]: []}, [vertices[0]]
    leaves = t.leaves
    unlabeled = [v for v in leaves if t.label(v) is None]
    if unlabeled:
        raise UnlabeledLeafError(f"degree-1 vertices {unlabeled} carry no label")
    first = min(leaves, key=lambda v: t.label(v))
    root = t.neighbors(first)[0]
    parent = t.parents_from(root)
    bfs = list(parent)  # insertion order of parents_from is BFS order
    key = {}
    for v in reversed(bfs):
        own = t.label(v)
        ks = [key[u] for u in t.neighbors(v) if u != parent[v]]
        if own is not None:
            ks.append(own)
        key[v] = min(ks)
    children = {v: sorted((u for u in t.neighbors(v) if u != parent[v]), key=key.__getitem__) for v in bfs}
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(reversed(children[v]))
    return root, children, order


def canonical_vertex_order(t: Tree) -> dict[int, int]:
    """Map each vertex to its position in the canonical Newick preorder."""
    _, _, order = _canonical_layout(t)
    return {v: i for i, v in enumerate(order)}


def serialize_newick(t: Tree) -> str:
    """Canonical Newick string of ``t``.

    Two trees serialize identically iff they are isomorphic as labelled
    trees (for trees without unlabelled degree-2 vertices).
    """
    vertices = t.vertices
    if len(vertices) == 1:
        name = t.label(vertices[0])
        if name is None:
            raise UnlabeledLeafError("single vertex carries no label")
        return f"({name});"
    if len(vertices) == 2:
        return "(" + ",".join(sorted(t.label(v) or "" for v in vertices)) + ");"
    root, children, order = _canonical_layout(t)
    text = {}
    for v in reversed(order):
        name = t.label(v) or ""
        kids = children[v]
        text[v] = "(" + ",".join(text.pop(u) for u in kids) + ")" + name if kids else name
    return text[root] + ";"


_NEWICK_TOKEN = re.compile(r"\s*(?:(\()|(\))|(,)|(:)|(;)|(\[[^\]]*\])|('(?:[^']|'')*')|([^\s(),:;\[\]']+))")


def parse_newick(text: str) -> Tree:
    """Parse a Newick string into an unrooted :class:`Tree`.

    Branch lengths and bracketed comments are discarded.  A root of
    degree 2 without a label is suppressed; an unlabelled root of degree 1
    is removed.
    """
    if not text or not text.strip():
        raise EmptyInputError("empty Newick input")
    ids = count()
    root = next(ids)
    adj = {root: set()}
    labels = {}
    stack = []
    current = root
    pos = 0
    done = False
    expect_length = False
    while pos < len(text):
        m = _NEWICK_TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise MalformedTokenError(f"unexpected character at offset {pos}")
        pos = m.end()
        lpar, rpar, comma, colon, semi, comment, quoted, word = m.groups()
        if comment is not None:
            continue
        if done:
            raise MalformedTokenError("text after terminating ';'")
        if expect_length:
            expect_length = False
            if word is not None:
                try:
                    float(word)
                except ValueError:
                    raise MalformedTokenError(f"bad branch length {word!r}") from None
                continue
            raise MalformedTokenError("':' not followed by a branch length")
        if lpar:
            child = next(ids)
            adj[child] = {current}
            adj[current].add(child)
            stack.append(current)
            current = child
        elif comma:
            if not stack:
                raise UnbalancedParensError("',' outside parentheses")
            parent = stack[-1]
            child = next(ids)
            adj[child] = {parent}
            adj[parent].add(child)
            current = child
        elif rpar:
            if not stack:
                raise UnbalancedParensError("unmatched ')'")
            current = stack.pop()
        elif colon:
            expect_length = True
        elif semi:
            if stack:
                raise UnbalancedParensError("unclosed '('")
            done = True
        else:
            name = quoted[1:-1].replace("''", "'") if quoted is not None else word
            if current in labels:
                raise MalformedTokenError(f"vertex labelled twice ({labels[current]!r}, {name!r})")
            validate_element(name)
            labels[current] = name
    if stack:
        raise UnbalancedParensError("unclosed '('")
    if not done:
        raise MalformedTokenError("missing terminating ';'")

    seen = {}
    for v, name in labels.items():
        if name in seen:
            raise DuplicateLabelError(f"leaf label {name!r} occurs twice")
        seen[name] = v
    for v, nbrs in adj.items():
        if len(nbrs) == 1 and v != root and v not in labels:
            raise MalformedTokenError("empty leaf label")

    if root not in labels and len(adj) > 1:
        nbrs = sorted(adj[root])
        if len(nbrs) == 2:
            a, b = nbrs
            adj[a].discard(root)
            adj[b].discard(root)
            adj[a].add(b)
            adj[b].add(a)
            del adj[root]
        elif len(nbrs) == 1:
            adj[nbrs[0]].discard(root)
            del adj[root]
    if root in adj and root not in labels and len(adj) == 1:
        raise EmptyInputError("tree has no labelled vertex")

    # renumber consecutively in creation order
    new_id = {v: i for i, v in enumerate(sorted(adj))}
    return Tree({new_id[v]: {new_id[u] for u in nbrs} for v, nbrs in adj.items()},
                {new_id[v]: name for v, name in labels.items()})


def load_newick(path) -> Tree:
    with open(path, encoding="utf-8") as fh:
        return parse_newick(fh.read())


# -- canonicalization -----------------------------------------------------------


def canonicalize_to_binary(t: Tree, X: Iterable[str]) -> Tree:
    """Turn a tree containing ``X`` among its vertices into a binary X-tree.

    Steps: prune everything not between two ``X`` vertices; move labels of
    interior ``X`` vertices onto new pendant leaves; suppress degree-2
    vertices; resolve vertices of degree above 3 into caterpillars, with
    neighbours taken in order of their smallest ``X`` label.  Triples whose
    medians were pairwise distinct in ``t`` stay pairwise distinct.
    """
    X = sorted(set(X))
    if len(X) < 3:
        raise TreeError("a binary X-tree needs |X| >= 3")
    xv = {x: t.vertex(x) for x in X}
    adj = {v: set(n) for v, n in t.adjacency().items()}
    labels = {v: name for name, v in xv.items()}
    keep = set(xv.values())

    # (a) prune: peel non-X leaves until none remain
    queue = deque(v for v in adj if len(adj[v]) <= 1 and v not in keep)
    while queue:
        v = queue.popleft()
        if v not in adj or v in keep:
            continue
        for u in adj.pop(v):
            adj[u].discard(v)
            if len(adj[u]) <= 1 and u not in keep:
                queue.append(u)

    next_id = max(adj) + 1

    # (b) pendant leaves for interior X vertices
    for v in sorted(labels):
        if len(adj[v]) > 1:
            leaf = next_id
            next_id += 1
            adj[leaf] = {v}
            adj[v].add(leaf)
            labels[leaf] = labels.pop(v)

    # (c) suppress unlabelled degree-2 vertices
    for v in sorted(adj):
        if len(adj[v]) == 2 and v not in labels:
            a, b = adj.pop(v)
            adj[a].discard(v)
            adj[b].discard(v)
            adj[a].add(b)
            adj[b].add(a)

    # (d) resolve high-degree vertices into caterpillars
    high = sorted(v for v in adj if len(adj[v]) > 3)
    if high:
        tmp = Tree(adj, labels)
        for v in high:
            parent = tmp.parents_from(v)
            minlab = {}
            bfs = list(parent)
            for w in reversed(bfs):
                ks = [minlab[u] for u in adj[w] if parent.get(u) == w]
                if w in labels:
                    ks.append(labels[w])
                minlab[w] = min(ks) if ks else ""
            nbrs = sorted(adj[v], key=lambda u: minlab[u])
            for u in nbrs[2:]:
                adj[v].discard(u)
                adj[u].discard(v)
            prev = v
            rest = nbrs[2:]
            while len(rest) > 2:
                w = next_id
                next_id += 1
                adj[w] = {prev, rest[0]}
                adj[prev].add(w)
                adj[rest[0]].add(w)
                prev = w
                rest = rest[1:]
            w = next_id
            next_id += 1
            adj[w] = {prev, *rest}
            adj[prev].add(w)
            for u in rest:
                adj[u].add(w)
            tmp = Tree(adj, labels)
    return Tree(adj, labels)
