"""Seeded instance generators and checker benchmarks.

Positive instances are planted: draw a random binary tree, pick interior
vertices, and for each vertex take one leaf from each of its three
branches.  Negative instances add triples inside a small window until the
condition breaks.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

from .checker import MAX_BRUTE_SETS, check_bruteforce, check_poly
from .core import SetSystem, Tree, star, subdivide_and_attach
from .errors import SizeGuardExceeded

__all__ = [
    "GenSpec",
    "leaf_names",
    "random_binary_tree",
    "branch_leaves",
    "sample_realizable_system",
    "sample_partition_system",
    "perturb_to_violation",
    "perturb_partition",
    "generate",
    "BenchRow",
    "bench_checkers",
    "write_bench_csv",
    "BENCH_COLUMNS",
]

BENCH_COLUMNS = ("n", "set_count", "mode", "seed", "micros", "status")


def leaf_names(n: int) -> list[str]:
    return [str(i) for i in range(1, n + 1)]


def random_binary_tree(X: Sequence[str], seed: int) -> Tree:
    """Binary X-tree grown by attaching each leaf to a uniformly chosen edge.

    Leaves are inserted in the given order; every unrooted topology is
    equally likely.
    """
    X = list(X)
    if len(X) < 3:
        raise ValueError("a binary X-tree needs at least 3 leaves")
    rng = random.Random(seed)
    tree = star(X[:3])
    for x in X[3:]:
        edges = tree.edges
        tree = subdivide_and_attach(tree, edges[rng.randrange(len(edges))], x)
    return tree


def branch_leaves(t: Tree, v: int) -> list[list[str]]:
    """Sorted leaf labels of each component of ``t - v``, by neighbour id."""
    out = []
    for u in t.neighbors(v):
        seen = {v, u}
        stack = [u]
        names = []
        while stack:
            w = stack.pop()
            if t.degree(w) == 1 and t.label(w) is not None:
                names.append(t.label(w))
            for z in t.neighbors(w):
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
        out.append(sorted(names))
    return out


def sample_realizable_system(t: Tree, m: int, seed: int, *, balanced: bool = False) -> SetSystem:
    """``m`` triples with pairwise distinct planted medians in ``t``.

    Each triple takes one leaf from each branch at a distinct interior
    vertex.  With ``balanced`` the leaf is drawn among the least-covered
    leaves of its branch so far, which spreads coverage evenly.
    """
    interior = list(t.interior)
    if m > len(interior):
        raise ValueError(f"cannot plant {m} triples in a tree with {len(interior)} interior vertices")
    rng = random.Random(seed)
    chosen = sorted(rng.sample(interior, m))
    if balanced:
        rng.shuffle(chosen)
    cov = dict.fromkeys(t.leaf_labels, 0)
    triples = set()
    for v in chosen:
        branches = branch_leaves(t, v)
        if balanced:
            branches = [[x for x in b if cov[x] == min(cov[y] for y in b)] for b in branches]
        for _ in range(100):
            triple = frozenset(rng.choice(branch) for branch in branches)
            if triple not in triples:
                break
        else:
            raise RuntimeError(f"could not draw a fresh triple at vertex {v}")
        triples.add(triple)
        for x in triple:
            cov[x] += 1
    return SetSystem.from_sets(triples, sorted(t.leaf_labels))


def sample_partition_system(t: Tree, blocks: int, seed: int) -> SetSystem:
    """Family whose median blocks are ``blocks`` connected pieces of the interior.

    Cutting ``blocks - 1`` random interior edges splits the interior into
    subtrees; each subtree ``B`` has ``|B| + 2`` outgoing edges and one
    leaf is drawn beyond each of them.
    """
    interior = set(t.interior)
    if not 1 <= blocks <= len(interior):
        raise ValueError(f"need between 1 and {len(interior)} blocks")
    rng = random.Random(seed)
    inner = [e for e in t.edges if e[0] in interior and e[1] in interior]
    cut = set(rng.sample(inner, blocks - 1))
    kept = {v: [] for v in interior}
    for u, v in inner:
        if (u, v) not in cut:
            kept[u].append(v)
            kept[v].append(u)
    sets = []
    seen = set()
    for start in sorted(interior):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            w = stack.pop()
            for z in kept[w]:
                if z not in comp:
                    comp.add(z)
                    stack.append(z)
        seen |= comp
        chosen = []
        for w in sorted(comp):
            for z, names in zip(t.neighbors(w), branch_leaves(t, w)):
                if z not in comp:
                    chosen.append(rng.choice(names))
        sets.append(frozenset(chosen))
    return SetSystem.from_sets(sets, sorted(t.leaf_labels))


def _fresh_name(used: Iterable[str]) -> str:
    used = set(used)
    if all(x.isdigit() for x in used):
        return str(max(int(x) for x in used) + 1)
    for c in "abcdefghijklmnopqrstuvwxyz":
        if c not in used:
            return c
    i = 0
    while f"e{i}" in used:
        i += 1
    return f"e{i}"


def _violated(C: SetSystem) -> bool:
    if len(C.sets) <= MAX_BRUTE_SETS:
        return not check_bruteforce(C).satisfied
    return not check_poly(C).satisfied


def perturb_to_violation(C: SetSystem, seed: int) -> SetSystem:
    """Add triples inside a four-element window until the condition fails.

    The window is a member triple plus one more element (a fresh one when
    the ground set has nothing else).  Its four triples cover only four
    elements, so the loop always ends.
    """
    if not C.sets:
        raise ValueError("perturb_to_violation needs a non-empty family")
    rng = random.Random(seed)
    sets = list(C.sets)
    ground = list(C.ground)
    current = C
    while not _violated(current):
        base = rng.choice(sets)
        others = sorted(set(ground) - base)
        extra = rng.choice(others) if others else _fresh_name(ground)
        if extra not in ground:
            ground.append(extra)
        window = sorted(base | {extra})
        present = set(sets)
        candidates = [frozenset(w) for w in combinations(window, 3) if frozenset(w) not in present]
        rng.shuffle(candidates)
        for t in candidates:
            sets.append(t)
            current = SetSystem.from_sets(sets, ground)
            if _violated(current):
                break
    return current


def perturb_partition(C: SetSystem, seed: int) -> SetSystem:
    """Break the general condition of a satisfying family.

    With two or more sets, one set absorbs an element from outside it,
    which pushes the total weight above ``|X| - 2``; a single set gets a
    triple inside it, sharing three elements.
    """
    rng = random.Random(seed)
    sets = list(C.sets)
    if len(sets) == 1:
        y = sorted(sets[0])
        if len(y) > 3:
            return SetSystem.from_sets(sets + [frozenset(rng.sample(y, 3))], C.ground)
        # a lone triple: two more triples through a fresh element overshoot |X| - 2
        extra = _fresh_name(C.ground)
        return SetSystem.from_sets([sets[0], frozenset(y[:2] + [extra]), frozenset(y[1:] + [extra])],
                                   list(C.ground) + [extra])
    i = rng.randrange(len(sets))
    outside = sorted(C.ground_set - sets[i])
    sets[i] = sets[i] | {rng.choice(outside)}
    return SetSystem.from_sets(sets, C.ground)


@dataclass(frozen=True)
class GenSpec:
    leaf_count: int
    set_count: int
    seed: int
    violating: bool = False
    partition_mode: bool = False

    def validate(self):
        if self.leaf_count < 3:
            raise ValueError("leaf_count must be at least 3")
        if self.set_count < 0:
            raise ValueError("set_count must be non-negative")
        if self.partition_mode and not 1 <= self.set_count <= self.leaf_count - 2:
            raise ValueError("partition mode needs 1 <= set_count <= leaf_count - 2")
        if not self.violating and self.set_count > self.leaf_count - 2:
            raise ValueError("a satisfying family has at most leaf_count - 2 sets")
        if self.violating and not self.partition_mode and self.set_count == 0:
            raise ValueError("a violating family needs at least one set")


def generate(spec: GenSpec) -> tuple[SetSystem, Tree]:
    """Instance for ``spec`` and the tree it was planted in."""
    spec.validate()
    rng = random.Random(spec.seed)
    tree_seed, set_seed, perturb_seed = (rng.getrandbits(64) for _ in range(3))
    tree = random_binary_tree(leaf_names(spec.leaf_count), tree_seed)
    if spec.partition_mode:
        C = sample_partition_system(tree, spec.set_count, set_seed)
        if spec.violating:
            C = perturb_partition(C, perturb_seed)
        return C, tree
    C = sample_realizable_system(tree, min(spec.set_count, spec.leaf_count - 2), set_seed)
    if spec.violating:
        C = perturb_to_violation(C, perturb_seed)
    return C, tree


@dataclass(frozen=True)
class BenchRow:
    n: int
    set_count: int
    mode: str
    seed: int
    micros: int
    status: str

    def as_tuple(self):
        return (self.n, self.set_count, self.mode, self.seed, self.micros, self.status)


_CHECKERS = {"poly": check_poly, "brute": check_bruteforce}


def bench_checkers(grid: Iterable[tuple[int, int] | int], seeds: Iterable[int], modes: Sequence[str] = ("poly",),
                   *, repeats: int = 5, max_brute_sets: int = MAX_BRUTE_SETS) -> list[BenchRow]:
    """Time each checker on planted instances.

    ``grid`` items are ``(n, set_count)`` pairs or bare ``n`` (meaning
    ``set_count = n - 2``).  ``micros`` is the median over ``repeats``
    runs on a monotonic clock.
    """
    for mode in modes:
        if mode not in _CHECKERS:
            raise ValueError(f"unknown mode {mode!r}")
    cells = [(g, g - 2) if isinstance(g, int) else tuple(g) for g in grid]
    seeds = list(seeds)
    if "brute" in modes:
        for n, m in cells:
            if m > max_brute_sets:
                raise SizeGuardExceeded(f"brute mode limited to {max_brute_sets} sets, grid asks for {m}")
    rows = []
    for n, m in cells:
        for seed in seeds:
            C, _ = generate(GenSpec(n, m, seed))
            for mode in modes:
                check = _CHECKERS[mode]
                times = []
                for _ in range(max(repeats, 1)):
                    start = time.perf_counter_ns()
                    outcome = check(C)
                    times.append(time.perf_counter_ns() - start)
                rows.append(BenchRow(n, len(C.sets), mode, seed, int(statistics.median(times) // 1000),
                                     outcome.status))
    return rows


def write_bench_csv(rows: Iterable[BenchRow], out=None) -> str:
    """Write rows as CSV to the file object ``out`` (if given) and return the text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        writer.writerow(row.as_tuple())
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text
