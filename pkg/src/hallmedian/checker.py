"""Decision procedures for the strengthened Hall condition.

A family ``C`` satisfies the condition when every non-empty subfamily
``C'`` covers at least ``|C'| + 2`` elements.  The general (partition)
form asks ``|U C'| - 2 >= sum(|Y| - 2 for Y in C')`` for every ``C'``, with
equality at ``C' = C``.

Two independent routes are provided: exhaustive subset enumeration
(vectorised with numpy) and a polynomial pair-deletion test built on
bipartite matching.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import SetSystem, set_key
from .errors import ConditionViolated, GroundMismatchError, SizeGuardExceeded
from .matching import BipartiteMatcher

__all__ = [
    "MAX_BRUTE_SETS",
    "MAX_TIGHT_SETS",
    "CheckOutcome",
    "PartitionCheckOutcome",
    "TightSet",
    "TightFamily",
    "check_bruteforce",
    "check_poly",
    "accepts_addition",
    "tight_sets",
    "fan_expansion",
    "check_partition_condition",
]

MAX_BRUTE_SETS = 24
MAX_TIGHT_SETS = 20

# low bits of the subset index enumerated in one vectorised block
_BLOCK_BITS = 14


Family = tuple[frozenset[str], ...]


def _canon(family: Iterable[Iterable[str]]) -> Family:
    return tuple(sorted({frozenset(s) for s in family}, key=set_key))


@dataclass(frozen=True)
class CheckOutcome:
    """Result of a strengthened-Hall check.

    On violation ``subfamily`` covers at most ``len(subfamily) + 1``
    elements.  The polynomial checker also reports the deleted ``pair``
    after which ``subfamily`` fails plain Hall.
    """

    satisfied: bool
    subfamily: Family | None = None
    pair: tuple[str, str] | None = None

    @property
    def status(self) -> str:
        return "Satisfied" if self.satisfied else "Violated"

    @property
    def union(self) -> frozenset[str]:
        return frozenset().union(*self.subfamily) if self.subfamily else frozenset()

    def describe(self) -> str:
        if self.satisfied:
            return "Satisfied"
        sets = ", ".join("{" + ",".join(set_key(s)) + "}" for s in self.subfamily)
        text = f"Violated: |U C'| = {len(self.union)} < {len(self.subfamily)} + 2 for C' = [{sets}]"
        if self.pair:
            text += f" (Hall fails after deleting {{{self.pair[0]},{self.pair[1]}}})"
        return text

    def to_document(self) -> dict:
        doc = {"status": self.status}
        if not self.satisfied:
            witness = {
                "kind": "pair" if self.pair else "subfamily",
                "sets": [list(set_key(s)) for s in self.subfamily],
                "arithmetic": {"union_size": len(self.union), "family_size": len(self.subfamily),
                               "required": len(self.subfamily) + 2},
            }
            if self.pair:
                witness["pair"] = list(self.pair)
            doc["witness"] = witness
        return doc


# -- exhaustive enumeration ---------------------------------------------------------


def _masks(sets: Sequence[frozenset[str]]) -> np.ndarray:
    """Bit matrix ``(len(sets), words)`` over the elements of the union."""
    elems = sorted(frozenset().union(*sets))
    pos = {x: i for i, x in enumerate(elems)}
    words = max(1, (len(elems) + 63) // 64)
    out = np.zeros((len(sets), words), dtype=np.uint64)
    for i, s in enumerate(sets):
        for x in s:
            p = pos[x]
            out[i, p // 64] |= np.uint64(1) << np.uint64(p % 64)
    return out


def _subset_table(masks: np.ndarray, weights: np.ndarray):
    """Union bitmaps and weight sums of every subset of the given rows."""
    k = len(masks)
    unions = np.zeros((1 << k, masks.shape[1]), dtype=np.uint64)
    wsum = np.zeros(1 << k, dtype=np.int64)
    for i in range(k):
        lo, hi = 1 << i, 1 << (i + 1)
        unions[lo:hi] = unions[:lo] | masks[i]
        wsum[lo:hi] = wsum[:lo] + weights[i]
    return unions, wsum


def _slack_blocks(sets: Sequence[frozenset[str]], weights: Sequence[int]):
    """Yield ``(indices, slack)`` over all non-empty subfamilies.

    ``slack = |union| - 2 - sum(weights)``; the subfamily index is a
    bitmask over ``sets``.
    """
    m = len(sets)
    masks = _masks(sets)
    w = np.asarray(weights, dtype=np.int64)
    low = min(m, _BLOCK_BITS)
    lo_union, lo_w = _subset_table(masks[:low], w[:low])
    lo_pop = np.bitwise_count(lo_union).sum(axis=1, dtype=np.int64)
    base = np.arange(1 << low, dtype=np.int64)
    high_m = m - low
    hi_union, hi_w = _subset_table(masks[low:], w[low:])
    for h in range(1 << high_m):
        if h == 0:
            pop, ws = lo_pop, lo_w
        else:
            pop = np.bitwise_count(lo_union | hi_union[h]).sum(axis=1, dtype=np.int64)
            ws = lo_w + hi_w[h]
        slack = pop - 2 - ws
        idx = base + (h << low)
        if h == 0:
            idx, slack = idx[1:], slack[1:]
        yield idx, slack


def _popcount(idx: np.ndarray) -> np.ndarray:
    return np.bitwise_count(idx.astype(np.uint64)).astype(np.int64)


def _lex_smallest(candidates: np.ndarray, m: int) -> int:
    """Among equal-size index masks, the one whose sorted index tuple is least."""
    for bit in range(m):
        has = (candidates >> bit) & 1 == 1
        if has.any():
            candidates = candidates[has]
        if len(candidates) == 1:
            break
    return int(candidates[0])


def _min_violator(sets: Sequence[frozenset[str]], weights: Sequence[int]) -> int | None:
    """Minimum-cardinality, then lexicographically least, subfamily with negative slack."""
    best_size = None
    best = []
    for idx, slack in _slack_blocks(sets, weights):
        bad = idx[slack < 0]
        if not len(bad):
            continue
        sizes = _popcount(bad)
        s = int(sizes.min())
        if best_size is None or s < best_size:
            best_size, best = s, [bad[sizes == s]]
        elif s == best_size:
            best.append(bad[sizes == s])
    if best_size is None:
        return None
    return _lex_smallest(np.concatenate(best), len(sets))


def _from_mask(sets: Sequence[frozenset[str]], mask: int) -> Family:
    return tuple(sets[i] for i in range(len(sets)) if mask >> i & 1)


def check_bruteforce(C: SetSystem, *, max_sets: int = MAX_BRUTE_SETS) -> CheckOutcome:
    """Enumerate every non-empty subfamily of ``C``.

    On violation the witness is a smallest violating subfamily, ties broken
    by the lexicographic order of the (canonically ordered) member sets.
    """
    sets = C.sets
    if len(sets) > max_sets:
        raise SizeGuardExceeded(f"{len(sets)} sets exceed the brute-force limit of {max_sets}")
    if not sets:
        return CheckOutcome(True)
    mask = _min_violator(sets, [1] * len(sets))
    if mask is None:
        return CheckOutcome(True)
    return CheckOutcome(False, _from_mask(sets, mask))


# -- polynomial pair-deletion test ----------------------------------------------------


def _incidence(C: SetSystem):
    elems = sorted(C.ground_set | C.union_of())
    pos = {x: i for i, x in enumerate(elems)}
    adj = [sorted(pos[x] for x in s) for s in C.sets]
    return elems, adj


def _pair_witness(C: SetSystem, elems, adj, a: int, b: int) -> CheckOutcome:
    m = BipartiteMatcher(adj, len(elems), banned=(a, b))
    m.hopcroft_karp()
    bad = m.hall_violator()
    assert bad is not None, "pair reported as failing admits a saturating matching"
    return CheckOutcome(False, _canon(C.sets[u] for u in bad), (elems[a], elems[b]))


def check_poly(C: SetSystem) -> CheckOutcome:
    """Pair-deletion test: the condition holds iff deleting any two elements
    leaves a family that still has a system of distinct representatives.

    For each element ``a`` (in order) one matching of ``C`` without ``a``
    is kept; the pairs ``{a, b}`` that fail are exactly those where ``b``
    is covered by every maximum matching, found with one alternating
    search.  The first failing pair in lexicographic order is reported
    together with the Hall violator left after deleting it.
    """
    if not C.sets:
        return CheckOutcome(True)
    elems, adj = _incidence(C)
    n = len(elems)
    base = BipartiteMatcher(adj, n)
    base.hopcroft_karp()
    if base.size < len(adj):
        return _pair_witness(C, elems, adj, 0, 1)
    for a in range(n - 1):
        m = base.copy()
        freed = m.ban(a)
        if freed != -1 and not m.augment(freed):
            return _pair_witness(C, elems, adj, a, a + 1)
        free = m.freeable_right()
        for b in range(a + 1, n):
            if b not in free:
                return _pair_witness(C, elems, adj, a, b)
    return CheckOutcome(True)


def accepts_addition(C: SetSystem | Iterable[frozenset[str]], new_set: Iterable[str]) -> bool:
    """Whether adding ``new_set`` to a family that satisfies the condition keeps it.

    Any new violator must contain ``new_set``, so it suffices that the
    family plus three copies of ``new_set`` has a system of distinct
    representatives.
    """
    sets = list(C.sets if isinstance(C, SetSystem) else C)
    new_set = frozenset(new_set)
    elems = sorted(frozenset().union(new_set, *sets))
    pos = {x: i for i, x in enumerate(elems)}
    row = sorted(pos[x] for x in new_set)
    adj = [sorted(pos[x] for x in s) for s in sets] + [row, row, row]
    m = BipartiteMatcher(adj, len(elems))
    return m.hopcroft_karp() == len(adj)


# -- tight subfamilies -------------------------------------------------------------


@dataclass(frozen=True)
class TightSet:
    sets: Family
    union: frozenset[str]


@dataclass(frozen=True)
class TightFamily:
    """All subfamilies covering exactly ``|C'| + 2`` elements."""

    family: Family
    masks: frozenset[int]

    @property
    def members(self) -> tuple[TightSet, ...]:
        out = []
        for mask in sorted(self.masks, key=lambda k: (bin(k).count("1"), tuple(i for i in range(len(self.family)) if k >> i & 1))):
            sets = _from_mask(self.family, mask)
            out.append(TightSet(sets, frozenset().union(*sets)))
        return tuple(out)

    def __len__(self):
        return len(self.masks)

    def __contains__(self, subfamily) -> bool:
        index = {s: i for i, s in enumerate(self.family)}
        try:
            mask = sum(1 << index[frozenset(s)] for s in subfamily)
        except KeyError:
            return False
        return mask in self.masks

    def patchwork_violations(self) -> list[tuple[int, int]]:
        """Intersecting pairs whose union or intersection is missing."""
        bad = []
        masks = sorted(self.masks)
        for i, p in enumerate(masks):
            for q in masks[i + 1:]:
                if p & q and ((p & q) not in self.masks or (p | q) not in self.masks):
                    bad.append((p, q))
        return bad

    def is_patchwork(self) -> bool:
        return not self.patchwork_violations()


def tight_sets(C: SetSystem, *, max_sets: int = MAX_TIGHT_SETS) -> TightFamily:
    """Every non-empty subfamily attaining ``|U C'| = |C'| + 2``."""
    sets = C.sets
    if len(sets) > max_sets:
        raise SizeGuardExceeded(f"{len(sets)} sets exceed the tight-set limit of {max_sets}")
    if not sets:
        return TightFamily((), frozenset())
    tight = []
    for idx, slack in _slack_blocks(sets, [1] * len(sets)):
        if (slack < 0).any():
            mask = _min_violator(sets, [1] * len(sets))
            raise ConditionViolated(CheckOutcome(False, _from_mask(sets, mask)))
        tight.append(idx[slack == 0])
    return TightFamily(sets, frozenset(int(k) for k in np.concatenate(tight)))


# -- general families ----------------------------------------------------------------


def fan_expansion(Y: Iterable[str], ordering: Sequence[str] | None = None) -> tuple[frozenset[str], ...]:
    """The ``|Y| - 2`` triples ``{y1, y2, yj}`` for ``j = 3..m``.

    ``ordering`` fixes ``y1, y2, ...``; by default ``Y`` is sorted.
    """
    Y = frozenset(Y)
    if len(Y) < 3:
        raise ValueError("fan expansion needs at least 3 elements")
    if ordering is None:
        ys = sorted(Y)
    else:
        ys = list(ordering)
        if len(ys) != len(Y) or set(ys) != Y:
            raise ValueError("ordering must list every element of Y exactly once")
    y1, y2 = ys[0], ys[1]
    return tuple(frozenset((y1, y2, y)) for y in ys[2:])


@dataclass(frozen=True)
class PartitionCheckOutcome:
    """Result of the general (partition) condition check.

    ``witness_kind`` is ``"subfamily"`` (a family breaking the inequality),
    ``"pair"`` (two sets sharing three or more elements) or ``"deficit"``
    (the inequality holds but ``|X| - 2`` exceeds the total weight).
    """

    inequality_holds: bool
    equality_holds: bool
    deficit: int
    witness_kind: str | None = None
    subfamily: Family | None = None
    pair: tuple[frozenset[str], frozenset[str]] | None = None

    @property
    def satisfied(self) -> bool:
        return self.inequality_holds and self.equality_holds

    @property
    def status(self) -> str:
        return "Satisfied" if self.satisfied else "Violated"

    def describe(self) -> str:
        if self.satisfied:
            return "Satisfied"
        if self.witness_kind == "pair":
            a, b = self.pair
            return f"Violated: sets {set_key(a)} and {set_key(b)} share {len(a & b)} elements"
        if self.witness_kind == "subfamily":
            union = frozenset().union(*self.subfamily)
            need = sum(len(y) - 2 for y in self.subfamily)
            return f"Violated: |U C'| - 2 = {len(union) - 2} < {need} for C' = {[set_key(s) for s in self.subfamily]}"
        return f"Violated: |X| - 2 exceeds sum(|Y| - 2) by {self.deficit}"

    def to_document(self) -> dict:
        doc = {"status": self.status, "inequality": self.inequality_holds,
               "equality": self.equality_holds, "deficit": self.deficit}
        if self.witness_kind == "subfamily":
            union = frozenset().union(*self.subfamily)
            doc["witness"] = {"kind": "subfamily", "sets": [list(set_key(s)) for s in self.subfamily],
                              "arithmetic": {"union_size": len(union),
                                             "weight": sum(len(y) - 2 for y in self.subfamily)}}
        elif self.witness_kind == "pair":
            a, b = self.pair
            doc["witness"] = {"kind": "pair", "sets": [list(set_key(a)), list(set_key(b))],
                              "arithmetic": {"intersection_size": len(a & b)}}
        elif self.witness_kind == "deficit":
            doc["witness"] = {"kind": "deficit", "arithmetic": {"deficit": self.deficit}}
        return doc


def _deficit(C: SetSystem) -> int:
    return (len(C.ground) - 2) - sum(len(y) - 2 for y in C.sets)


def check_partition_condition(C: SetSystem, mode: str = "poly", *,
                              max_sets: int = MAX_BRUTE_SETS) -> PartitionCheckOutcome:
    """Check the general condition in ``"poly"`` or ``"brute"`` mode.

    The polynomial mode rejects pairs sharing three or more elements,
    replaces every set by its fan expansion and runs :func:`check_poly` on
    the resulting triple family; a failing triple subfamily maps back to
    the sets it came from, which break the inequality themselves.
    """
    if not C.sets or C.union_of() != C.ground_set:
        raise GroundMismatchError("the member sets must cover the ground set exactly")
    deficit = _deficit(C)
    equality = deficit == 0
    if mode == "brute":
        if len(C.sets) > max_sets:
            raise SizeGuardExceeded(f"{len(C.sets)} sets exceed the brute-force limit of {max_sets}")
        mask = _min_violator(C.sets, [len(y) - 2 for y in C.sets])
        if mask is not None:
            return PartitionCheckOutcome(False, equality, deficit, "subfamily", _from_mask(C.sets, mask))
    elif mode == "poly":
        for a, b in combinations(C.sets, 2):
            if len(a & b) >= 3:
                return PartitionCheckOutcome(False, equality, deficit, "pair", pair=(a, b))
        parent = {}
        for y in C.sets:
            for t in fan_expansion(y):
                parent[t] = y
        outcome = check_poly(SetSystem.from_sets(parent, C.ground))
        if not outcome.satisfied:
            return PartitionCheckOutcome(False, equality, deficit, "subfamily",
                                         _canon(parent[t] for t in outcome.subfamily))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if not equality:
        return PartitionCheckOutcome(True, False, deficit, "deficit")
    return PartitionCheckOutcome(True, True, 0)
