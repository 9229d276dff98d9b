"""Tree construction for families satisfying the strengthened Hall condition.

``build_tree`` peels off one element at a time (an element in one triple,
or an element in exactly two triples whose remnants are merged into one
new triple), builds the tree for the smaller family and then hangs the
removed element back on a pendant edge.  ``build_partition_tree`` reduces
general families to triple families through fan expansions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .checker import accepts_addition, check_partition_condition, check_poly, fan_expansion
from .core import SetSystem, Tree, caterpillar, edge_at_leaf, set_key, star, subdivide_and_attach
from .errors import ConditionViolated, NoReduction

__all__ = [
    "Degree1",
    "CaseI",
    "CaseII",
    "Reattach",
    "ReductionStep",
    "find_reduction",
    "build_tree",
    "build_partition_tree",
]


@dataclass(frozen=True)
class Degree1:
    """``x`` lies only in ``{a, b, x}``; the triple is dropped."""

    x: str
    a: str
    b: str
    reduced: SetSystem

    @property
    def anchor(self) -> str:
        return self.a

    def to_document(self) -> dict:
        return {"kind": "degree1", "x": self.x, "a": self.a, "b": self.b, "anchor": self.anchor}


@dataclass(frozen=True)
class CaseI:
    """``x`` lies in ``{a, b, x}`` and ``{a, b2, x}``; they merge into ``{a, b, b2}``."""

    x: str
    a: str
    b: str
    b2: str
    reduced: SetSystem

    @property
    def anchor(self) -> str:
        return self.b2

    def to_document(self) -> dict:
        return {"kind": "case_i", "x": self.x, "a": self.a, "b": self.b, "b_prime": self.b2,
                "anchor": self.anchor}


@dataclass(frozen=True)
class CaseII:
    """``x`` lies in disjoint-remnant triples ``{a, b, x}`` and ``{a2, b2, x}``.

    Branch ``"C1"`` merges them into ``{a, a2, b}`` and re-attaches ``x``
    next to ``a2``; branch ``"C2"`` uses ``{a, a2, b2}`` and ``a``.
    """

    x: str
    a: str
    b: str
    a2: str
    b2: str
    branch: str
    reduced: SetSystem

    @property
    def anchor(self) -> str:
        return self.a2 if self.branch == "C1" else self.a

    def to_document(self) -> dict:
        return {"kind": "case_ii", "x": self.x, "a": self.a, "b": self.b, "a_prime": self.a2,
                "b_prime": self.b2, "branch": self.branch, "anchor": self.anchor}


@dataclass(frozen=True)
class Reattach:
    """Element not covered by the remaining triples, hung next to ``anchor``."""

    x: str
    anchor: str

    def to_document(self) -> dict:
        return {"kind": "reattach", "x": self.x, "anchor": self.anchor}


ReductionStep = Degree1 | CaseI | CaseII


def find_reduction(C: SetSystem, pivot: str | None = None) -> ReductionStep:
    """Pick the element to remove next and describe the reduced family.

    Without ``pivot`` the smallest element of coverage 1 is used, else the
    smallest of coverage 2.  The caller guarantees the condition holds.
    """
    if not C.sets:
        raise ValueError("find_reduction needs a non-empty family")
    if len(C.ground) < 4:
        raise ValueError("find_reduction needs at least 4 elements")
    cov = C.coverages()
    if pivot is None:
        ones = sorted(x for x, k in cov.items() if k == 1)
        twos = sorted(x for x, k in cov.items() if k == 2)
        if ones:
            pivot = ones[0]
        elif twos:
            pivot = twos[0]
        else:
            raise NoReduction("no element lies in one or two sets")
    elif cov.get(pivot) not in (1, 2):
        raise NoReduction(f"element {pivot!r} lies in {cov.get(pivot, 0)} sets")
    x = pivot
    ground = tuple(e for e in C.ground if e != x)
    containing = [s for s in C.sets if x in s]
    rest = [s for s in C.sets if x not in s]

    if len(containing) == 1:
        a, b = sorted(containing[0] - {x})
        return Degree1(x, a, b, SetSystem._trusted(ground, rest))

    t1, t2 = sorted(containing, key=set_key)
    p, q = sorted(t1 - {x}), sorted(t2 - {x})
    shared = set(p) & set(q)
    if len(shared) == 1:
        (a,) = shared
        (b,) = set(p) - shared
        (b2,) = set(q) - shared
        merged = frozenset((a, b, b2))
        # a merged triple already present would give 3 sets on only 4 elements
        assert merged not in rest, "case (i) merge collides with an existing triple"
        return CaseI(x, a, b, b2, SetSystem._trusted(ground, rest + [merged]))

    a, b = p
    a2, b2 = q
    c1 = frozenset((a, a2, b))
    c2 = frozenset((a, a2, b2))
    if c1 not in rest and accepts_addition(rest, c1):
        return CaseII(x, a, b, a2, b2, "C1", SetSystem._trusted(ground, rest + [c1]))
    if c2 in rest or not accepts_addition(rest, c2):
        raise NoReduction(f"neither merge at {x!r} keeps the condition; the input violates it")
    return CaseII(x, a, b, a2, b2, "C2", SetSystem._trusted(ground, rest + [c2]))


def build_tree(C: SetSystem, trace: list | None = None) -> Tree:
    """Binary X-tree on ``C.ground`` on which the triples of ``C`` have distinct medians.

    Raises :class:`ConditionViolated` carrying the :func:`check_poly`
    witness when no such tree exists.  If ``trace`` is a list, the
    reduction steps (and re-attachments of uncovered elements) are
    appended to it in the order they were taken.
    """
    if not C.is_triple_system:
        raise ValueError("build_tree needs a family of 3-element sets")
    if len(C.ground) < 3:
        raise ValueError("a binary X-tree needs at least 3 elements")
    outcome = check_poly(C)
    if not outcome.satisfied:
        raise ConditionViolated(outcome)

    steps = []
    current = C
    while len(current.ground) > 3 and current.sets:
        covered = current.union_of()
        if len(covered) < len(current.ground):
            anchor = min(covered)
            for x in sorted(current.ground_set - covered, reverse=True):
                steps.append(Reattach(x, anchor))
            current = SetSystem._trusted(sorted(covered), current.sets)
            continue
        step = find_reduction(current)
        steps.append(step)
        current = step.reduced

    if len(current.ground) == 3:
        tree = star(sorted(current.ground))
    else:
        tree = caterpillar(sorted(current.ground))
    for step in reversed(steps):
        tree = subdivide_and_attach(tree, edge_at_leaf(tree, step.anchor), step.x)
    if trace is not None:
        trace.extend(steps)
    return tree


def build_partition_tree(C: SetSystem, trace: list | None = None) -> Tree:
    """Binary X-tree whose median blocks of the sets of ``C`` partition the interior."""
    outcome = check_partition_condition(C, "poly")
    if not outcome.satisfied:
        raise ConditionViolated(outcome)
    triples = [t for y in C.sets for t in fan_expansion(y)]
    return build_tree(SetSystem.from_sets(triples, C.ground), trace)
