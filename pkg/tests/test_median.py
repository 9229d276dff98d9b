import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import triples
from hallmedian import MedianIndex, SetSystem, median, median_set, star, verify_injective, verify_partition
from hallmedian.checker import fan_expansion
from hallmedian.core import parse_newick
from hallmedian.errors import LabelMismatchError, LabelNotFoundError
from hallmedian.genbench import leaf_names, random_binary_tree
from hallmedian.median import median_of_vertices
from oracles import median_by_paths, path_vertices, raw_adjacency, vertex_median_by_paths


def test_star_median_is_centre():
    t = star(["1", "2", "3"])
    assert median(t, "1", "2", "3") == 0


def test_caterpillar_median(e1_caterpillar):
    assert median(e1_caterpillar, "1", "3", "4") == 1
    assert median(e1_caterpillar, "1", "3", "4") == median_by_paths(e1_caterpillar, "1", "3", "4")


def test_quartet_median(quartet):
    assert median(quartet, "1", "2", "3") == 0
    assert median(quartet, "3", "4", "1") == 1


def test_median_errors(quartet):
    with pytest.raises(ValueError):
        median(quartet, "1", "1", "2")
    with pytest.raises(LabelNotFoundError):
        median(quartet, "1", "2", "9")


@pytest.mark.parametrize("seed", range(30))
def test_median_matches_path_oracle_and_is_symmetric(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 25)
    t = random_binary_tree(leaf_names(n), seed)
    index = MedianIndex(t)
    adj = raw_adjacency(t)
    names = list(t.leaf_labels)
    for _ in range(20):
        s = rng.sample(names, 3)
        v = median(t, *s)
        assert v == median_by_paths(t, *s) == index.median(*s)
        assert {median(t, *p) for p in permutations(s)} == {v}
        for x, y in combinations(s, 2):
            assert v in path_vertices(adj, t.vertex(x), t.vertex(y))
        assert t.degree(v) == 3


@given(st.integers(3, 30), st.integers(0, 2**32))
@settings(max_examples=60, deadline=None)
def test_vertex_medians_agree(n, seed):
    rng = random.Random(seed)
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    from hallmedian import Tree

    t = Tree.from_edges(edges, vertices=range(n))
    index = MedianIndex(t)
    for _ in range(15):
        u, v, w = (rng.randrange(n) for _ in range(3))
        expect = vertex_median_by_paths(t, u, v, w)
        assert median_of_vertices(t, u, v, w) == expect
        assert index.median_of_vertices(u, v, w) == expect


# -- median sets ---------------------------------------------------------------


def test_median_set_triple(quartet):
    assert median_set(quartet, ["1", "2", "3"]) == {median(quartet, "1", "2", "3")}


def test_median_set_caterpillar(e1_caterpillar):
    assert median_set(e1_caterpillar, "12345") == {0, 1, 2}


def test_median_set_quartet(quartet):
    assert median_set(quartet, "1234") == {0, 1}


def test_median_set_too_small(quartet):
    with pytest.raises(ValueError):
        median_set(quartet, "12")


def _enumerated(t, Y):
    return {median_by_paths(t, *s) for s in combinations(sorted(Y), 3)}


@pytest.mark.parametrize("seed", range(40))
def test_fan_medians_distinct_give_whole_median_set(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 14)
    t = random_binary_tree(leaf_names(n), seed)
    Y = sorted(rng.sample(list(t.leaf_labels), rng.randint(3, min(n, 8))))
    fans = [median_by_paths(t, *f) for f in map(sorted, fan_expansion(Y))]
    full = _enumerated(t, Y)
    if len(set(fans)) == len(fans):
        assert set(fans) == full
    assert median_set(t, Y) == full


@pytest.mark.parametrize("seed", range(20))
def test_shortcut_matches_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(14, 30)
    t = random_binary_tree(leaf_names(n), seed)
    Y = rng.sample(list(t.leaf_labels), rng.randint(13, n))
    assert median_set(t, Y) == median_set(t, Y, threshold=10**9)


@pytest.mark.parametrize("seed", range(20))
def test_median_set_size_at_least_block(seed):
    # in a binary tree the spanning subtree of Y has |Y| - 2 branching vertices
    rng = random.Random(seed)
    n = rng.randint(3, 15)
    t = random_binary_tree(leaf_names(n), seed)
    Y = rng.sample(list(t.leaf_labels), rng.randint(3, n))
    assert len(median_set(t, Y)) == len(Y) - 2


# -- verification --------------------------------------------------------------


def test_verify_injective_e1(e1, e1_caterpillar):
    report = verify_injective(e1_caterpillar, e1)
    assert report.passed and report.verdict == "pass"
    assert set(report.assignment.values()) == {0, 1, 2}
    doc = report.to_document()
    assert doc["verdict"] == "pass"
    assert doc["assignment"] == {"1 2 3": 0, "1 3 4": 3, "3 4 5": 5}


def test_verify_injective_collision(e1_caterpillar):
    C = triples("1 2 3\n1 3 4\n3 4 5\n2 3 4")
    report = verify_injective(e1_caterpillar, C)
    assert not report.passed
    assert len(report.collisions) == 1
    c = report.collisions[0]
    assert (c.first, c.second, c.vertex) == (frozenset("134"), frozenset("234"), 1)
    assert report.to_document()["collisions"] == [{"sets": [["1", "3", "4"], ["2", "3", "4"]], "vertex": 3}]


def test_verify_injective_empty(e1_caterpillar):
    report = verify_injective(e1_caterpillar, SetSystem.from_sets([], "12345"))
    assert report.passed and report.assignment == {}


def test_verify_reports_every_collision():
    t = star(list("1234"))
    C = SetSystem.from_sets([s for s in combinations("1234", 3)])
    report = verify_injective(t, C)
    assert len(report.collisions) == 6


def test_verify_label_mismatch(quartet):
    with pytest.raises(LabelMismatchError):
        verify_injective(quartet, triples("1 2 5"))


def test_verify_needs_triples(quartet):
    with pytest.raises(ValueError):
        verify_injective(quartet, SetSystem.from_sets([["1", "2", "3", "4"]]))


def test_verify_partition_e1_fails(e1_caterpillar):
    C = triples("1 2 3\n3 4 5")
    report = verify_partition(e1_caterpillar, C)
    assert not report.passed
    assert report.uncovered == (1,)
    assert report.to_document()["uncovered"] == [3]


def test_verify_partition_whole_set():
    for seed in range(10):
        t = random_binary_tree(leaf_names(7), seed)
        report = verify_partition(t, SetSystem.from_sets([leaf_names(7)]))
        assert report.passed


def _partition_by_oracle(t, C):
    blocks = [_enumerated(t, Y) for Y in C.sets]
    covered = set().union(*blocks)
    disjoint = sum(map(len, blocks)) == len(covered)
    return disjoint and covered == set(t.interior)


@pytest.mark.parametrize("newick, expect", [
    ("(1,(3,(4,(5,6))),2);", True),
    ("(1,2,((3,4),(5,6)));", False),
    ("(1,(2,((3,5),(4,6))));", True),
    ("(1,3,(2,(4,(5,6))));", True),
])
def test_verify_partition_two_blocks(newick, expect):
    t = parse_newick(newick)
    C = SetSystem.from_sets([["1", "2", "3", "4"], ["3", "4", "5", "6"]])
    assert _partition_by_oracle(t, C) is expect
    report = verify_partition(t, C)
    assert report.passed is expect
    if expect:
        assert sorted(map(len, report.assignment.values())) == [2, 2]


@pytest.mark.parametrize("seed", range(40))
def test_verify_partition_matches_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 9)
    t = random_binary_tree(leaf_names(n), seed)
    names = list(t.leaf_labels)
    C = SetSystem.from_sets({frozenset(rng.sample(names, rng.randint(3, n))) for _ in range(rng.randint(1, 3))}, names)
    assert verify_partition(t, C).passed is _partition_by_oracle(t, C)


def test_verify_partition_overlap_names_owners():
    t = parse_newick("(1,2,(3,(4,5)));")
    C = SetSystem.from_sets([["1", "2", "3", "4"], ["2", "3", "4", "5"]])
    report = verify_partition(t, C)
    assert report.collisions
    for c in report.collisions:
        assert c.vertex in report.assignment[c.first] & report.assignment[c.second]


def test_report_vertex_ids_independent_of_input_ids():
    a = parse_newick("((1,2),(3,(4,5)));")
    b = parse_newick("((5,4),(3,(2,1)));")
    C = triples("1 2 3\n1 3 4\n3 4 5")
    assert verify_injective(a, C).to_document() == verify_injective(b, C).to_document()
