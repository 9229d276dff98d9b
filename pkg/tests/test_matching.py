import random

from hypothesis import given, settings
from hypothesis import strategies as st

from hallmedian.matching import BipartiteMatcher, max_bipartite_matching
from oracles import max_matching_size


def test_deficient_family():
    left = ["{3}", "{4}", "{3,4}"]
    edges = [("{3}", 3), ("{4}", 4), ("{3,4}", 3), ("{3,4}", 4)]
    res = max_bipartite_matching(left, [3, 4], edges)
    assert not res.saturating
    assert res.violator == frozenset(left)
    assert len(res.matching) == 2


def test_identity_instance():
    res = max_bipartite_matching(range(5), range(5), [(i, i) for i in range(5)])
    assert res.saturating
    assert res.matching == {i: i for i in range(5)}


def test_empty():
    res = max_bipartite_matching([], [], [])
    assert res.saturating and res.matching == {}


bipartite = st.integers(1, 10).flatmap(lambda nl: st.integers(1, 10).flatmap(
    lambda nr: st.lists(st.lists(st.integers(0, nr - 1), max_size=nr, unique=True),
                        min_size=nl, max_size=nl).map(lambda adj: (adj, nr))))


@given(bipartite)
@settings(max_examples=300, deadline=None)
def test_matching_size_is_maximum(instance):
    adj, nr = instance
    edges = [(u, r) for u, rs in enumerate(adj) for r in rs]
    res = max_bipartite_matching(list(range(len(adj))), list(range(nr)), edges)
    assert len(res.matching) == max_matching_size(adj)
    assert len(set(res.matching.values())) == len(res.matching)
    for u, r in res.matching.items():
        assert r in adj[u]
    if res.violator is not None:
        nbrs = set().union(*(adj[u] for u in res.violator))
        assert len(nbrs) < len(res.violator)
    else:
        assert len(res.matching) == len(adj)


@given(bipartite, st.data())
@settings(max_examples=200, deadline=None)
def test_ban_and_augment_stay_maximum(instance, data):
    adj, nr = instance
    m = BipartiteMatcher(adj, nr)
    m.hopcroft_karp()
    r = data.draw(st.integers(0, nr - 1))
    freed = m.ban(r)
    if freed != -1:
        m.augment(freed)
    pruned = [[x for x in rs if x != r] for rs in adj]
    assert m.size == max_matching_size(pruned)


@given(bipartite)
@settings(max_examples=200, deadline=None)
def test_freeable_right_matches_definition(instance):
    adj, nr = instance
    m = BipartiteMatcher(adj, nr)
    best = m.hopcroft_karp()
    free = m.freeable_right()
    for r in range(nr):
        pruned = [[x for x in rs if x != r] for rs in adj]
        assert (r in free) == (max_matching_size(pruned) == best)


def test_hopcroft_karp_larger_random():
    rng = random.Random(3)
    for _ in range(20):
        nl, nr = rng.randint(50, 120), rng.randint(50, 120)
        adj = [rng.sample(range(nr), rng.randint(0, 4)) for _ in range(nl)]
        m = BipartiteMatcher(adj, nr)
        size = m.hopcroft_karp()
        # a plain augmenting-path pass from scratch must not find more
        other = BipartiteMatcher(adj, nr)
        for u in range(nl):
            other.augment(u)
        assert size == other.size
