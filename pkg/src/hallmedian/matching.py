"""Maximum bipartite matching with Hall-violator extraction.

``BipartiteMatcher`` works on integer indices and supports the incremental
operations the condition checkers need: banning right vertices, single
augmentations, and alternating-path reachability.  ``max_bipartite_matching``
is the label-level entry point.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass

__all__ = ["BipartiteMatcher", "MatchingResult", "max_bipartite_matching"]

_INF = float("inf")


class BipartiteMatcher:
    """Hopcroft-Karp on left vertices ``0..len(adj)-1`` and right ``0..n_right-1``.

    ``adj[u]`` lists the right neighbours of left vertex ``u``.  Right
    vertices in ``banned`` behave as if deleted.
    """

    def __init__(self, adj: Sequence[Sequence[int]], n_right: int, banned: Iterable[int] = ()):
        self.adj = [list(a) for a in adj]
        self.n_right = n_right
        self.banned = set(banned)
        self.match_l = [-1] * len(self.adj)
        self.match_r = [-1] * n_right
        self._radj = [[] for _ in range(n_right)]
        for u, rs in enumerate(self.adj):
            for r in rs:
                self._radj[r].append(u)

    def copy(self) -> BipartiteMatcher:
        other = BipartiteMatcher.__new__(BipartiteMatcher)
        other.adj = self.adj
        other.n_right = self.n_right
        other.banned = set(self.banned)
        other.match_l = list(self.match_l)
        other.match_r = list(self.match_r)
        other._radj = self._radj
        return other

    @property
    def size(self) -> int:
        return sum(1 for r in self.match_l if r != -1)

    def ban(self, r: int) -> int:
        """Delete right vertex ``r``; returns the left vertex it freed or -1."""
        self.banned.add(r)
        u = self.match_r[r]
        if u != -1:
            self.match_l[u] = -1
            self.match_r[r] = -1
        return u

    def greedy(self) -> int:
        """Extend the matching greedily; a cheap warm start for Hopcroft-Karp."""
        match_l, match_r, banned = self.match_l, self.match_r, self.banned
        for u, rs in enumerate(self.adj):
            if match_l[u] != -1:
                continue
            for r in rs:
                if match_r[r] == -1 and r not in banned:
                    match_l[u] = r
                    match_r[r] = u
                    break
        return self.size

    def hopcroft_karp(self) -> int:
        self.greedy()
        adj, match_l, match_r, banned = self.adj, self.match_l, self.match_r, self.banned
        n_left = len(adj)
        while True:
            dist = [_INF] * n_left
            queue = deque()
            for u in range(n_left):
                if match_l[u] == -1:
                    dist[u] = 0
                    queue.append(u)
            found = False
            while queue:
                u = queue.popleft()
                for r in adj[u]:
                    if r in banned:
                        continue
                    w = match_r[r]
                    if w == -1:
                        found = True
                    elif dist[w] == _INF:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            if not found:
                break
            pos = [0] * n_left
            for s in range(n_left):
                if match_l[s] != -1:
                    continue
                stack = [s]
                via = []
                while stack:
                    u = stack[-1]
                    step = None
                    while pos[u] < len(adj[u]):
                        r = adj[u][pos[u]]
                        pos[u] += 1
                        if r in banned:
                            continue
                        w = match_r[r]
                        if w == -1 or dist[w] == dist[u] + 1:
                            step = r
                            break
                    if step is None:
                        dist[u] = _INF
                        stack.pop()
                        if via:
                            via.pop()
                        continue
                    via.append(step)
                    w = match_r[step]
                    if w == -1:
                        for uu, rr in zip(stack, via):
                            match_l[uu] = rr
                            match_r[rr] = uu
                        break
                    stack.append(w)
        return self.size

    def augment(self, u: int) -> bool:
        """Look for one augmenting path from the free left vertex ``u``."""
        adj, match_l, match_r, banned = self.adj, self.match_l, self.match_r, self.banned
        prev = {}
        queue = deque([u])
        seen_left = {u}
        while queue:
            w = queue.popleft()
            for r in adj[w]:
                if r in banned or r in prev:
                    continue
                prev[r] = w
                nxt = match_r[r]
                if nxt == -1:
                    while True:
                        owner = prev[r]
                        old = match_l[owner]
                        match_l[owner] = r
                        match_r[r] = owner
                        if owner == u:
                            return True
                        r = old
                if nxt not in seen_left:
                    seen_left.add(nxt)
                    queue.append(nxt)
        return False

    def alternating_reach(self, u: int) -> tuple[set[int], set[int]]:
        """Left and right vertices reachable from ``u`` by alternating paths.

        If the matching is maximum and ``u`` is free, every reached right
        vertex is matched into the reached left set, so the left set has
        exactly one more vertex than its neighbourhood.
        """
        left = {u}
        right = set()
        queue = deque([u])
        while queue:
            w = queue.popleft()
            for r in self.adj[w]:
                if r in self.banned or r in right:
                    continue
                right.add(r)
                nxt = self.match_r[r]
                if nxt != -1 and nxt not in left:
                    left.add(nxt)
                    queue.append(nxt)
        return left, right

    def hall_violator(self) -> set[int] | None:
        """Left set with a too-small neighbourhood, or ``None`` if saturated.

        Assumes the current matching is maximum.
        """
        for u, r in enumerate(self.match_l):
            if r == -1:
                return self.alternating_reach(u)[0]
        return None

    def freeable_right(self) -> set[int]:
        """Right vertices left uncovered by at least one maximum matching.

        These are the free right vertices and everything reachable from them
        by even alternating paths (``r -> u`` along a non-matching edge,
        then ``u -> match_l[u]``).
        """
        radj = self._radj
        start = [r for r in range(self.n_right) if r not in self.banned and self.match_r[r] == -1]
        reached = set(start)
        queue = deque(start)
        while queue:
            r = queue.popleft()
            for u in radj[r]:
                r2 = self.match_l[u]
                if r2 != -1 and r2 != r and r2 not in reached:
                    reached.add(r2)
                    queue.append(r2)
        return reached


@dataclass(frozen=True)
class MatchingResult:
    matching: dict
    violator: frozenset | None

    @property
    def saturating(self) -> bool:
        return self.violator is None


def max_bipartite_matching(left: Sequence[Hashable], right: Sequence[Hashable],
                           edges: Iterable[tuple[Hashable, Hashable]]) -> MatchingResult:
    """Maximum matching between ``left`` and ``right``.

    When some left vertex stays unmatched, ``violator`` is a set of left
    vertices whose joint neighbourhood is smaller than the set itself.
    """
    lidx = {x: i for i, x in enumerate(left)}
    ridx = {y: j for j, y in enumerate(right)}
    adj = [[] for _ in left]
    for x, y in edges:
        j = ridx[y]
        if j not in adj[lidx[x]]:
            adj[lidx[x]].append(j)
    for a in adj:
        a.sort()
    m = BipartiteMatcher(adj, len(right))
    m.hopcroft_karp()
    matching = {left[u]: right[r] for u, r in enumerate(m.match_l) if r != -1}
    bad = m.hall_violator()
    return MatchingResult(matching, None if bad is None else frozenset(left[u] for u in bad))
