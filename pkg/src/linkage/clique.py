"""Exact maximum clique by branch and bound with greedy-colouring bounds.

Vertex sets are Python ints used as bitsets.  The search follows the
bitset variant of Tomita's MCQ: candidates are coloured greedily in a
fixed initial order (smallest-last degeneracy order) and the colour count
bounds the clique size reachable from each branch.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass
class CliqueResult:
    clique: list[int]
    exact: bool
    nodes: int = 0
    seconds: float = 0.0
    stats: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.clique)


def degeneracy_order(adj: Sequence[int]) -> list[int]:
    """Smallest-last order: vertices removed last come first."""
    n = len(adj)
    alive = (1 << n) - 1
    deg = [a.bit_count() for a in adj]
    removed = []
    buckets: dict[int, set[int]] = {}
    for v, d in enumerate(deg):
        buckets.setdefault(d, set()).add(v)
    dmin = 0
    for _ in range(n):
        while not buckets.get(dmin):
            dmin += 1
        v = min(buckets[dmin])
        buckets[dmin].discard(v)
        removed.append(v)
        alive &= ~(1 << v)
        nb = adj[v] & alive
        while nb:
            low = nb & -nb
            w = low.bit_length() - 1
            nb ^= low
            buckets[deg[w]].discard(w)
            deg[w] -= 1
            buckets.setdefault(deg[w], set()).add(w)
        dmin = max(0, dmin - 1)
    return removed[::-1]


def _relabel(adj: Sequence[int], order: list[int]) -> list[int]:
    pos = {v: i for i, v in enumerate(order)}
    out = []
    for v in order:
        a, m = adj[v], 0
        while a:
            low = a & -a
            m |= 1 << pos[low.bit_length() - 1]
            a ^= low
        out.append(m)
    return out


class _TargetReached(Exception):
    pass


def max_clique(adj: Sequence[int], incumbent: Sequence[int] = (), floor: int = 0, target: int | None = None,
               node_limit: int | None = None, time_limit: float | None = None) -> CliqueResult:
    """Maximum clique of the graph with bitset adjacency ``adj`` (no self loops).

    ``incumbent`` is a known clique used as the starting lower bound.  With
    ``floor`` only cliques larger than ``floor`` are searched for; if none
    exists the returned clique is the incumbent (possibly empty).  The search
    stops as soon as a clique of size ``target`` is found, since the caller
    knows nothing larger exists.  If a node or time limit is hit, the best
    clique found so far is returned with ``exact=False``.
    """
    n = len(adj)
    start = time.monotonic()
    if n == 0:
        return CliqueResult(list(incumbent), True)
    order = degeneracy_order(adj)
    g = _relabel(adj, order)
    best: list[int] = list(incumbent)
    best_size = max(len(best), floor)
    if target is not None and best_size >= target:
        return CliqueResult(sorted(best), True, 0, 0.0)
    nodes = 0
    clique: list[int] = []

    def colour_sort(p: int) -> tuple[list[int], list[int]]:
        verts, cols = [], []
        k = 0
        uncol = p
        kmin = best_size - len(clique)
        while uncol:
            k += 1
            q_ = uncol
            while q_:
                low = q_ & -q_
                v = low.bit_length() - 1
                q_ &= ~g[v]
                q_ ^= low
                uncol ^= low
                if k > kmin:
                    verts.append(v)
                    cols.append(k)
        return verts, cols

    def expand(p: int) -> None:
        nonlocal best, best_size, nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise SearchBudgetExceeded
        if time_limit is not None and nodes % 1024 == 0 and time.monotonic() - start > time_limit:
            raise SearchBudgetExceeded
        verts, cols = colour_sort(p)
        for idx in range(len(verts) - 1, -1, -1):
            if len(clique) + cols[idx] <= best_size:
                return
            v = verts[idx]
            clique.append(v)
            newp = p & g[v]
            if newp:
                expand(newp)
            elif len(clique) > best_size:
                best = [order[x] for x in clique]
                best_size = len(best)
                if target is not None and best_size >= target:
                    raise _TargetReached
            clique.pop()
            p &= ~(1 << v)

    exact = True
    try:
        expand((1 << n) - 1)
    except SearchBudgetExceeded:
        exact = False
    except _TargetReached:
        pass
    return CliqueResult(sorted(best), exact, nodes, time.monotonic() - start)


def is_clique(adj: Sequence[int], verts: Sequence[int]) -> bool:
    vs = list(verts)
    return all(adj[a] >> b & 1 for i, a in enumerate(vs) for b in vs[i + 1:])
