"""Vertex colorings of confusion graphs and the sequentialization costs they give."""

from __future__ import annotations

import itertools
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .confusion import ConfusionGraph, build_confusion_graph
from .core import AutomataNetwork, check_schedule, digits_matrix
from .errors import InputError, ResourceError

EXACT_LIMIT = 2**12
KAPPA_MIN_MAX_N = 8


@dataclass(frozen=True)
class Coloring:
    """Colors ``0..count-1`` per configuration, numbered by first appearance."""

    colors: tuple
    count: int

    @classmethod
    def compact(cls, raw: Sequence) -> "Coloring":
        """Renumber arbitrary hashable labels to ``0..C-1`` in order of first use."""
        names: dict = {}
        out = []
        for c in raw:
            if isinstance(c, np.ndarray):
                c = tuple(c.tolist())
            out.append(names.setdefault(c, len(names)))
        return cls(tuple(out), len(names))

    def is_proper(self, graph: ConfusionGraph) -> bool:
        if len(self.colors) != graph.vertex_count:
            return False
        return all(self.colors[a] != self.colors[b] for a, b in graph.edges())


def ceil_log(value: int, q: int) -> int:
    """Smallest ``k >= 0`` with ``q**k >= value`` (exact integer arithmetic)."""
    if value < 1:
        raise InputError(f"ceil_log needs a positive value, got {value}")
    k, p = 0, 1
    while p < value:
        p *= q
        k += 1
    return k


def _neighbor_lists(adj: list[int]) -> list[list[int]]:
    out = []
    for bits in adj:
        nb = []
        while bits:
            low = bits & -bits
            nb.append(low.bit_length() - 1)
            bits ^= low
        out.append(nb)
    return out


def greedy_clique(adj: list[int]) -> list[int]:
    """Largest of the greedy cliques grown from each vertex (a lower bound on chi)."""
    V = len(adj)
    degree = [bin(b).count("1") for b in adj]
    best: list[int] = []
    for start in range(V):
        clique = [start]
        cand = adj[start]
        while cand:
            # highest-degree candidate, lowest index on ties
            v, bits, pick = 0, cand, -1
            while bits:
                low = bits & -bits
                v = low.bit_length() - 1
                if pick < 0 or degree[v] > degree[pick]:
                    pick = v
                bits ^= low
            clique.append(pick)
            cand &= adj[pick]
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def _dsatur_order_coloring(adj: list[int], nbrs: list[list[int]]) -> list[int]:
    V = len(adj)
    color = [-1] * V
    degree = [len(nb) for nb in nbrs]
    neigh_colors = [set() for _ in range(V)]
    for _ in range(V):
        v = max(
            (x for x in range(V) if color[x] < 0),
            key=lambda x: (len(neigh_colors[x]), degree[x], -x),
        )
        c = 0
        while c in neigh_colors[v]:
            c += 1
        color[v] = c
        for w in nbrs[v]:
            neigh_colors[w].add(c)
    return color


def greedy_coloring(graph: ConfusionGraph) -> Coloring:
    """DSATUR: colour the most saturated vertex next (ties: degree, then lowest index)."""
    adj = graph.adjacency_bits()
    if not adj:
        return Coloring((), 0)
    return Coloring.compact(_dsatur_order_coloring(adj, _neighbor_lists(adj)))


class _BranchAndBound:
    def __init__(self, adj: list[int], lower: int, upper: list[int]):
        self.adj = adj
        self.nbrs = _neighbor_lists(adj)
        self.V = len(adj)
        self.degree = [len(nb) for nb in self.nbrs]
        self.lower = lower
        self.best = max(upper) + 1
        self.best_coloring = list(upper)
        self.color = [-1] * self.V
        self.cnt = [[0] * (self.best + 1) for _ in range(self.V)]
        self.sat = [0] * self.V
        self.done = False

    def assign(self, v: int, c: int) -> None:
        self.color[v] = c
        for w in self.nbrs[v]:
            if self.cnt[w][c] == 0:
                self.sat[w] += 1
            self.cnt[w][c] += 1

    def unassign(self, v: int, c: int) -> None:
        self.color[v] = -1
        for w in self.nbrs[v]:
            self.cnt[w][c] -= 1
            if self.cnt[w][c] == 0:
                self.sat[w] -= 1

    def select(self) -> int:
        best_v, best_key = -1, None
        color, sat, degree = self.color, self.sat, self.degree
        for v in range(self.V):
            if color[v] < 0:
                key = (sat[v], degree[v])
                if best_key is None or key > best_key:
                    best_v, best_key = v, key
        return best_v

    def search(self, colored: int, used: int) -> None:
        if used >= self.best:
            return
        if colored == self.V:
            self.best = used
            self.best_coloring = list(self.color)
            self.done = used <= self.lower
            return
        v = self.select()
        row = self.cnt[v]
        for c in range(used):
            if row[c] == 0:
                self.assign(v, c)
                self.search(colored + 1, used)
                self.unassign(v, c)
                if self.done:
                    return
        if used + 1 < self.best:
            self.assign(v, used)
            self.search(colored + 1, used + 1)
            self.unassign(v, used)


def exact_coloring(graph: ConfusionGraph) -> Coloring:
    """Optimal coloring by DSATUR branch and bound.

    Seeded with the greedy DSATUR coloring as upper bound and a greedy clique,
    precoloured, as lower bound. Deterministic.
    """
    if graph.vertex_count > EXACT_LIMIT:
        raise ResourceError(
            f"exact coloring limited to {EXACT_LIMIT} vertices, got {graph.vertex_count}"
        )
    adj = graph.adjacency_bits()
    if not adj:
        return Coloring((), 0)
    nbrs = _neighbor_lists(adj)
    upper = _dsatur_order_coloring(adj, nbrs)
    clique = greedy_clique(adj)
    if max(upper) + 1 == len(clique):
        return Coloring.compact(upper)
    bnb = _BranchAndBound(adj, len(clique), upper)
    for c, v in enumerate(clique):
        bnb.assign(v, c)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 2 * graph.vertex_count + 1000))
    try:
        bnb.search(len(clique), len(clique))
    finally:
        sys.setrecursionlimit(limit)
    return Coloring.compact(bnb.best_coloring)


def exact_chromatic_number(graph: ConfusionGraph) -> int:
    return exact_coloring(graph).count


def is_k_colorable(adj: list[int], k: int) -> list[int] | None:
    """Plain backtracking k-colorability test over a fixed vertex order.

    Independent of the DSATUR search; used to cross-check it.
    """
    V = len(adj)
    nbrs = _neighbor_lists(adj)
    order = sorted(range(V), key=lambda v: (-len(nbrs[v]), v))
    color = [-1] * V

    def place(pos: int, used: int) -> bool:
        if pos == V:
            return True
        v = order[pos]
        taken = {color[w] for w in nbrs[v] if color[w] >= 0}
        # a fresh colour is interchangeable with any other unused one
        for c in range(min(k, used + 1)):
            if c not in taken:
                color[v] = c
                if place(pos + 1, max(used, c + 1)):
                    return True
                color[v] = -1
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 2 * V + 1000))
    try:
        return color if place(0, 0) else None
    finally:
        sys.setrecursionlimit(limit)


def chromatic_number_by_deepening(graph: ConfusionGraph) -> int:
    """chi by trying ``k = 1, 2, ...`` with :func:`is_k_colorable`."""
    adj = graph.adjacency_bits()
    if not adj:
        return 0
    k = 1
    while is_k_colorable(adj, k) is None:
        k += 1
    return k


def kappa_details(h: AutomataNetwork, u: Sequence[int]) -> dict:
    """Cost of sequentialization under ``u`` with its chromatic number and an optimal coloring."""
    u = check_schedule(u, h.n)
    graph = build_confusion_graph(h, u)
    coloring = exact_coloring(graph)
    return {
        "kappa": ceil_log(coloring.count, h.q),
        "chi": coloring.count,
        "schedule": list(u),
        "coloring": coloring,
        "graph": graph,
    }


def kappa(h: AutomataNetwork, u: Sequence[int]) -> int:
    """``ceil(log_q chi(G_{h,u}))``."""
    return kappa_details(h, u)["kappa"]


def coordinate_automorphisms(h: AutomataNetwork) -> list[tuple[int, ...]]:
    """Coordinate permutations ``p`` (1-based images) with ``h`` invariant under relabeling."""
    n, q = h.n, h.q
    digits = digits_matrix(n, q)
    powers = q ** np.arange(n, dtype=np.int64)
    out = []
    for perm in itertools.permutations(range(n)):
        # (sigma x)_{perm[i]} = x_i
        sigma = np.zeros(h.size, dtype=np.int64)
        for i in range(n):
            sigma += digits[:, i] * powers[perm[i]]
        # h invariant iff sigma(h(x)) == h(sigma(x))
        if np.array_equal(sigma[h.table], h.table[sigma]):
            out.append(tuple(p + 1 for p in perm))
    return out


def _kappa_block(h: AutomataNetwork, perms: list[tuple[int, ...]], prune: bool):
    best, best_u = None, None
    for u in perms:
        graph = build_confusion_graph(h, u)
        if prune and best is not None:
            if best == 0:
                break
            # a clique above q^(best-1) proves kappa(h, u) >= best
            if len(greedy_clique(graph.adjacency_bits())) > h.q ** (best - 1):
                continue
        k = ceil_log(max(exact_chromatic_number(graph), 1), h.q)
        if best is None or k < best:
            best, best_u = k, u
            if k == 0:
                break
    return best, best_u


def kappa_min(
    h: AutomataNetwork, prune: bool = True, symmetry: bool = False, workers: int = 1
) -> tuple[int, tuple[int, ...]]:
    """Minimum of ``kappa(h, u)`` over all orders, with a minimising order.

    Orders are scanned lexicographically; among ties the lexicographically
    smallest order is returned. ``prune`` skips orders whose confusion graph
    holds a clique too large to improve the running best. ``symmetry`` skips
    orders equivalent under a coordinate automorphism of ``h`` to one already
    scanned.
    """
    n = h.n
    if n > KAPPA_MIN_MAX_N:
        raise ResourceError(f"kappa_min enumerates n! orders; n = {n} exceeds guard {KAPPA_MIN_MAX_N}")
    if n == 0:
        return 0, ()
    perms = list(itertools.permutations(range(1, n + 1)))
    if symmetry:
        autos = coordinate_automorphisms(h)
        kept = []
        for u in perms:
            images = [tuple(p[c - 1] for c in u) for p in autos]
            if min(images) == u:
                kept.append(u)
        perms = kept
    if workers <= 1:
        best, best_u = _kappa_block(h, perms, prune)
        return best, best_u
    blocks = [perms[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_kappa_block, [h] * workers, blocks, [prune] * workers))
    results = [r for r in results if r[0] is not None]
    return min(results)


def kappa_upper_bound(n: int, q: int) -> int:
    """``ceil(n/2 + log_q(n/2 + 1))`` by exact comparison.

    Uses ``q**k >= q**(n/2) (n+2)/2  <=>  4 q**(2k) >= q**n (n+2)**2``.
    """
    k = 0
    while 4 * q ** (2 * k) < q**n * (n + 2) ** 2:
        k += 1
    return k


def factored_confusion_graph(h: AutomataNetwork, u: Sequence[int]) -> tuple[list[int], list[set[int]]]:
    """Quotient of the confusion graph by (second half of ``u``, image).

    Returns the class of every configuration and the class adjacency. For even
    ``n`` the maximum class degree is at most ``(n/2 + 1) q**(n/2) - 1``.
    """
    u = check_schedule(u, h.n)
    graph = build_confusion_graph(h, u)
    digits = digits_matrix(h.n, h.q)
    tail = [c - 1 for c in u[h.n // 2 :]]
    keys: dict = {}
    cls = []
    for x in range(h.size):
        key = (tuple(digits[x, tail].tolist()), int(h.table[x]))
        cls.append(keys.setdefault(key, len(keys)))
    adj = [set() for _ in range(len(keys))]
    for a, b in graph.edges():
        if cls[a] != cls[b]:
            adj[cls[a]].add(cls[b])
            adj[cls[b]].add(cls[a])
    return cls, adj
