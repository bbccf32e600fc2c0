"""Confusion graphs of a network under a fixed update order."""

from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .core import AutomataNetwork, check_schedule, decode, encode, update_set, update_set_table
from .errors import InputError, ResourceError

BITSET_LIMIT = 2**16
MAX_VERTICES = 2**20


def _index(h: AutomataNetwork, x) -> int:
    if isinstance(x, (int, np.integer)):
        if not 0 <= int(x) < h.size:
            raise InputError(f"configuration index {x} outside [0, {h.size})")
        return int(x)
    if len(x) != h.n:
        raise InputError(f"configuration has {len(x)} digits, expected {h.n}")
    return encode(x, h.q)


def are_confused(h: AutomataNetwork, u: Sequence[int], x, x2) -> bool:
    """Edge oracle, evaluated straight from the definition.

    ``x`` and ``x2`` are neighbours iff ``h(x) != h(x2)`` and some prefix set
    ``{u_1, ..., u_i}`` of the order, updated synchronously, sends both to the
    same configuration.
    """
    u = check_schedule(u, h.n)
    x, x2 = _index(h, x), _index(h, x2)
    if x == x2:
        raise InputError("are_confused needs two distinct configurations")
    if h.table[x] == h.table[x2]:
        return False
    for i in range(1, h.n + 1):
        if update_set(h, u[:i], x) == update_set(h, u[:i], x2):
            return True
    return False


class ConfusionGraph:
    """Undirected graph on the ``q**n`` configuration indices.

    Adjacency is kept as one Python-int bitset per vertex up to ``2**16``
    vertices, and as a sorted ``(E, 2)`` edge array beyond that.
    """

    def __init__(self, h: AutomataNetwork, u: Sequence[int], adjacency=None, edge_array=None):
        self.h = h
        self.u = tuple(u)
        self.vertex_count = h.size
        self._adj = adjacency
        self._edges = edge_array

    @property
    def uses_bitsets(self) -> bool:
        return self._adj is not None

    def adjacency_bits(self) -> list[int]:
        if self._adj is None:
            adj = [0] * self.vertex_count
            for a, b in self._edges:
                adj[a] |= 1 << int(b)
                adj[b] |= 1 << int(a)
            self._adj = adj
        return self._adj

    def neighbors(self, x: int) -> list[int]:
        bits = self.adjacency_bits()[x]
        out = []
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def has_edge(self, x: int, y: int) -> bool:
        return bool((self.adjacency_bits()[x] >> y) & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges ``(x, y)`` with ``x < y`` in ascending order."""
        if self._edges is not None:
            for a, b in self._edges:
                yield int(a), int(b)
            return
        for x, bits in enumerate(self._adj):
            bits >>= x + 1
            y = x + 1
            while bits:
                if bits & 1:
                    yield x, y
                bits >>= 1
                y += 1

    @property
    def edge_count(self) -> int:
        if self._edges is not None:
            return len(self._edges)
        return sum(bin(b).count("1") for b in self._adj) // 2

    def degree(self, x: int) -> int:
        return bin(self.adjacency_bits()[x]).count("1")

    def is_edgeless(self) -> bool:
        if self._edges is not None:
            return len(self._edges) == 0
        return not any(self._adj)

    def is_clique(self, vertices) -> bool:
        vs = sorted(set(int(v) for v in vertices))
        adj = self.adjacency_bits()
        for i, a in enumerate(vs):
            for b in vs[i + 1 :]:
                if not (adj[a] >> b) & 1:
                    return False
        return True

    def to_dot(self, name: str = "confusion") -> str:
        n, q = self.h.n, self.h.q

        def label(x):
            return "".join(str(d) for d in decode(x, n, q))

        lines = [f"graph {name} {{"]
        lines += [f'  {x} [label="{label(x)}"];' for x in range(self.vertex_count)]
        lines += [f"  {a} -- {b};" for a, b in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_edge_list(self) -> str:
        return "".join(f"{a} {b}\n" for a, b in self.edges())


def prefix_tables(h: AutomataNetwork, u: Sequence[int]) -> list[np.ndarray]:
    """Trajectory tables ``h^{u_1..u_i}`` for ``i = 1..n``."""
    u = check_schedule(u, h.n)
    return [update_set_table(h, u[:i]) for i in range(1, h.n + 1)]


def build_confusion_graph(h: AutomataNetwork, u: Sequence[int]) -> ConfusionGraph:
    """Materialise the confusion graph by grouping configurations per trajectory value.

    Within a group of configurations sharing ``h^{u_1..u_i}(x)``, every pair with
    different images is joined.
    """
    u = check_schedule(u, h.n)
    size = h.size
    if size > MAX_VERTICES:
        raise ResourceError(f"confusion graph with {size} vertices exceeds guard 2^20")
    image = h.table
    # the last prefix is h itself and never merges distinct images
    tables = prefix_tables(h, u)[:-1]
    if size <= BITSET_LIMIT:
        adj = [0] * size
        for tab in tables:
            order = np.lexsort((image, tab))
            keys, img_sorted = tab[order], image[order]
            starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
            bounds = np.r_[starts, size]
            for s, e in zip(bounds[:-1], bounds[1:]):
                if e - s < 2 or img_sorted[s] == img_sorted[e - 1]:
                    continue
                members = order[s:e]
                group_bits = 0
                for x in members:
                    group_bits |= 1 << int(x)
                # split the group into runs of equal image
                sub = img_sorted[s:e]
                cuts = np.flatnonzero(np.r_[True, sub[1:] != sub[:-1]])
                cbounds = np.r_[cuts, e - s]
                for cs, ce in zip(cbounds[:-1], cbounds[1:]):
                    cls = members[cs:ce]
                    cls_bits = 0
                    for x in cls:
                        cls_bits |= 1 << int(x)
                    others = group_bits & ~cls_bits
                    for x in cls:
                        adj[int(x)] |= others
        return ConfusionGraph(h, u, adjacency=adj)

    pairs = []
    for tab in tables:
        order = np.lexsort((image, tab))
        keys = tab[order]
        starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
        bounds = np.r_[starts, size]
        for s, e in zip(bounds[:-1], bounds[1:]):
            if e - s < 2:
                continue
            members = order[s:e]
            a, b = np.triu_indices(e - s, k=1)
            keep = image[members[a]] != image[members[b]]
            if keep.any():
                lo = np.minimum(members[a[keep]], members[b[keep]])
                hi = np.maximum(members[a[keep]], members[b[keep]])
                pairs.append(np.stack([lo, hi], axis=1))
    if pairs:
        edge_array = np.unique(np.concatenate(pairs), axis=0)
    else:
        edge_array = np.zeros((0, 2), dtype=np.int64)
    return ConfusionGraph(h, u, edge_array=edge_array)


def brute_force_confusion_edges(h: AutomataNetwork, u: Sequence[int]) -> set[tuple[int, int]]:
    """All-pairs edge set via :func:`are_confused`; used as an oracle in tests."""
    return {
        (x, y)
        for x in range(h.size)
        for y in range(x + 1, h.size)
        if are_confused(h, u, x, y)
    }
