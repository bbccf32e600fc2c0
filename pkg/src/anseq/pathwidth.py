"""Path decompositions of interaction graphs and the mod-q-sum sequentializer built from them."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import AutomataNetwork, InteractionGraph, check_schedule, interaction_graph, positions
from .errors import InputError, ResourceError, VerificationError
from .synthesis import SequentializationCertificate

MAX_DP_VERTICES = 12


def _adjacency(n: int, edges: Iterable[tuple[int, int]]) -> dict[int, set[int]]:
    adj = {v: set() for v in range(1, n + 1)}
    for i, j in edges:
        i, j = int(i), int(j)
        if not (1 <= i <= n and 1 <= j <= n):
            raise InputError(f"edge ({i}, {j}) outside [1, {n}]")
        if i != j:
            adj[i].add(j)
            adj[j].add(i)
    return adj


def _as_graph(graph) -> tuple[int, dict[int, set[int]]]:
    """Accept an ``InteractionGraph`` (self-loops and directions dropped) or ``(n, edges)``."""
    if isinstance(graph, InteractionGraph):
        return graph.n, graph.neighbors()
    n, edges = graph
    return int(n), _adjacency(int(n), edges)


@dataclass(frozen=True)
class PathDecomposition:
    """Bags ``X_1..X_p`` over vertices ``1..n``; ``size`` is the largest bag minus one."""

    n: int
    bags: tuple

    def __post_init__(self):
        bags = tuple(frozenset(int(v) for v in bag) for bag in self.bags)
        for bag in bags:
            if any(not 1 <= v <= self.n for v in bag):
                raise InputError(f"bag {sorted(bag)} has vertices outside [1, {self.n}]")
        object.__setattr__(self, "bags", bags)

    @property
    def size(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def first_bag(self, v: int) -> int:
        """0-based index of the first bag holding ``v``."""
        return next(a for a, bag in enumerate(self.bags) if v in bag)

    def last_bag(self, v: int) -> int:
        return max(a for a, bag in enumerate(self.bags) if v in bag)

    def problems(self, graph) -> list[str]:
        """Every way in which this fails to be a path decomposition of ``graph``."""
        n, adj = _as_graph(graph)
        out = []
        if n != self.n:
            out.append(f"decomposition is over {self.n} vertices, graph has {n}")
            return out
        for v in range(1, n + 1):
            hits = [a for a, bag in enumerate(self.bags) if v in bag]
            if not hits:
                out.append(f"vertex {v} is in no bag")
            elif hits != list(range(hits[0], hits[-1] + 1)):
                out.append(f"bags holding vertex {v} are not contiguous")
        for i in adj:
            for j in adj[i]:
                if i < j and not any(i in bag and j in bag for bag in self.bags):
                    out.append(f"edge ({i}, {j}) is in no bag")
        return out

    def is_valid(self, graph) -> bool:
        return not self.problems(graph)

    def is_normalized(self) -> bool:
        return not any(
            a != b and self.bags[a] <= self.bags[b]
            for a in range(len(self.bags))
            for b in range(len(self.bags))
        )

    def normalize(self) -> "PathDecomposition":
        """Drop bags contained in another bag.

        Contiguity means a bag contained in any other bag is contained in a
        neighbouring one, so repeatedly merging into neighbours is enough.
        """
        bags = [b for b in self.bags]
        changed = True
        while changed:
            changed = False
            for a in range(len(bags)):
                left = a > 0 and bags[a] <= bags[a - 1]
                right = a + 1 < len(bags) and bags[a] <= bags[a + 1]
                if left or right:
                    del bags[a]
                    changed = True
                    break
        return PathDecomposition(self.n, tuple(bags))

    def to_dict(self) -> dict:
        return {"bags": [sorted(b) for b in self.bags]}

    @classmethod
    def from_dict(cls, data: dict, n: int | None = None) -> "PathDecomposition":
        try:
            bags = [list(b) for b in data["bags"]]
        except (KeyError, TypeError):
            raise InputError('decomposition JSON needs a "bags" list of vertex lists') from None
        if n is None:
            n = max((max(b) for b in bags if b), default=0)
        return cls(n, tuple(bags))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str, n: int | None = None) -> "PathDecomposition":
        return cls.from_dict(json.loads(text), n)


def _boundary_sizes(n: int, adj: dict[int, set[int]]) -> list[int]:
    """``|boundary(S)|`` for every subset ``S`` of vertices (bit ``v-1`` for vertex ``v``)."""
    nb = [0] * n
    for v, ws in adj.items():
        for w in ws:
            nb[v - 1] |= 1 << (w - 1)
    full = (1 << n) - 1
    out = [0] * (1 << n)
    for s in range(1 << n):
        outside = full & ~s
        out[s] = sum(1 for v in range(n) if s >> v & 1 and nb[v] & outside)
    return out


def vertex_separation(order: Sequence[int], graph) -> int:
    """Largest number of placed vertices with an unplaced neighbour, over all prefixes of ``order``."""
    n, adj = _as_graph(graph)
    order = check_schedule(order, n)
    placed: set[int] = set()
    worst = 0
    for v in order:
        placed.add(v)
        worst = max(worst, sum(1 for w in placed if adj[w] - placed))
    return worst


def decomposition_from_order(order: Sequence[int], graph) -> PathDecomposition:
    """Bag ``t`` holds vertex ``order[t]`` plus the earlier vertices still adjacent to later ones."""
    n, adj = _as_graph(graph)
    order = check_schedule(order, n)
    placed: set[int] = set()
    bags = []
    for v in order:
        bags.append(frozenset({w for w in placed if adj[w] - placed} | {v}))
        placed.add(v)
    return PathDecomposition(n, tuple(bags)).normalize()


def _optimal_order(n: int, adj: dict[int, set[int]]) -> tuple[int, ...]:
    boundary = _boundary_sizes(n, adj)
    size = 1 << n
    best = [0] * size
    choice = [0] * size
    for s in range(1, size):
        value, pick = None, 0
        rest = s
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            cand = best[s ^ low]
            if value is None or cand < value:
                value, pick = cand, v
            rest ^= low
        best[s] = max(value, boundary[s])
        choice[s] = pick
    order = []
    s = size - 1
    while s:
        v = choice[s]
        order.append(v + 1)
        s ^= 1 << v
    return tuple(reversed(order))


def exact_pathwidth(graph) -> PathDecomposition:
    """An optimal, normalized path decomposition via a subset DP over linear layouts."""
    n, adj = _as_graph(graph)
    if n > MAX_DP_VERTICES:
        raise ResourceError(f"exact pathwidth needs n <= {MAX_DP_VERTICES}, got {n}")
    if n == 0:
        return PathDecomposition(0, ())
    pd = decomposition_from_order(_optimal_order(n, adj), (n, _edges(adj)))
    if not pd.is_valid((n, _edges(adj))):
        raise VerificationError("constructed path decomposition is invalid")
    return pd


def _edges(adj: dict[int, set[int]]) -> list[tuple[int, int]]:
    return [(i, j) for i in adj for j in adj[i] if i < j]


def brute_force_pathwidth(graph) -> int:
    """Minimum vertex separation over all ``n!`` orderings."""
    n, adj = _as_graph(graph)
    if n > 8:
        raise ResourceError(f"brute-force pathwidth needs n <= 8, got {n}")
    if n == 0:
        return 0
    g = (n, _edges(adj))
    return min(vertex_separation(p, g) for p in itertools.permutations(range(1, n + 1)))


def derive_c_u(pd: PathDecomposition) -> tuple[dict[int, int], tuple[int, ...]]:
    """Greedy color classes ``c`` (0 = uncolored, else ``1..s``) and schedule ``u``.

    ``u`` sorts vertices by last bag and ``c`` is assigned in order of first bag,
    ties broken by vertex index.
    """
    if not pd.is_normalized():
        pd = pd.normalize()
    n, s = pd.n, pd.size
    verts = range(1, n + 1)
    b = {v: pd.first_bag(v) for v in verts}
    e = {v: pd.last_bag(v) for v in verts}
    u = tuple(sorted(verts, key=lambda v: (e[v], v)))
    upos = positions(u)
    c: dict[int, int] = {}
    for j in sorted(verts, key=lambda v: (b[v], v)):
        bag = pd.bags[b[j]]
        earlier = [k for k in bag if k in c]
        used = {c[k] for k in earlier}
        free = [col for col in range(1, s + 1) if col not in used]
        if free:
            c[j] = free[0]
        elif any(e[k] == b[j] for k in earlier):
            # inherit from the earliest-finishing vertex already colored in this bag
            i = min(earlier, key=lambda k: upos[k])
            c[j] = c[i]
        else:
            c[j] = 0
    return c, u


def path_property_violations(
    graph, c: dict[int, int], u: Sequence[int]
) -> list[int]:
    """Vertices ``i`` meeting neither alternative of the decomposition property.

    Either every neighbour of ``i`` is updated no earlier than ``i``, or ``i`` is
    colored and every neighbour of every later vertex of its color is updated no
    earlier than ``i``.
    """
    n, adj = _as_graph(graph)
    u = check_schedule(u, n)
    pos = positions(u)
    bad = []
    for i in range(1, n + 1):
        if all(pos[i] <= pos[k] for k in adj[i]):
            continue
        ci = c.get(i, 0)
        ok = ci != 0 and all(
            pos[i] <= pos[k]
            for j in range(1, n + 1)
            if c.get(j, 0) == ci and pos[i] < pos[j]
            for k in adj[j]
        )
        if not ok:
            bad.append(i)
    return bad


def sequentialize_via_pathwidth(
    h: AutomataNetwork, c: dict[int, int], u: Sequence[int], s: int | None = None
) -> SequentializationCertificate:
    """Certificate with ``s`` extra automata; automaton ``n + l`` stores the sum of ``h_j`` over color ``l``.

    ``s`` defaults to the largest color used.
    """
    n, q = h.n, h.q
    u = check_schedule(u, n)
    colors = {i: int(c.get(i, 0)) for i in range(1, n + 1)}
    if s is None:
        s = max(colors.values(), default=0)
    if any(not 0 <= col <= s for col in colors.values()):
        raise InputError(f"colors must lie in [0, {s}]")
    ig = interaction_graph(h)
    bad = path_property_violations(ig, colors, u)
    if bad:
        raise InputError(f"coloring and schedule violate the decomposition property at {bad}")
    adj = ig.neighbors()
    pos = positions(u)

    m = n + s
    low = h.size
    z = np.arange(q**m, dtype=np.int64)
    x_idx = z % low
    digits = np.stack([(z // q**a) % q for a in range(m)], axis=1)
    image = h.image_digits
    out = digits.copy()

    for ell in range(1, s + 1):
        members = [j for j in range(1, n + 1) if colors[j] == ell]
        total = np.zeros(len(z), dtype=np.int64)
        for j in members:
            total += image[x_idx, j - 1]
        out[:, n + ell - 1] = total % q

    # h_j evaluated on the first n registers of the current configuration
    h_now = image[x_idx]
    for i in range(1, n + 1):
        if all(pos[i] <= pos[k] for k in adj[i]):
            out[:, i - 1] = h_now[:, i - 1]
            continue
        ell = colors[i]
        val = digits[:, n + ell - 1].copy()
        for j in range(1, n + 1):
            if j == i or colors[j] != ell:
                continue
            val -= digits[:, j - 1] if pos[j] < pos[i] else h_now[:, j - 1]
        out[:, i - 1] = val % q

    f = AutomataNetwork.from_image_digits(m, q, out)
    w = tuple(range(n + 1, m + 1)) + u
    try:
        return SequentializationCertificate(h, f, w, s)
    except VerificationError as exc:
        raise VerificationError(f"pathwidth sequentialization failed verification: {exc}") from exc


def pathwidth_certificate(
    h: AutomataNetwork, pd: PathDecomposition | None = None
) -> tuple[PathDecomposition, SequentializationCertificate]:
    """Decompose ``IG*(h)`` (exactly unless ``pd`` is given) and sequentialize with ``pd.size`` extra automata."""
    ig = interaction_graph(h)
    if pd is None:
        pd = exact_pathwidth(ig)
    else:
        problems = pd.problems(ig)
        if problems:
            raise InputError("; ".join(problems))
        pd = pd.normalize()
    c, u = derive_c_u(pd)
    return pd, sequentialize_via_pathwidth(h, c, u, pd.size)
