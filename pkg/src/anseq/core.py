"""Automata networks stored as full transition tables.

A configuration of ``n`` automata over the alphabet ``[0, q)`` is identified with
its index ``sum(x_i * q**(i-1))`` (coordinate 1 is the least significant digit).
Coordinates are 1-based in every public function; arrays are indexed from 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InputError, ResourceError

MAX_CONFIGS = 2**26


def _check_size(n: int, q: int) -> int:
    if n < 0:
        raise InputError(f"automaton count must be non-negative, got {n}")
    if q < 2:
        raise InputError(f"alphabet size must be at least 2, got {q}")
    size = q**n
    if size > MAX_CONFIGS:
        raise ResourceError(f"q^n = {q}^{n} exceeds the table guard 2^26")
    return size


@lru_cache(maxsize=64)
def digits_matrix(n: int, q: int) -> np.ndarray:
    """Return the ``(q**n, n)`` array whose row ``x`` holds the digits of ``x``."""
    size = _check_size(n, q)
    idx = np.arange(size, dtype=np.int64)
    out = np.empty((size, n), dtype=np.int64)
    for i in range(n):
        out[:, i] = (idx // q**i) % q
    out.setflags(write=False)
    return out


@lru_cache(maxsize=64)
def _powers(n: int, q: int) -> np.ndarray:
    p = q ** np.arange(n, dtype=np.int64)
    p.setflags(write=False)
    return p


def encode(digits: Sequence[int], q: int) -> int:
    """Index of the configuration with the given digit vector."""
    index = 0
    for i, d in enumerate(digits):
        d = int(d)
        if not 0 <= d < q:
            raise InputError(f"digit {d} at coordinate {i + 1} is outside [0, {q})")
        index += d * q**i
    return index


def decode(index: int, n: int, q: int) -> tuple[int, ...]:
    """Digit vector of configuration ``index``."""
    index = int(index)
    if not 0 <= index < q**n:
        raise InputError(f"configuration index {index} outside [0, {q}^{n})")
    out = []
    for _ in range(n):
        index, d = divmod(index, q)
        out.append(d)
    return tuple(out)


def check_coordinates(coords: Iterable[int], n: int) -> tuple[int, ...]:
    out = tuple(int(i) for i in coords)
    for i in out:
        if not 1 <= i <= n:
            raise InputError(f"coordinate {i} outside [1, {n}]")
    return out


def check_schedule(order: Sequence[int], n: int) -> tuple[int, ...]:
    """Validate a permutation of ``[n]`` given as 1-based coordinates."""
    out = check_coordinates(order, n)
    if sorted(out) != list(range(1, n + 1)):
        raise InputError(f"{list(out)} is not a permutation of [1, {n}]")
    return out


def positions(order: Sequence[int]) -> dict[int, int]:
    """Position map ``w(i) = j`` iff ``order[j-1] == i`` (both 1-based)."""
    return {int(c): j + 1 for j, c in enumerate(order)}


class AutomataNetwork:
    """A transformation of ``[0, q)^n`` given by its full table.

    ``table[x]`` is the index of ``h(x)``. Instances are immutable and hashable.
    """

    __slots__ = ("n", "q", "table", "_hash")

    def __init__(self, n: int, q: int, table: Sequence[int] | np.ndarray):
        size = _check_size(n, q)
        arr = np.array(table, dtype=np.int64).reshape(-1)
        if arr.shape[0] != size:
            raise InputError(f"table has {arr.shape[0]} entries, expected q^n = {size}")
        if size and (arr.min() < 0 or arr.max() >= size):
            raise InputError("table entries must lie in [0, q^n)")
        arr.setflags(write=False)
        self.n = int(n)
        self.q = int(q)
        self.table = arr
        self._hash = None

    # construction helpers

    @classmethod
    def from_function(
        cls, n: int, q: int, fn: Callable[[tuple[int, ...]], Sequence[int]]
    ) -> "AutomataNetwork":
        """Build from a map on digit tuples."""
        size = _check_size(n, q)
        table = [encode(fn(decode(x, n, q)), q) for x in range(size)]
        return cls(n, q, table)

    @classmethod
    def from_coordinate_functions(
        cls, n: int, q: int, fns: Sequence[Callable[[tuple[int, ...]], int]]
    ) -> "AutomataNetwork":
        if len(fns) != n:
            raise InputError(f"expected {n} coordinate functions, got {len(fns)}")
        return cls.from_function(n, q, lambda x: [int(f(x)) % q for f in fns])

    @classmethod
    def from_image_digits(cls, n: int, q: int, digits: np.ndarray) -> "AutomataNetwork":
        """Build from a ``(q**n, n)`` array of image digits."""
        digits = np.asarray(digits, dtype=np.int64).reshape(q**n, n)
        if digits.size and (digits.min() < 0 or digits.max() >= q):
            raise InputError(f"image digits must lie in [0, {q})")
        return cls(n, q, digits @ _powers(n, q))

    @classmethod
    def identity(cls, n: int, q: int) -> "AutomataNetwork":
        return cls(n, q, np.arange(_check_size(n, q)))

    @classmethod
    def constant(cls, n: int, q: int, value: Sequence[int] | None = None) -> "AutomataNetwork":
        target = encode(value, q) if value is not None else 0
        return cls(n, q, np.full(_check_size(n, q), target))

    @classmethod
    def random(cls, n: int, q: int, rng: np.random.Generator) -> "AutomataNetwork":
        size = _check_size(n, q)
        return cls(n, q, rng.integers(0, size, size=size))

    # views

    @property
    def size(self) -> int:
        return self.q**self.n

    @property
    def image_digits(self) -> np.ndarray:
        """``(q**n, n)`` array; row ``x`` holds the digits of ``h(x)``."""
        return digits_matrix(self.n, self.q)[self.table]

    def coordinate(self, i: int) -> np.ndarray:
        """Values of the coordinate function ``h_i`` over all configurations."""
        (i,) = check_coordinates([i], self.n)
        return (self.table // self.q ** (i - 1)) % self.q

    def __call__(self, x):
        return apply(self, x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AutomataNetwork):
            return NotImplemented
        return self.n == other.n and self.q == other.q and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.q, self.table.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"AutomataNetwork(n={self.n}, q={self.q})"

    # serialization

    def to_dict(self) -> dict:
        return {"n": self.n, "q": self.q, "table": self.image_digits.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "AutomataNetwork":
        try:
            n, q, rows = int(data["n"]), int(data["q"]), data["table"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"network JSON needs keys n, q, table: {exc}") from None
        size = _check_size(n, q)
        if not isinstance(rows, list) or len(rows) != size or any(not isinstance(r, list) or len(r) != n for r in rows):
            raise InputError(f"network JSON table must have {size} rows of {n} digits")
        return cls(n, q, [encode(r, q) for r in rows])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "AutomataNetwork":
        return cls.from_dict(json.loads(text))


def _as_index(h: AutomataNetwork, x) -> tuple[int, bool]:
    if isinstance(x, (int, np.integer)):
        x = int(x)
        if not 0 <= x < h.size:
            raise InputError(f"configuration index {x} outside [0, {h.size})")
        return x, False
    digits = tuple(x)
    if len(digits) != h.n:
        raise InputError(f"configuration has {len(digits)} digits, expected {h.n}")
    return encode(digits, h.q), True


def _like(h: AutomataNetwork, index: int, as_digits: bool):
    return decode(index, h.n, h.q) if as_digits else index


def apply(h: AutomataNetwork, x):
    """Parallel update ``h(x)``.

    ``x`` is a configuration index or a digit sequence; the result has the same form.
    """
    idx, as_digits = _as_index(h, x)
    return _like(h, int(h.table[idx]), as_digits)


def update_set_table(f: AutomataNetwork, coords: Iterable[int]) -> np.ndarray:
    """Table of the synchronous update ``f^I`` over all configurations."""
    coords = set(check_coordinates(coords, f.n))
    out = np.arange(f.size, dtype=np.int64)
    if not coords:
        return out
    digits = digits_matrix(f.n, f.q)
    img = f.image_digits
    for i in coords:
        out += (img[:, i - 1] - digits[:, i - 1]) * f.q ** (i - 1)
    return out


def update_single_table(f: AutomataNetwork, i: int) -> np.ndarray:
    return update_set_table(f, [i])


def update_single(f: AutomataNetwork, i: int, x):
    """``f^i(x)``: replace digit ``i`` of ``x`` by ``f_i(x)``."""
    (i,) = check_coordinates([i], f.n)
    idx, as_digits = _as_index(f, x)
    q, p = f.q, f.q ** (i - 1)
    old = (idx // p) % q
    new = (int(f.table[idx]) // p) % q
    return _like(f, idx + (new - old) * p, as_digits)


def update_set(f: AutomataNetwork, coords: Iterable[int], x):
    """``f^I(x)``: synchronous update of the coordinates in ``I``."""
    coords = set(check_coordinates(coords, f.n))
    idx, as_digits = _as_index(f, x)
    img = int(f.table[idx])
    out = idx
    for i in coords:
        p = f.q ** (i - 1)
        out += ((img // p) % f.q - (idx // p) % f.q) * p
    return _like(f, out, as_digits)


def update_word(f: AutomataNetwork, word: Sequence[int], x):
    """``f^w(x)``: sequential updates following ``word`` left to right."""
    word = check_coordinates(word, f.n)
    idx, as_digits = _as_index(f, x)
    for i in word:
        idx = update_single(f, i, idx)
    return _like(f, idx, as_digits)


def update_word_table(f: AutomataNetwork, word: Sequence[int]) -> np.ndarray:
    """Table of ``f^w`` over all configurations."""
    word = check_coordinates(word, f.n)
    out = np.arange(f.size, dtype=np.int64)
    singles = {}
    for i in word:
        if i not in singles:
            singles[i] = update_single_table(f, i)
        out = singles[i][out]
    return out


@dataclass(frozen=True)
class InteractionGraph:
    """Directed influence graph on ``[n]``; edges are 1-based pairs ``(i, j)``."""

    n: int
    edges: frozenset

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def in_neighbors(self, j: int) -> set[int]:
        return {i for (i, jj) in self.edges if jj == j}

    def undirected_edges(self) -> set[tuple[int, int]]:
        """Edges of the undirected version, self-loops dropped, as ``(min, max)`` pairs."""
        return {(min(i, j), max(i, j)) for (i, j) in self.edges if i != j}

    def neighbors(self) -> dict[int, set[int]]:
        """Undirected adjacency without self-loops."""
        adj = {v: set() for v in range(1, self.n + 1)}
        for i, j in self.undirected_edges():
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def to_dot(self, name: str = "IG") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f"  {v};" for v in range(1, self.n + 1)]
        lines += [f"  {i} -> {j};" for i, j in sorted(self.edges)]
        lines.append("}")
        return "\n".join(lines) + "\n"


def interaction_graph(h: AutomataNetwork) -> InteractionGraph:
    """Exhaustive influence check: ``(i, j)`` is an edge iff changing digit ``i``
    alone can change ``h_j``."""
    n, q = h.n, h.q
    digits = digits_matrix(n, q)
    img = h.image_digits
    idx = np.arange(h.size, dtype=np.int64)
    edges = set()
    for i in range(n):
        p = q**i
        base = idx - digits[:, i] * p
        changed = np.zeros(n, dtype=bool)
        for a in range(q):
            other = img[base + a * p]
            changed |= (other != img).any(axis=0)
        edges.update((i + 1, int(j) + 1) for j in np.flatnonzero(changed))
    return InteractionGraph(n, frozenset(edges))


def trivial_coordinates(h: AutomataNetwork) -> set[int]:
    """Coordinates ``i`` with ``h_i(x) = x_i`` for every ``x``."""
    same = (h.image_digits == digits_matrix(h.n, h.q)).all(axis=0)
    return {int(i) + 1 for i in np.flatnonzero(same)}


def omega(h: AutomataNetwork) -> int:
    """Number of non-trivial coordinate functions."""
    return h.n - len(trivial_coordinates(h))


def all_networks(n: int, q: int):
    """Iterate over every network of ``F(n, q)`` in lexicographic table order."""
    size = _check_size(n, q)
    if size**size > 2**20:
        raise ResourceError(f"F({n},{q}) has {size}^{size} members; refusing to enumerate")
    for t in range(size**size):
        table = []
        for _ in range(size):
            t, r = divmod(t, size)
            table.append(r)
        yield AutomataNetwork(n, q, table)
