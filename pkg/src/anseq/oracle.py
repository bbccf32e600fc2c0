"""Brute-force engines: word lengths in the monoid generated by single-coordinate updates, and t(n, q).

Transformations of ``A^n`` (``N = q**n`` states) are tables ``T`` with ``T[x]``
the image of configuration ``x``. A word ``w`` acts as ``f^w = f^{w_t} o ... o f^{w_1}``,
so extending a word by ``i`` maps ``T`` to ``f^i o T``.

The ``t_search`` checkpoint is a little-endian binary file::

    offset  size  field
    0       8     magic b"ANSEQTS\\0"
    8       4     format version (1)
    12      4     n
    16      4     q
    20      4     flags (bit 0: symmetry pruning)
    24      8     cursor: next network index to sweep
    32      8     total number of networks, N**N
    40      N**N  best[T] as uint8, 255 meaning not reached yet

Networks and transformations share the index ``sum_x T[x] * N**x``.
"""

from __future__ import annotations

import itertools
import logging
import os
import struct
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core import AutomataNetwork, _check_size
from .errors import InputError, ResourceError

log = logging.getLogger(__name__)

MAX_STATES = 2**10
MAX_MONOID = 2**22
MAX_SWEEP_STATES = 8
UNREACHED = 255
MAGIC = b"ANSEQTS\0"
VERSION = 1
HEADER = struct.Struct("<8sIIIIQQ")
PROGRESS_EVERY = 10**5


class _Undefined:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __bool__(self) -> bool:
        return False


UNDEFINED = _Undefined()


def single_update_tables(f: AutomataNetwork) -> list[np.ndarray]:
    """``f^i`` as a table over ``A^n`` for ``i = 1..n``."""
    out = []
    x = np.arange(f.size, dtype=np.int64)
    img = f.image_digits
    for i in range(f.n):
        p = f.q**i
        out.append(x + (img[:, i] - (x // p) % f.q) * p)
    return out


def per_function_min_words(f: AutomataNetwork) -> dict[tuple, int]:
    """Minimal ``|w|`` with ``f^w = T`` for every ``T`` reachable from the identity."""
    if f.size > MAX_STATES:
        raise ResourceError(f"monoid search needs q^n <= {MAX_STATES}, got {f.q}^{f.n}")
    gens = [tuple(int(v) for v in g) for g in single_update_tables(f)]
    start = tuple(range(f.size))
    dist = {start: 0}
    frontier = [start]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for t in frontier:
            for g in gens:
                t2 = tuple(g[v] for v in t)
                if t2 not in dist:
                    dist[t2] = d
                    nxt.append(t2)
        if len(dist) > MAX_MONOID:
            raise ResourceError(f"monoid exceeds {MAX_MONOID} transformations")
        frontier = nxt
    return dist


def shortest_word(f: AutomataNetwork, h: AutomataNetwork) -> tuple[int, ...] | None:
    """A shortest word ``w`` over ``[n]`` (1-based) with ``f^w = h``, or ``None``."""
    if (f.n, f.q) != (h.n, h.q):
        raise InputError("f and h must share n and q")
    if f.size > MAX_STATES:
        raise ResourceError(f"monoid search needs q^n <= {MAX_STATES}, got {f.q}^{f.n}")
    gens = [tuple(int(v) for v in g) for g in single_update_tables(f)]
    start = tuple(range(f.size))
    target = tuple(int(v) for v in h.table)
    parent = {start: None}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        if t == target:
            word = []
            while parent[t] is not None:
                t, i = parent[t]
                word.append(i)
            return tuple(reversed(word))
        for i, g in enumerate(gens, start=1):
            t2 = tuple(g[v] for v in t)
            if t2 not in parent:
                parent[t2] = (t, i)
                queue.append(t2)
    return None


# -- vectorized engine for the t(n, q) sweep ---------------------------------------


def _symmetry_group(n: int, q: int) -> list[np.ndarray]:
    """State permutations induced by permuting coordinates and symbols within each coordinate.

    Conjugating ``f`` by such a permutation ``phi`` maps every ``f^i`` to
    ``g^{pi(i)}`` with ``g = phi o f o phi^-1``, so word lengths are preserved.
    """
    digits = np.array(list(itertools.product(range(q), repeat=n)))[:, ::-1]
    powers = q ** np.arange(n)
    perms = []
    for pi in itertools.permutations(range(n)):
        for sigmas in itertools.product(itertools.permutations(range(q)), repeat=n):
            new = np.empty_like(digits)
            for i in range(n):
                new[:, pi[i]] = np.asarray(sigmas[i])[digits[:, i]]
            perms.append(new @ powers)
    # identity first
    ident = np.arange(q**n)
    perms.sort(key=lambda p: not np.array_equal(p, ident))
    return perms


class _Engine:
    """Per-network BFS on transformation indices, with a shared visited-stamp array."""

    def __init__(self, n: int, q: int):
        _check_size(n, q)
        self.n, self.q = n, q
        self.N = q**n
        if self.N > MAX_SWEEP_STATES:
            raise ResourceError(f"t search supports q^n <= {MAX_SWEEP_STATES}, got {q}^{n}")
        self.total = self.N**self.N
        self.powers = self.N ** np.arange(self.N, dtype=np.int64)
        self.stamp = np.zeros(self.total, dtype=np.uint32)
        self.stamp_id = 0
        self.identity = np.arange(self.N, dtype=np.int64)
        x = self.identity
        self.x_digit = [(x // q**i) % q for i in range(n)]

    def table(self, index: int) -> np.ndarray:
        return (index // self.powers) % self.N

    def tables(self, indices: np.ndarray) -> np.ndarray:
        return (indices[:, None] // self.powers[None, :]) % self.N

    def encode(self, tables: np.ndarray) -> np.ndarray:
        return tables @ self.powers

    def generators(self, f_table: np.ndarray) -> list[np.ndarray]:
        q, x = self.q, self.identity
        out = []
        for i in range(self.n):
            p = q**i
            out.append(x + (((f_table // p) % q) - self.x_digit[i]) * p)
        return out

    def bfs(self, f_table: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Reachable transformation indices and their minimal word lengths."""
        self.stamp_id += 1
        if self.stamp_id == 2**32 - 1:
            self.stamp[:] = 0
            self.stamp_id = 1
        sid = self.stamp_id
        gens = self.generators(f_table)
        frontier = self.identity[None, :]
        start = int(self.encode(frontier)[0])
        self.stamp[start] = sid
        found = [np.array([start], dtype=np.int64)]
        depths = [np.zeros(1, dtype=np.uint8)]
        d = 0
        while len(frontier):
            d += 1
            cand = np.concatenate([g[frontier] for g in gens])
            idx = self.encode(cand)
            fresh = self.stamp[idx] != sid
            idx, cand = idx[fresh], cand[fresh]
            idx, first = np.unique(idx, return_index=True)
            cand = cand[first]
            self.stamp[idx] = sid
            found.append(idx)
            depths.append(np.full(len(idx), d, dtype=np.uint8))
            frontier = cand
        return np.concatenate(found), np.concatenate(depths)

    def conjugation_maps(self, group: list[np.ndarray]) -> list[tuple[np.ndarray, np.ndarray]]:
        return [(phi, np.argsort(phi)) for phi in group]

    def conjugate_indices(self, indices: np.ndarray, phi: np.ndarray, phinv: np.ndarray) -> np.ndarray:
        """Indices of ``phi o T o phi^-1`` for the transformations ``T`` at ``indices``."""
        t = self.tables(indices)
        return self.encode(phi[t[:, phinv]])


@dataclass
class TSearchResult:
    """Outcome of a ``t(n, q)`` sweep."""

    n: int
    q: int
    value: object
    best: np.ndarray = field(repr=False)
    witness: tuple | None = None
    swept: int = 0
    representatives: int = 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "complete": self.value is not None,
            "t": int(self.value) if self.value not in (None, UNDEFINED) else None,
            "defined": self.value is not UNDEFINED if self.value is not None else None,
            "witness": list(self.witness) if self.witness is not None else None,
            "swept": self.swept,
            "representatives": self.representatives,
        }


def _write_checkpoint(path: str, n: int, q: int, flags: int, cursor: int, best: np.ndarray) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, VERSION, n, q, flags, cursor, len(best)))
        fh.write(best.tobytes())
    os.replace(tmp, path)


def _read_checkpoint(path: str, n: int, q: int, flags: int, total: int) -> tuple[int, np.ndarray]:
    with open(path, "rb") as fh:
        raw = fh.read(HEADER.size)
        if len(raw) != HEADER.size:
            raise InputError(f"{path}: truncated checkpoint header")
        magic, version, cn, cq, cflags, cursor, ctotal = HEADER.unpack(raw)
        if magic != MAGIC or version != VERSION:
            raise InputError(f"{path}: not a version {VERSION} t-search checkpoint")
        if (cn, cq, cflags, ctotal) != (n, q, flags, total):
            raise InputError(
                f"{path}: checkpoint is for n={cn}, q={cq}, flags={cflags}; requested n={n}, q={q}, flags={flags}"
            )
        best = np.frombuffer(fh.read(), dtype=np.uint8).copy()
    if len(best) != total or cursor > total:
        raise InputError(f"{path}: corrupted checkpoint body")
    return cursor, best


def _symmetrize(engine: _Engine, best: np.ndarray, group: list[np.ndarray], chunk: int = 2**20) -> np.ndarray:
    """``min over phi`` of ``best[phi^-1 o T o phi]``; ``best`` must come from orbit representatives."""
    out = best.copy()
    maps = engine.conjugation_maps(group)
    for lo in range(0, len(best), chunk):
        idx = np.arange(lo, min(lo + chunk, len(best)), dtype=np.int64)
        for phi, phinv in maps[1:]:
            # T -> phi o T o phi^-1 is a bijection, so pulling back works in either direction
            np.minimum(out[idx], best[engine.conjugate_indices(idx, phinv, phi)], out=out[lo : lo + len(idx)])
    return out


def _canonical_mask(engine: _Engine, indices: np.ndarray, maps) -> np.ndarray:
    tables = engine.tables(indices)
    best = indices.copy()
    for phi, phinv in maps[1:]:
        np.minimum(best, engine.encode(phi[tables[:, phinv]]), out=best)
    return best == indices


def t_search(
    n: int,
    q: int,
    symmetry: bool = False,
    checkpoint: str | None = None,
    resume: bool = False,
    checkpoint_every: int = 2**20,
    indices: Iterable[int] | None = None,
    stop_after: int | None = None,
) -> TSearchResult:
    """Sweep every ``f`` in ``F(n, q)`` and return ``max_h min_f`` minimal word length, or ``UNDEFINED``.

    ``indices`` restricts the sweep to the listed networks (no checkpointing).
    With ``symmetry`` only one network per conjugacy orbit is searched and the
    final table is closed under conjugation. ``stop_after`` ends the call after
    that many networks, leaving the checkpoint to resume from.
    """
    engine = _Engine(n, q)
    total = engine.total
    group = _symmetry_group(n, q) if symmetry else [engine.identity]
    maps = engine.conjugation_maps(group)
    flags = int(symmetry)

    if indices is not None:
        todo = np.unique(np.fromiter((int(i) for i in indices), dtype=np.int64))
        if len(todo) and (todo[0] < 0 or todo[-1] >= total):
            raise InputError(f"network indices must lie in [0, {total})")
        return _sweep_subset(engine, todo, maps, symmetry)

    cursor, best = 0, np.full(total, UNREACHED, dtype=np.uint8)
    if resume and checkpoint and os.path.exists(checkpoint):
        cursor, best = _read_checkpoint(checkpoint, n, q, flags, total)
        log.info("resuming t search at network %d of %d", cursor, total)

    reps = 0
    started = time.monotonic()
    chunk = 2**12
    last_log = cursor // PROGRESS_EVERY
    last_ckpt = cursor
    end = total if stop_after is None else min(total, cursor + stop_after)
    while cursor < end:
        hi = min(cursor + chunk, end)
        idx = np.arange(cursor, hi, dtype=np.int64)
        if symmetry:
            idx = idx[_canonical_mask(engine, idx, maps)]
        for f_index in idx:
            found, depth = engine.bfs(engine.table(int(f_index)))
            np.minimum(best[found], depth, out=depth)
            best[found] = depth
        reps += len(idx)
        cursor = hi
        if cursor // PROGRESS_EVERY != last_log:
            last_log = cursor // PROGRESS_EVERY
            log.info(
                "t search n=%d q=%d: %d/%d networks, %d searched, %.0fs",
                n, q, cursor, total, reps, time.monotonic() - started,
            )
        if checkpoint and cursor - last_ckpt >= checkpoint_every:
            _write_checkpoint(checkpoint, n, q, flags, cursor, best)
            last_ckpt = cursor
    if checkpoint:
        _write_checkpoint(checkpoint, n, q, flags, cursor, best)
    if cursor < total:
        return TSearchResult(n, q, None, best, swept=cursor, representatives=reps)
    final = _symmetrize(engine, best, group) if symmetry else best
    return _finish(engine, final, cursor, reps)


def _sweep_subset(engine: _Engine, todo: np.ndarray, maps, symmetry: bool) -> TSearchResult:
    best = np.full(engine.total, UNREACHED, dtype=np.uint8)
    if not symmetry:
        for f_index in todo:
            found, depth = engine.bfs(engine.table(int(f_index)))
            np.minimum(best[found], depth, out=depth)
            best[found] = depth
        return _finish(engine, best, len(todo), len(todo))
    # map each network to its orbit representative and conjugate the representative's distances back
    tables = engine.tables(todo)
    conj = np.stack([engine.encode(phi[tables[:, phinv]]) for phi, phinv in maps])
    which = conj.argmin(axis=0)
    rep_index = conj[which, np.arange(len(todo))]
    # visit networks grouped by representative so only one BFS result is alive at a time
    current, searched = None, 0
    for f_pos in np.argsort(rep_index, kind="stable"):
        r = int(rep_index[f_pos])
        if r != current:
            current, searched = r, searched + 1
            found, depth = engine.bfs(engine.table(r))
        # rep = phi o f o phi^-1, so dist_f(T) = dist_rep(phi o T o phi^-1)
        phi, phinv = maps[which[f_pos]]
        back = engine.conjugate_indices(found, phinv, phi)
        cur = np.minimum(best[back], depth)
        best[back] = cur
    return _finish(engine, best, len(todo), searched)


def _finish(engine: _Engine, best: np.ndarray, swept: int, reps: int) -> TSearchResult:
    missing = np.flatnonzero(best == UNREACHED)
    if len(missing):
        witness = tuple(int(v) for v in engine.table(int(missing[0])))
        return TSearchResult(engine.n, engine.q, UNDEFINED, best, witness, swept, reps)
    return TSearchResult(engine.n, engine.q, int(best.max()), best, None, swept, reps)


def certify_unreachable(h: AutomataNetwork) -> dict:
    """Search every ``f`` in ``F(n, q)`` for a word with ``f^w = h``.

    The report records the closure size of each ``f`` (in index order) and, if
    some ``f`` reaches ``h``, the first such ``f`` with its distance.
    """
    engine = _Engine(h.n, h.q)
    if engine.total > 2**16:
        raise ResourceError(f"certification sweeps at most 2^16 networks, got {engine.total}")
    target = int(engine.encode(h.table[None, :])[0])
    sizes = []
    reached_by = None
    for f_index in range(engine.total):
        found, depth = engine.bfs(engine.table(f_index))
        sizes.append(len(found))
        if reached_by is None:
            hit = np.flatnonzero(found == target)
            if len(hit):
                reached_by = {
                    "f": [int(v) for v in engine.table(f_index)],
                    "distance": int(depth[hit[0]]),
                }
    return {
        "h": [int(v) for v in h.table],
        "networks": engine.total,
        "unreachable": reached_by is None,
        "closure_sizes": sizes,
        "reached_by": reached_by,
    }
