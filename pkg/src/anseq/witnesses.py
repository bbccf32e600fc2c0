"""Extremal instances: swap networks, the six-automaton example, subset encodings.

Subset encodings map each ``k``-subset ``E`` of a ``2k``-block to a configuration
``b(E)`` such that the sets ``b(E)[E]`` (configurations agreeing with ``b(E)``
outside ``E``) are pairwise disjoint. Two encodings are provided:

* ``km2`` packs ``E`` into ``3k`` coordinates with binary symbols, for any ``q >= 2``.
  Subsets are 1-based, ``E`` a subset of ``{1, ..., 2k}``.
* ``kms`` packs ``E`` into ``2k + ceil(log_q 2k)`` coordinates with symbols
  ``{0,1,2,3}``, for ``q >= 4``. Subsets are 0-based, ``E`` a subset of ``{0, ..., 2k-1}``,
  and all index arithmetic on the block is mod ``2k``.

In both, the block occupies digit positions ``0 .. 2k-1`` of the configuration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .coloring import ceil_log
from .confusion import build_confusion_graph
from .core import AutomataNetwork, check_schedule, digits_matrix, encode
from .errors import DecodeError, InputError, VerificationError


def gen_swap_network(n: int, q: int) -> AutomataNetwork:
    """Swap coordinate ``i`` with ``i + floor(n/2)``; the last coordinate is fixed for odd ``n``."""
    if n < 2:
        raise InputError(f"swap network needs n >= 2, got {n}")
    k = n // 2

    def fn(x):
        y = list(x)
        for i in range(k):
            y[i], y[i + k] = x[i + k], x[i]
        return y

    return AutomataNetwork.from_function(n, q, fn)


@dataclass(frozen=True)
class Example1:
    h: AutomataNetwork
    f: AutomataNetwork
    w: tuple
    g: AutomataNetwork
    v: tuple


def gen_example1(q: int = 2) -> Example1:
    """Three pair swaps ``h`` on six automata with two sequentializations.

    ``(f, w)`` uses three copy registers and respects ``(1, ..., 6)``; ``(g, v)``
    uses one register holding a sum mod ``q``.
    """
    h = AutomataNetwork.from_function(6, q, lambda x: (x[3], x[4], x[5], x[0], x[1], x[2]))
    f = AutomataNetwork.from_function(9, q, lambda z: z[3:6] + z[6:9] + z[0:3])

    def g_fn(y):
        y1, y2, y3, y4, y5, y6, y7 = y
        return (y4, y5, y6, y7 - y2 - y3, y7 - y4 - y3, y7 - y4 - y5, y1 + y2 + y3)

    g = AutomataNetwork.from_function(7, q, lambda y: [v % q for v in g_fn(y)])
    return Example1(h, f, (7, 8, 9, 1, 2, 3, 4, 5, 6), g, (7, 1, 4, 2, 5, 3, 6))


# km2: 3k coordinates, binary symbols


def _check_subset(E: Iterable[int], k: int, lo: int) -> frozenset:
    E = frozenset(int(e) for e in E)
    if len(E) != k:
        raise InputError(f"subset {sorted(E)} must have exactly k = {k} elements")
    if any(not lo <= e < lo + 2 * k for e in E):
        raise InputError(f"subset {sorted(E)} must lie in [{lo}, {lo + 2 * k - 1}]")
    return E


def encode_km2(k: int, E: Iterable[int], q: int = 2, n: int | None = None) -> tuple[int, ...]:
    """``b(E)`` for a 1-based ``k``-subset of ``{1..2k}``; free coordinates (in ``E``) are 0.

    Coordinates ``e`` outside ``E`` hold 0 iff ``e+1`` is in ``E``; coordinate
    ``2k+1`` holds 0 iff ``1`` is in ``E``; coordinate ``2k+l+1`` holds 0 iff the
    successor of the ``l``-th smallest element of ``E`` is in ``E``.
    Coordinates past ``3k`` (when ``n > 3k``) are inert zeros.
    """
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    n = 3 * k if n is None else n
    if n < 3 * k:
        raise InputError(f"km2 needs n >= 3k = {3 * k}, got {n}")
    E = _check_subset(E, k, 1)
    x = [0] * n
    for e in range(1, 2 * k + 1):
        if e not in E:
            x[e - 1] = 0 if e + 1 in E else 1
    x[2 * k] = 0 if 1 in E else 1
    elems = sorted(E)
    for ell in range(1, k):
        x[2 * k + ell] = 0 if elems[ell - 1] + 1 in E else 1
    return tuple(x)


def decode_km2(k: int, x: Sequence[int], q: int = 2) -> frozenset:
    """Recover ``E`` by scanning ``e = 1 .. 2k`` and classifying ``e + 1``.

    Raises :class:`DecodeError` when ``x`` lies outside every coded set.
    """
    x = tuple(int(d) for d in x)
    if len(x) < 3 * k:
        raise DecodeError(f"configuration shorter than 3k = {3 * k}")
    inside, outside = ({1}, set()) if x[2 * k] == 0 else (set(), {1})
    for e in range(1, 2 * k):
        if e in outside:
            bit = x[e - 1]
        elif len(inside) == k:
            bit = 1
        else:
            bit = x[2 * k + len(inside)]
        (inside if bit == 0 else outside).add(e + 1)
    if len(inside) != k:
        raise DecodeError(f"scan found {len(inside)} elements instead of {k}")
    E = frozenset(inside)
    ref = encode_km2(k, E, q, len(x))
    if any(ref[i] != x[i] for i in range(len(x)) if i + 1 not in E):
        raise DecodeError("configuration does not match the encoding of its decoded subset")
    return E


# kms: 2k + ceil(log_q 2k) coordinates, symbols 0..3, 0-based indices mod 2k


def kms_length(k: int, q: int) -> int:
    return 2 * k + ceil_log(2 * k, q)


def kms_prefix_balance(k: int, E: Iterable[int]) -> list[int]:
    """``|[0,i] & E| - |[0,i] - E|`` for ``i = 0 .. 2k-1``."""
    E = _check_subset(E, k, 0)
    out, acc = [], 0
    for i in range(2 * k):
        acc += 1 if i in E else -1
        out.append(acc)
    return out


def kms_anchor(k: int, E: Iterable[int]) -> tuple[int, int]:
    """``(m(E), M(E))``: the first prefix end reaching the maximum balance, and that maximum."""
    bal = kms_prefix_balance(k, E)
    top = max(bal)
    return bal.index(top), top


@dataclass(frozen=True)
class KmsSplit:
    anchor: int
    maximum: int
    E0: frozenset
    E1: tuple
    Ebar0: frozenset
    Ebar1: tuple


def kms_split(k: int, E: Iterable[int]) -> KmsSplit:
    """Split ``E`` and its complement by predecessor/successor membership.

    ``E1`` and ``Ebar1`` are listed in cyclic order starting just after the anchor.
    """
    E = _check_subset(E, k, 0)
    L = 2 * k
    m, top = kms_anchor(k, E)
    comp = [e for e in range(L) if e not in E]
    E0 = frozenset(e for e in E if (e - 1) % L not in E)
    Eb0 = frozenset(e for e in comp if (e + 1) % L in E)

    def cyc(e):
        return (e - m - 1) % L

    E1 = tuple(sorted((e for e in E if e not in E0), key=cyc))
    Eb1 = tuple(sorted((e for e in comp if e not in Eb0), key=cyc))
    return KmsSplit(m, top, E0, E1, Eb0, Eb1)


def encode_kms(k: int, q: int, E: Iterable[int]) -> tuple[int, ...]:
    """``b(E)`` for a 0-based ``k``-subset of ``{0..2k-1}``; free coordinates are 0.

    The tail holds the anchor ``m(E)`` as a little-endian base-``q`` numeral.
    """
    if q < 4:
        raise InputError(f"kms encoding needs q >= 4, got {q}")
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    E = _check_subset(E, k, 0)
    L = 2 * k
    sp = kms_split(k, E)
    x = [0] * kms_length(k, q)
    for e in sp.Ebar0:
        x[e] = 0 if (e + 2) % L in E else 1
    for ej, ebj in zip(sp.E1, sp.Ebar1):
        x[ebj] = 2 if (ej + 1) % L in E else 3
    m = sp.anchor
    for i in range(L, len(x)):
        m, x[i] = divmod(m, q)
    return tuple(x)


@dataclass
class KmsScanState:
    """Decoder bookkeeping: four partial sets, the cursor, and the mode in {0, 1, 2}."""

    I0: list = field(default_factory=list)
    I1: list = field(default_factory=list)
    Ibar0: list = field(default_factory=list)
    Ibar1: list = field(default_factory=list)
    cursor: int = 0
    mode: int = 0

    def snapshot(self) -> tuple:
        return (
            frozenset(self.I0),
            frozenset(self.I1),
            frozenset(self.Ibar0),
            frozenset(self.Ibar1),
            self.cursor,
            self.mode,
        )


def kms_trace(k: int, q: int, x: Sequence[int]) -> list[tuple]:
    """Run the three-mode decoder and return every state, starting with the initial one."""
    if q < 4:
        raise InputError(f"kms encoding needs q >= 4, got {q}")
    x = tuple(int(d) for d in x)
    L = 2 * k
    if len(x) != kms_length(k, q):
        raise DecodeError(f"configuration must have {kms_length(k, q)} digits")
    m = sum(d * q**i for i, d in enumerate(x[L:]))
    if m >= L:
        raise DecodeError(f"tail encodes anchor {m}, outside [0, {L})")
    st = KmsScanState(cursor=(m + 1) % L, mode=0)
    trace = [st.snapshot()]
    for _ in range(L):
        e = st.cursor
        if st.mode == 0:
            if x[e] in (0, 1):
                st.Ibar0.append(e)
                st.mode = 1
            elif x[e] in (2, 3):
                st.Ibar1.append(e)
            else:
                raise DecodeError(f"symbol {x[e]} at {e} is not a complement marker")
        elif st.mode == 1:
            s = x[(e - 1) % L]
            if s not in (0, 1):
                raise DecodeError(f"symbol {s} at {(e - 1) % L} is not a 0/1 marker")
            st.I0.append(e)
            st.mode = 2 if s == 0 else 0
        else:
            j = len(st.I1)
            if j >= len(st.Ibar1):
                raise DecodeError("no complement marker left to pair with")
            s = x[st.Ibar1[j]]
            if s not in (2, 3):
                raise DecodeError(f"symbol {s} at {st.Ibar1[j]} is not a 2/3 marker")
            st.I1.append(e)
            st.mode = 2 if s == 2 else 0
        st.cursor = (e + 1) % L
        trace.append(st.snapshot())
    return trace


def decode_kms(k: int, q: int, x: Sequence[int]) -> frozenset:
    """Recover ``E`` from any configuration of ``b(E)[E]``; :class:`DecodeError` otherwise."""
    final = kms_trace(k, q, x)[-1]
    E = final[0] | final[1]
    if len(E) != k:
        raise DecodeError(f"scan found {len(E)} elements instead of {k}")
    ref = encode_kms(k, q, E)
    if any(ref[i] != int(x[i]) for i in range(len(ref)) if i not in E):
        raise DecodeError("configuration does not match the encoding of its decoded subset")
    return E


@dataclass(frozen=True)
class SubsetEncoding:
    """A family encoding ``k``-subsets of a ``2k``-block into ``[0,q)^n``."""

    family: str
    k: int
    q: int
    n: int

    @classmethod
    def km2(cls, k: int, q: int = 2, n: int | None = None) -> "SubsetEncoding":
        n = 3 * k if n is None else n
        if n < 3 * k:
            raise InputError(f"km2 needs n >= 3k = {3 * k}, got {n}")
        return cls("km2", k, q, n)

    @classmethod
    def kms(cls, k: int, q: int) -> "SubsetEncoding":
        if q < 4:
            raise InputError(f"kms encoding needs q >= 4, got {q}")
        return cls("kms", k, q, kms_length(k, q))

    @property
    def offset(self) -> int:
        """Label of digit position 0 in this family's subset convention."""
        return 1 if self.family == "km2" else 0

    def subsets(self) -> list[frozenset]:
        labels = range(self.offset, self.offset + 2 * self.k)
        return [frozenset(c) for c in itertools.combinations(labels, self.k)]

    def positions(self, E: Iterable[int]) -> list[int]:
        """0-based digit positions of a subset's elements, ascending."""
        return sorted(int(e) - self.offset for e in E)

    def label(self, positions: Iterable[int]) -> frozenset:
        return frozenset(int(p) + self.offset for p in positions)

    def encode(self, E: Iterable[int]) -> tuple[int, ...]:
        if self.family == "km2":
            return encode_km2(self.k, E, self.q, self.n)
        return encode_kms(self.k, self.q, E)

    def decode(self, x: Sequence[int]) -> frozenset:
        if self.family == "km2":
            return decode_km2(self.k, x, self.q)
        return decode_kms(self.k, self.q, x)

    def code_set(self, E: Iterable[int]) -> list[int]:
        """Indices of all configurations agreeing with ``b(E)`` outside ``E``."""
        base = list(self.encode(E))
        pos = self.positions(E)
        out = []
        for fill in itertools.product(range(self.q), repeat=len(pos)):
            for p, d in zip(pos, fill):
                base[p] = d
            out.append(encode(base, self.q))
        return sorted(out)


def build_h_from_encoding(enc: SubsetEncoding) -> AutomataNetwork:
    """Network exchanging the ``E``-block with its complement on coded configurations.

    On ``x`` in ``b(E)[E]`` the digits at ``E`` and at the rest of the ``2k``-block
    swap (in ascending order) and all later coordinates become 0. Every other
    configuration maps to ``(0)^n``.
    """
    n, q, k = enc.n, enc.q, enc.k
    digits = digits_matrix(n, q)
    out = np.zeros((q**n, n), dtype=np.int64)
    seen = np.zeros(q**n, dtype=bool)
    for E in enc.subsets():
        P = enc.positions(E)
        Q = [p for p in range(2 * k) if p not in P]
        idx = np.array(enc.code_set(E), dtype=np.int64)
        if seen[idx].any():
            raise VerificationError(f"coded set of {sorted(E)} overlaps another")
        seen[idx] = True
        out[np.ix_(idx, P)] = digits[np.ix_(idx, Q)]
        out[np.ix_(idx, Q)] = digits[np.ix_(idx, P)]
    return AutomataNetwork.from_image_digits(n, q, out)


def clique_witness(
    h: AutomataNetwork, u: Sequence[int], enc: SubsetEncoding | None = None
) -> list[int]:
    """Clique of size ``q**k`` in ``G_{h,u}`` built from the first ``k`` block coordinates ``u`` updates.

    With an encoding, the clique is ``b(E)[E]``. Without one, ``h`` is taken to be a
    swap network, ``k = floor(n/2)``, and the clique is ``(0)^n[E]``.
    """
    u = check_schedule(u, h.n)
    k = enc.k if enc is not None else h.n // 2
    first = [c - 1 for c in u if c <= 2 * k][:k]
    if enc is not None:
        E = enc.label(first)
        clique = enc.code_set(E)
    else:
        clique = []
        for fill in itertools.product(range(h.q), repeat=k):
            x = [0] * h.n
            for p, d in zip(sorted(first), fill):
                x[p] = d
            clique.append(encode(x, h.q))
        clique.sort()
    graph = build_confusion_graph(h, u)
    if len(clique) != h.q**k or not graph.is_clique(clique):
        raise VerificationError("expected clique is missing from the confusion graph")
    return clique
