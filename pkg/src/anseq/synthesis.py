"""Sequentializations: building them from colorings, reading colorings back, checking them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .coloring import Coloring, ceil_log
from .confusion import build_confusion_graph
from .core import (
    AutomataNetwork,
    check_schedule,
    digits_matrix,
    update_set_table,
    update_word_table,
)
from .errors import InputError, VerificationError


def respects(w: Sequence[int], u: Sequence[int]) -> bool:
    """True iff ``w`` (an order on ``[m]``) updates ``[n]`` in the same relative order as ``u``."""
    n = len(u)
    if len(w) < n:
        return False
    return tuple(c for c in w if c <= n) == tuple(u)


def verify_sequentialization(h: AutomataNetwork, f: AutomataNetwork, w: Sequence[int]) -> bool:
    """Exhaustive check of ``pr_[n] o f^w = h o pr_[n]`` over all ``q**m`` inputs."""
    if f.q != h.q:
        raise InputError(f"alphabet mismatch: h has q={h.q}, f has q={f.q}")
    if f.n < h.n:
        raise InputError(f"f has {f.n} automata, fewer than h's {h.n}")
    w = check_schedule(w, f.n)
    composite = update_word_table(f, w)
    low = h.size
    z = np.arange(f.size, dtype=np.int64)
    return bool(np.array_equal(composite % low, h.table[z % low]))


@dataclass(frozen=True)
class SequentializationCertificate:
    """``(f, w)`` sequentializing ``base`` with ``k`` extra automata; checked on construction."""

    base: AutomataNetwork
    f: AutomataNetwork
    w: tuple
    k: int

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(c) for c in self.w))
        if self.f.n != self.base.n + self.k:
            raise InputError(f"f has {self.f.n} automata, expected n + k = {self.base.n + self.k}")
        if not verify_sequentialization(self.base, self.f, self.w):
            raise VerificationError("(f, w) does not sequentialize h")

    @property
    def m(self) -> int:
        return self.f.n

    def to_dict(self) -> dict:
        return {"h": self.base.to_dict(), "f": self.f.to_dict(), "w": list(self.w), "k": self.k}

    @classmethod
    def from_dict(cls, data: dict) -> "SequentializationCertificate":
        try:
            h = AutomataNetwork.from_dict(data["h"])
            f = AutomataNetwork.from_dict(data["f"])
            return cls(h, f, tuple(data["w"]), int(data["k"]))
        except KeyError as exc:
            raise InputError(f"certificate JSON is missing {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SequentializationCertificate":
        return cls.from_dict(json.loads(text))


def _color_digits(colors: np.ndarray, k: int, q: int) -> np.ndarray:
    out = np.empty((len(colors), k), dtype=np.int64)
    for j in range(k):
        out[:, j] = (colors // q**j) % q
    return out


def synthesize_from_coloring(
    h: AutomataNetwork, u: Sequence[int], c: Coloring
) -> SequentializationCertificate:
    """Build ``f`` on ``n + k`` automata, ``k = ceil(log_q C)``, from a proper coloring of ``G_{h,u}``.

    The extra automata are updated first and store the color of the input. Each
    original automaton ``u_i`` then recovers ``h_{u_i}`` from its current
    configuration and the stored color: any preimage ``x'`` with matching partial
    update ``h^{u_1..u_{i-1}}(x')`` and color gives the same value. Configurations
    with no such preimage keep their value.
    """
    n, q = h.n, h.q
    u = check_schedule(u, n)
    if len(c.colors) != h.size:
        raise InputError(f"coloring has {len(c.colors)} entries, expected {h.size}")
    graph = build_confusion_graph(h, u)
    if not c.is_proper(graph):
        raise InputError("coloring is not proper for the confusion graph")
    k = ceil_log(max(c.count, 1), q)
    m = n + k
    low = h.size
    colors = np.asarray(c.colors, dtype=np.int64)
    z = np.arange(q**m, dtype=np.int64)
    x_part = z % low
    image = h.image_digits
    out = np.empty((q**m, m), dtype=np.int64)
    out[:, :n] = digits_matrix(m, q)[:, :n]
    if k:
        out[:, n:] = _color_digits(colors, k, q)[x_part]

    xs = np.arange(low, dtype=np.int64)
    for i, coord in enumerate(u):
        target = image[:, coord - 1]
        if i == 0:
            out[:, coord - 1] = target[x_part]
            continue
        partial = update_set_table(h, u[:i])
        keys = partial + low * colors
        order = np.lexsort((target, keys))
        ks, vs = keys[order], target[order]
        same_key = ks[1:] == ks[:-1]
        if np.any(same_key & (vs[1:] != vs[:-1])):
            raise InputError(
                f"coloring merges configurations that disagree on h_{coord}; it is not proper"
            )
        value = np.full(q**m, -1, dtype=np.int64)
        value[keys[xs]] = target[xs]
        found = value >= 0
        out[found, coord - 1] = value[found]

    f = AutomataNetwork.from_image_digits(m, q, out)
    w = tuple(range(n + 1, m + 1)) + u
    try:
        return SequentializationCertificate(h, f, w, k)
    except VerificationError as exc:
        raise VerificationError(f"synthesized network failed verification: {exc}") from exc


def coloring_from_sequentialization(
    h: AutomataNetwork, u: Sequence[int], cert: SequentializationCertificate
) -> Coloring:
    """Color ``x`` by the final digits of the extra automata when run on ``x (0)^k``."""
    u = check_schedule(u, h.n)
    if cert.base != h:
        raise InputError("certificate is for a different network")
    if not respects(cert.w, u):
        raise InputError(f"order {list(cert.w)} does not respect {list(u)}")
    final = update_word_table(cert.f, cert.w)
    # x (0)^k has the same index as x
    return Coloring.compact((final[: h.size] // h.size).tolist())
