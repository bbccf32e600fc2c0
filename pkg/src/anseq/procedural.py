"""Programs of single-register instructions and the procedural complexity of a network."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .coloring import Coloring, kappa_min
from .confusion import build_confusion_graph
from .core import AutomataNetwork, omega, trivial_coordinates
from .errors import InputError, ResourceError, VerificationError
from .synthesis import SequentializationCertificate

SEARCH_LIMIT = 2**12
MAX_SEARCH_NODES = 2**20
MAX_BRANCHING = 2**16


@dataclass(frozen=True)
class InstructionProgram:
    """``steps[t] = (a, rule)``: set register ``a`` (1-based) to ``rule[z]`` for the current ``z``.

    ``rule`` is a length-``q**m`` array over register configurations.
    """

    m: int
    q: int
    steps: tuple

    def __post_init__(self):
        size = self.q**self.m
        steps = []
        for a, rule in self.steps:
            rule = np.asarray(rule, dtype=np.int64)
            if not 1 <= a <= self.m:
                raise InputError(f"instruction register {a} outside [1, {self.m}]")
            if rule.shape != (size,) or rule.min() < 0 or rule.max() >= self.q:
                raise InputError(f"instruction rule must be {size} symbols in [0, {self.q})")
            rule.setflags(write=False)
            steps.append((int(a), rule))
        object.__setattr__(self, "steps", tuple(steps))

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def registers(self) -> list[int]:
        return [a for a, _ in self.steps]


def _step(z: np.ndarray | int, a: int, rule: np.ndarray, q: int):
    p = q ** (a - 1)
    return z + (rule[z] - (z // p) % q) * p


def run_program(p: InstructionProgram, z: int) -> int:
    """Apply the instructions left to right to register configuration ``z``."""
    z = int(z)
    if not 0 <= z < p.q**p.m:
        raise InputError(f"configuration {z} outside [0, {p.q}^{p.m})")
    for a, rule in p.steps:
        z = int(_step(z, a, rule, p.q))
    return z


def program_table(p: InstructionProgram) -> np.ndarray:
    z = np.arange(p.q**p.m, dtype=np.int64)
    for a, rule in p.steps:
        z = _step(z, a, rule, p.q)
    return z


def computes(p: InstructionProgram, h: AutomataNetwork, zero_extra: bool = False) -> bool:
    """True iff every run on ``(x, y)`` leaves ``h(x)`` in the first ``n`` registers.

    With ``zero_extra`` only ``y = (0)^(m-n)`` is checked.
    """
    if p.q != h.q or p.m < h.n:
        return False
    out = program_table(p)
    if zero_extra:
        # x (0)^(m-n) has index x
        return bool(np.array_equal(out[: h.size] % h.size, h.table))
    return bool(np.array_equal(out % h.size, h.table[np.arange(len(out)) % h.size]))


def ignore_unwritten(p: InstructionProgram, n: int) -> InstructionProgram:
    """Same length, but registers past ``n`` read as 0 until first written.

    Runs from ``x (0)^(m-n)`` are unchanged and other initial extra contents are
    never seen, so a program correct from zeroed extras becomes correct for all.
    """
    q = p.q
    z = np.arange(q**p.m, dtype=np.int64)
    view = z % q**n
    written = set()
    steps = []
    for a, rule in p.steps:
        steps.append((a, rule[view]))
        if a > n and a not in written:
            written.add(a)
            view = view + ((z // q ** (a - 1)) % q) * q ** (a - 1)
    return InstructionProgram(p.m, q, tuple(steps))


def program_from_certificate(cert: SequentializationCertificate) -> InstructionProgram:
    """The instructions ``f^{w_1}, ..., f^{w_m}`` minus those at trivial coordinates of ``h``."""
    h, f = cert.base, cert.f
    trivial = trivial_coordinates(h)
    steps = tuple((c, f.coordinate(c)) for c in cert.w if not (c <= h.n and c in trivial))
    prog = InstructionProgram(f.n, f.q, steps)
    if not computes(prog, h):
        raise VerificationError("program extracted from a certificate does not compute h")
    return prog


def procedural_complexity_star(h: AutomataNetwork) -> int:
    """``Omega(h) + kappa_min(h)``, the unbounded-memory procedural complexity."""
    return omega(h) + kappa_min(h)[0]


class _SliceSearch:
    """Breadth-first search over register contents reached from every ``x (0)^(m-n)``.

    A state lists, for each input ``x``, the current register configuration. An
    instruction on register ``a`` may write any function of the current
    configuration, so from a state with ``d`` distinct configurations it can
    write any of the ``q**d`` assignments to those classes.
    """

    def __init__(self, n: int, q: int, m: int):
        if m < n:
            raise InputError(f"register count m = {m} below n = {n}")
        if q**m > SEARCH_LIMIT:
            raise ResourceError(f"program search needs q^m <= {SEARCH_LIMIT}, got {q}^{m}")
        if m * q ** (q**n) > MAX_BRANCHING:
            raise ResourceError(
                f"program search branches m * q^(q^n) = {m} * {q}^{q**n} ways per step; limit {MAX_BRANCHING}"
            )
        self.n, self.q, self.m = n, q, m
        self.low = q**n
        self.start = tuple(range(self.low))
        self.powers = [q**a for a in range(m)]

    def successors(self, state: tuple):
        q = self.q
        values = sorted(set(state))
        cls = [values.index(s) for s in state]
        for a in range(self.m):
            p = self.powers[a]
            cleared = [s - ((s // p) % q) * p for s in state]
            for assign in itertools.product(range(q), repeat=len(values)):
                nxt = tuple(c + assign[k] * p for c, k in zip(cleared, cls))
                yield nxt, a + 1, dict(zip(values, assign))

    def project(self, state: tuple) -> tuple:
        return tuple(s % self.low for s in state)

    def run(self, t_max: int, target: tuple | None = None):
        """Return ``(depth_by_projection, parents)``; stops early once ``target`` is reached."""
        parents = {self.start: None}
        best = {self.project(self.start): 0}
        if target is not None and target in best:
            return best, parents
        frontier = [self.start]
        for depth in range(1, t_max + 1):
            nxt_frontier = []
            for state in frontier:
                for nxt, a, assign in self.successors(state):
                    if nxt in parents:
                        continue
                    parents[nxt] = (state, a, assign)
                    nxt_frontier.append(nxt)
                    if len(parents) > MAX_SEARCH_NODES:
                        raise ResourceError(
                            f"program search visited more than {MAX_SEARCH_NODES} register states"
                        )
                    proj = self.project(nxt)
                    if proj not in best:
                        best[proj] = depth
                        if proj == target:
                            return best, parents
            frontier = nxt_frontier
            if not frontier:
                break
        return best, parents

    def rebuild(self, parents: dict, state: tuple) -> InstructionProgram:
        steps = []
        while parents[state] is not None:
            prev, a, assign = parents[state]
            p, q = self.powers[a - 1], self.q
            z = np.arange(q**self.m, dtype=np.int64)
            rule = (z // p) % q
            for v, sym in assign.items():
                rule[v] = sym
            steps.append((a, rule))
            state = prev
        return InstructionProgram(self.m, self.q, tuple(reversed(steps)))


def shortest_program(h: AutomataNetwork, m: int, t_max: int) -> InstructionProgram | None:
    """A shortest program on ``m`` registers computing ``h``, if one has length ``<= t_max``."""
    search = _SliceSearch(h.n, h.q, m)
    target = tuple(int(v) for v in h.table)
    best, parents = search.run(t_max, target)
    if target not in best:
        return None
    # parents is filled level by level, so the first match has minimal depth
    state = next(s for s in parents if search.project(s) == target)
    prog = ignore_unwritten(search.rebuild(parents, state), h.n)
    if len(prog) != best[target] or not computes(prog, h):
        raise VerificationError("reconstructed program is not a shortest program for h")
    return prog


def min_program_search(h: AutomataNetwork, m: int, t_max: int) -> int | None:
    """``L(h|m)`` when it is at most ``t_max``, else ``None``."""
    search = _SliceSearch(h.n, h.q, m)
    target = tuple(int(v) for v in h.table)
    best, _ = search.run(t_max, target)
    return best.get(target)


def program_lengths(n: int, q: int, m: int, t_max: int) -> dict[tuple, int]:
    """``L(h|m)`` for every ``h`` in ``F(n, q)`` reachable within ``t_max`` steps, keyed by table."""
    best, _ = _SliceSearch(n, q, m).run(t_max)
    return best


def coloring_from_program(
    h: AutomataNetwork, p: InstructionProgram
) -> tuple[tuple[int, ...], Coloring]:
    """Order of last updates and the coloring by values written at all other steps.

    The order lists coordinates of ``[n]`` by their final update, followed by
    never-updated coordinates in ascending order. The coloring is proper for the
    confusion graph under that order and uses at most ``q**(t - p)`` colors, with
    ``p`` the number of final updates of coordinates in ``[n]``.
    """
    n, q = h.n, h.q
    if not computes(p, h):
        raise InputError("program does not compute h")
    regs = p.registers
    last = {}
    for t, a in enumerate(regs):
        if a <= n:
            last[a] = t
    final_steps = set(last.values())
    order = tuple(sorted(last, key=last.get))
    order += tuple(c for c in range(1, n + 1) if c not in last)
    colored_steps = [t for t in range(len(regs)) if t not in final_steps]

    z = np.arange(h.size, dtype=np.int64)
    written = []
    for t, (a, rule) in enumerate(p.steps):
        if t in final_steps:
            z = _step(z, a, rule, q)
            continue
        written.append(rule[z])
        z = _step(z, a, rule, q)
    if written:
        raw = [tuple(col) for col in np.stack(written, axis=1).tolist()]
    else:
        raw = [()] * h.size
    coloring = Coloring.compact(raw)
    graph = build_confusion_graph(h, order)
    if not coloring.is_proper(graph) or coloring.count > q ** len(colored_steps):
        raise VerificationError("coloring read from the program is not proper")
    return order, coloring
