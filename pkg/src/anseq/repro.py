"""End-to-end reproductions of the acceptance criteria, shared by the CLI and the test suite."""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coloring import factored_confusion_graph, kappa, kappa_details, kappa_min, kappa_upper_bound
from .core import AutomataNetwork, all_networks, omega
from .oracle import UNDEFINED, certify_unreachable, t_search
from .pathwidth import pathwidth_certificate
from .procedural import program_lengths
from .synthesis import (
    SequentializationCertificate,
    coloring_from_sequentialization,
    synthesize_from_coloring,
    verify_sequentialization,
)
from .witnesses import (
    SubsetEncoding,
    build_h_from_encoding,
    clique_witness,
    decode_kms,
    encode_kms,
    gen_example1,
    gen_swap_network,
    kms_anchor,
)

SEED = 20240601


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.key}: {self.title} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return {
            "criterion": self.key,
            "title": self.title,
            "passed": self.passed,
            "details": self.details,
            "seconds": round(self.seconds, 3),
        }


def four_cycle_network() -> AutomataNetwork:
    """``(0,0) -> (0,1) -> (1,1) -> (1,0) -> (0,0)`` on two binary automata."""
    step = {(0, 0): (0, 1), (0, 1): (1, 1), (1, 1): (1, 0), (1, 0): (0, 0)}
    return AutomataNetwork.from_function(2, 2, lambda x: step[tuple(x)])


def random_networks(n: int, q: int, count: int, seed: int = SEED) -> list[AutomataNetwork]:
    rng = np.random.default_rng(seed)
    return [AutomataNetwork.random(n, q, rng) for _ in range(count)]


def example1_kappa() -> tuple[bool, dict]:
    ex = gen_example1()
    k_id = kappa(ex.h, tuple(range(1, 7)))
    cert = SequentializationCertificate(ex.h, ex.g, ex.v, 1)
    # no pruning: every one of the 720 orders gets an exact chromatic number
    k_min, u_min = kappa_min(ex.h, prune=False)
    ok = k_id == 3 and cert.k == 1 and k_min == 1
    return ok, {"kappa_identity": k_id, "kappa_min": k_min, "argmin": list(u_min), "g_v_extra": cert.k}


def example1_certificates() -> tuple[bool, dict]:
    ex = gen_example1()
    a = verify_sequentialization(ex.h, ex.f, ex.w)
    b = verify_sequentialization(ex.h, ex.g, ex.v)
    return a and b, {"f_w": a, "g_v": b, "inputs": [ex.f.size, ex.g.size]}


def swap_family() -> tuple[bool, dict]:
    rows = []
    ok = True
    for n, q in [(2, 2), (4, 2), (2, 3), (6, 2)]:
        h = gen_swap_network(n, q)
        u = tuple(range(1, n + 1))
        k = kappa(h, u)
        clique = clique_witness(h, u)
        good = k == n // 2 and len(clique) == q ** (n // 2)
        ok &= good
        rows.append({"n": n, "q": q, "kappa": k, "clique": len(clique)})
    return ok, {"instances": rows}


def upper_bound(count: int = 200) -> tuple[bool, dict]:
    n, q = 4, 2
    u = tuple(range(1, n + 1))
    bound = kappa_upper_bound(n, q)
    degree_bound = (n // 2 + 1) * q ** (n // 2)
    worst_k = worst_chi = worst_deg = 0
    ok = bound == 4
    for h in random_networks(n, q, count):
        d = kappa_details(h, u)
        _, adj = factored_confusion_graph(h, u)
        max_deg = max((len(a) for a in adj), default=0)
        worst_k = max(worst_k, d["kappa"])
        worst_chi = max(worst_chi, d["chi"])
        worst_deg = max(worst_deg, max_deg)
        ok &= d["kappa"] <= bound and d["chi"] <= max_deg + 1 <= degree_bound
    return ok, {
        "bound": bound,
        "degree_bound": degree_bound,
        "max_kappa": worst_k,
        "max_chi": worst_chi,
        "max_factored_degree": worst_deg,
    }


def synthesis_round_trip(count: int = 200) -> tuple[bool, dict]:
    n, q = 4, 2
    u = tuple(range(1, n + 1))
    ok = True
    ks = []
    for h in random_networks(n, q, count):
        d = kappa_details(h, u)
        cert = synthesize_from_coloring(h, u, d["coloring"])
        back = coloring_from_sequentialization(h, u, cert)
        good = (
            cert.k == d["kappa"]
            and verify_sequentialization(h, cert.f, cert.w)
            and back.is_proper(d["graph"])
        )
        ok &= good
        ks.append(cert.k)
    return ok, {"networks": count, "k_histogram": {k: ks.count(k) for k in sorted(set(ks))}}


def procedural_equality() -> tuple[bool, dict]:
    n, q, t_max = 2, 2, 8
    lengths = {m: program_lengths(n, q, m, t_max) for m in (2, 3, 4)}
    mismatches = []
    for h in all_networks(n, q):
        key = tuple(int(v) for v in h.table)
        found = [lengths[m][key] for m in lengths if key in lengths[m]]
        star = omega(h) + kappa_min(h)[0]
        if not found or min(found) != star:
            mismatches.append({"h": list(key), "L_star": star, "search": min(found) if found else None})
    return not mismatches, {"networks": q ** (n * q**n), "mismatches": mismatches[:5]}


def _encoding_ok(enc: SubsetEncoding) -> bool:
    seen = set()
    for E in enc.subsets():
        code = enc.code_set(E)
        if seen.intersection(code):
            return False
        seen.update(code)
        for idx in code:
            digits = [(idx // enc.q**i) % enc.q for i in range(enc.n)]
            if enc.decode(digits) != E:
                return False
    return True


def encodings() -> tuple[bool, dict]:
    checked = []
    ok = True
    for k, q in itertools.product((1, 2, 3), (2, 3)):
        good = _encoding_ok(SubsetEncoding.km2(k, q))
        ok &= good
        checked.append({"family": "km2", "k": k, "q": q, "ok": good})
    for k, q in itertools.product((1, 2, 3, 4), (4, 5)):
        good = _encoding_ok(SubsetEncoding.kms(k, q))
        ok &= good
        checked.append({"family": "kms", "k": k, "q": q, "ok": good})
    E = {2, 4, 5, 6}
    anchor, _ = kms_anchor(4, E)
    code = encode_kms(4, 4, E)
    fixed = tuple(code[i] for i in range(8) if i not in E)
    tail = tuple(code[8:])
    example = (
        anchor == 6 and fixed == (3, 1, 0, 2) and tail == (2, 1) and decode_kms(4, 4, code) == frozenset(E)
    )
    ok &= example
    return ok, {
        "checked": checked,
        "worked_example": {
            "anchor": anchor,
            "code": list(code),
            "fixed_digits": list(fixed),
            "tail": list(tail),
            "ok": example,
        },
    }


def lower_bound() -> tuple[bool, dict]:
    enc = SubsetEncoding.km2(1, 2)
    h = build_h_from_encoding(enc)
    ks = {u: kappa(h, u) for u in itertools.permutations(range(1, 4))}
    om = omega(h)
    star = om + min(ks.values())
    ok = all(k >= 1 for k in ks.values()) and om == 3 and star >= 4
    return ok, {"kappa_by_order": {",".join(map(str, u)): k for u, k in ks.items()}, "omega": om, "L_star": star}


def pathwidth_bound(count: int = 100) -> tuple[bool, dict]:
    ex = gen_example1()
    ex_pd, ex_cert = pathwidth_certificate(ex.h)
    ex_kmin = kappa_min(ex.h)[0]
    ok = ex_pd.size == 1 and ex_cert.k == 1 and ex_kmin <= ex_pd.size
    widths = []
    for h in random_networks(4, 2, count, seed=SEED + 9):
        pd, cert = pathwidth_certificate(h)
        ok &= cert.k == pd.size and kappa_min(h)[0] <= pd.size
        widths.append(pd.size)
    return ok, {
        "example1": {"pathwidth": ex_pd.size, "extra": ex_cert.k, "kappa_min": ex_kmin},
        "width_histogram": {w: widths.count(w) for w in sorted(set(widths))},
    }


def t22_undefined() -> tuple[bool, dict]:
    report = certify_unreachable(four_cycle_network())
    result = t_search(2, 2)
    unreachable = int(np.count_nonzero(result.best == 255))
    ok = report["unreachable"] and result.value is UNDEFINED
    return ok, {
        "four_cycle_unreachable": report["unreachable"],
        "largest_closure": max(report["closure_sizes"]),
        "t": "undefined" if result.value is UNDEFINED else result.value,
        "unreachable_count": unreachable,
    }


def t32(
    checkpoint: str | None = None, sample_fraction: float = 0.01, seed: int = SEED
) -> tuple[bool, dict]:
    """The long sweep: pruned and unpruned engines on a random sample, then the full pruned run."""
    rng = np.random.default_rng(seed)
    total = 8**8
    sample = rng.choice(total, size=int(total * sample_fraction), replace=False)
    plain = t_search(3, 2, indices=sample)
    pruned = t_search(3, 2, symmetry=True, indices=sample)
    agree = bool(np.array_equal(plain.best, pruned.best))
    details = {"sample": len(sample), "engines_agree": agree}
    if not agree:
        return False, details
    full = t_search(3, 2, symmetry=True, checkpoint=checkpoint, resume=checkpoint is not None)
    details.update(full.to_dict())
    return full.value == 22, details


CRITERIA: dict[str, tuple[str, str, Callable[[], tuple[bool, dict]]]] = {
    "1": ("example1-kappa", "six-automaton example: kappa(h, id) = 3 and kappa_min(h) = 1", example1_kappa),
    "2": ("example1-certificates", "six-automaton example certificates verify exhaustively", example1_certificates),
    "3": ("swap-family", "swap networks: kappa = floor(n/2) with a q^floor(n/2) clique", swap_family),
    "4": ("upper-bound", "random F(4,2): kappa <= 4 and chi within the factored degree bound", upper_bound),
    "5": ("synthesis-round-trip", "random F(4,2): certificates with k = kappa and proper read-back", synthesis_round_trip),
    "6": ("procedural-equality", "all of F(2,2): Omega + kappa_min equals the shortest program", procedural_equality),
    "7": ("encodings", "km2 and kms encodings decode every fill; coded sets disjoint", encodings),
    "8": ("lower-bound", "km2 k=1 network: kappa >= 1 for every order, Omega = 3, L* >= 4", lower_bound),
    "9": ("pathwidth", "kappa_min <= pathwidth with verified mod-q-sum certificates", pathwidth_bound),
    "10": ("t22-undefined", "t(2,2) undefined: the 4-cycle is unreachable", t22_undefined),
    "11": ("t32", "t(3,2) = 22 by the full sweep (extended run)", t32),
}

EXTENDED = {"11"}


def resolve(criterion: str) -> str:
    if criterion in CRITERIA:
        return criterion
    for key, (name, _, _) in CRITERIA.items():
        if criterion == name:
            return key
    raise KeyError(criterion)


def run(criterion: str, **kwargs) -> CriterionResult:
    key = resolve(criterion)
    name, title, fn = CRITERIA[key]
    start = time.perf_counter()
    passed, details = fn(**kwargs)
    return CriterionResult(f"{key} {name}", title, bool(passed), details, time.perf_counter() - start)


def extended_enabled() -> bool:
    return os.environ.get("ANSEQ_EXTENDED", "") not in ("", "0")
