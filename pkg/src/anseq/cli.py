"""Command-line interface: ``anseq <subcommand> ...``; results go to stdout, diagnostics to stderr.

Exit codes: 0 success, 1 failed verification or criterion, 2 bad input, 3 size guard hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time

from . import coloring, confusion, core, oracle, pathwidth, procedural, repro
from .coloring import exact_coloring, greedy_clique, kappa_details, kappa_min
from .confusion import build_confusion_graph
from .core import AutomataNetwork, decode, interaction_graph, omega
from .errors import InputError, ResourceError, VerificationError
from .oracle import t_search
from .pathwidth import PathDecomposition, derive_c_u, pathwidth_certificate
from .procedural import min_program_search, procedural_complexity_star
from .synthesis import SequentializationCertificate, synthesize_from_coloring
from .witnesses import SubsetEncoding, build_h_from_encoding, gen_example1, gen_swap_network



class _Failure(Exception):
    """Verification failed; exit 1 after printing the result."""

    def __init__(self, payload):
        super().__init__("verification failed")
        self.payload = payload


def _read_text(path: str) -> str:
    if path == "-":
        text = sys.stdin.read()
        if not text.strip():
            raise InputError("expected JSON on stdin")
        return text
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str, inputs: list[str]):
    text = _read_text(path)
    inputs.append(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from None


def _load_network(path: str, inputs: list[str]) -> AutomataNetwork:
    return AutomataNetwork.from_dict(_load_json(path, inputs))


def _parse_order(text: str | None, n: int) -> tuple[int, ...]:
    if text is None:
        return tuple(range(1, n + 1))
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise InputError(f"--order must be comma-separated integers, got {text!r}") from None


def _digits(x: int, n: int, q: int) -> str:
    return "".join(map(str, decode(x, n, q)))


# subcommands return (results, dot_text_or_None)


def cmd_kappa(args, inputs):
    h = _load_network(args.an, inputs)
    d = kappa_details(h, _parse_order(args.order, h.n))
    return {"kappa": d["kappa"], "chi": d["chi"], "schedule": d["schedule"]}, d["graph"].to_dot()


def cmd_kappa_min(args, inputs):
    h = _load_network(args.an, inputs)
    workers = args.workers or os.cpu_count() or 1
    k, u = kappa_min(h, prune=not args.no_prune, symmetry=args.symmetry, workers=workers)
    d = kappa_details(h, u)
    return {"kappa": k, "chi": d["chi"], "schedule": list(u)}, d["graph"].to_dot()


def cmd_chromatic(args, inputs):
    h = _load_network(args.an, inputs)
    u = _parse_order(args.order, h.n)
    graph = build_confusion_graph(h, u)
    coloring = exact_coloring(graph)
    clique = greedy_clique(graph.adjacency_bits()) if graph.uses_bitsets else []
    return {
        "chi": coloring.count,
        "schedule": list(u),
        "coloring": list(coloring.colors),
        "clique": clique,
    }, graph.to_dot()


def cmd_confusion(args, inputs):
    h = _load_network(args.an, inputs)
    u = _parse_order(args.order, h.n)
    graph = build_confusion_graph(h, u)
    edges = [[int(a), int(b)] for a, b in graph.edges()]
    return {
        "schedule": list(u),
        "vertices": h.size,
        "edges": edges,
        "labels": [_digits(x, h.n, h.q) for x in range(h.size)],
    }, graph.to_dot()


def cmd_synthesize(args, inputs):
    h = _load_network(args.an, inputs)
    u = _parse_order(args.order, h.n)
    graph = build_confusion_graph(h, u)
    cert = synthesize_from_coloring(h, u, exact_coloring(graph))
    return cert.to_dict(), None


def cmd_verify(args, inputs):
    data = _load_json(args.cert, inputs)
    try:
        cert = SequentializationCertificate.from_dict(data)
    except VerificationError as exc:
        raise _Failure({"valid": False, "reason": str(exc)}) from None
    return {"valid": True, "k": cert.k, "m": cert.m, "w": list(cert.w)}, None


def cmd_gen(args, inputs):
    if args.family == "swap":
        h = gen_swap_network(args.n, args.q)
    elif args.family == "example1":
        ex = gen_example1(args.q)
        h = {"h": ex.h, "f": ex.f, "g": ex.g}[args.part]
        if args.certificate:
            f, w, k = (ex.f, ex.w, 3) if args.part == "f" else (ex.g, ex.v, 1)
            cert = SequentializationCertificate(ex.h, f, w, k)
            return cert.to_dict(), None
    else:
        if args.k is None:
            raise InputError("gen lowerbound needs --k")
        if args.family_name == "km2":
            enc = SubsetEncoding.km2(args.k, args.q, args.n)
        else:
            enc = SubsetEncoding.kms(args.k, args.q)
        h = build_h_from_encoding(enc)
    return h.to_dict(), interaction_graph(h).to_dot()


def cmd_procedural(args, inputs):
    h = _load_network(args.an, inputs)
    k_min = kappa_min(h)[0]
    out = {"omega": omega(h), "kappa_min": k_min, "L_star": procedural_complexity_star(h), "search": None}
    if args.search:
        m = args.m if args.m is not None else h.n + k_min
        out["search"] = {"m": m, "t_max": args.tmax, "length": min_program_search(h, m, args.tmax)}
    return out, None


def cmd_pathwidth(args, inputs):
    h = _load_network(args.an, inputs)
    pd = None
    if args.pd:
        pd = PathDecomposition.from_dict(_load_json(args.pd, inputs), h.n)
    pd, cert = pathwidth_certificate(h, pd)
    c, u = derive_c_u(pd)
    return {
        "pathwidth_bound": pd.size,
        "bags": pd.to_dict()["bags"],
        "colors": [c[i] for i in range(1, h.n + 1)],
        "schedule": list(u),
        "certificate_extra": cert.k,
        "verified": True,
    }, interaction_graph(h).to_dot()


def cmd_t_search(args, inputs):
    path = args.resume or args.checkpoint
    result = t_search(
        args.n,
        args.q,
        symmetry=args.symmetry,
        checkpoint=path,
        resume=args.resume is not None,
        stop_after=args.stop_after,
    )
    return result.to_dict(), None


def cmd_repro(args, inputs):
    try:
        key = repro.resolve(args.criterion)
    except KeyError:
        names = ", ".join(f"{k}/{v[0]}" for k, v in repro.CRITERIA.items())
        raise InputError(f"unknown criterion {args.criterion!r}; choose from {names}") from None
    kwargs = {"checkpoint": args.checkpoint} if key == "11" and args.checkpoint else {}
    result = repro.run(key, **kwargs)
    print(result.line(), file=sys.stderr)
    if not result.passed:
        raise _Failure(result.to_dict())
    return result.to_dict(), None


def _text(results, prefix: str = "") -> list[str]:
    lines = []
    if isinstance(results, dict):
        for key, value in results.items():
            if isinstance(value, dict):
                lines += _text(value, f"{prefix}{key}.")
            else:
                lines.append(f"{prefix}{key}: {json.dumps(value)}")
    else:
        lines.append(json.dumps(results))
    return lines


def _emit(args, results, dot, inputs, started):
    if args.format == "dot":
        if dot is None:
            raise InputError(f"{args.command} has no DOT output")
        sys.stdout.write(dot)
        return
    if args.report:
        digest = hashlib.sha256("\0".join(inputs).encode()).hexdigest()
        results = {
            "command": args.command,
            "inputs_digest": digest,
            "results": results,
            "wall_time": round(time.perf_counter() - started, 6),
            "guards": _guards(),
        }
    if args.format == "text":
        sys.stdout.write("\n".join(_text(results)) + "\n")
    else:
        sys.stdout.write(json.dumps(results) + "\n")


def _guards() -> dict:
    return {
        "max_configurations": core.MAX_CONFIGS,
        "max_confusion_vertices": confusion.MAX_VERTICES,
        "max_exact_coloring_vertices": coloring.EXACT_LIMIT,
        "max_kappa_min_n": coloring.KAPPA_MIN_MAX_N,
        "max_program_search_states": procedural.SEARCH_LIMIT,
        "max_pathwidth_vertices": pathwidth.MAX_DP_VERTICES,
        "max_monoid_states": oracle.MAX_STATES,
    }


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "dot", "text"], default="json")
    common.add_argument("--report", action="store_true", help="wrap results with digest, timing and guards")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="anseq", description="Sequentialization of automata networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    def network(p):
        p.add_argument("--an", default="-", help="network JSON file, '-' for stdin (default)")

    p = add("kappa", cmd_kappa, "cost of sequentialization under an order")
    network(p)
    p.add_argument("--order", help="1-based order, e.g. 1,2,3 (default identity)")

    p = add("kappa-min", cmd_kappa_min, "minimum cost over all orders")
    network(p)
    p.add_argument("--no-prune", action="store_true", help="exact chromatic number for every order")
    p.add_argument("--symmetry", action="store_true", help="skip orders equivalent under automorphisms")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count)")

    p = add("chromatic", cmd_chromatic, "exact chromatic number of the confusion graph")
    network(p)
    p.add_argument("--order")

    p = add("confusion", cmd_confusion, "confusion graph edges or DOT")
    network(p)
    p.add_argument("--order")

    p = add("synthesize", cmd_synthesize, "certificate from an optimal coloring")
    network(p)
    p.add_argument("--order")

    p = add("verify", cmd_verify, "exhaustively check a certificate")
    p.add_argument("--cert", default="-")

    p = add("gen", cmd_gen, "generate witness networks")
    gsub = p.add_subparsers(dest="family", required=True)
    g = gsub.add_parser("swap", parents=[common])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--q", type=int, default=2)
    g = gsub.add_parser("example1", parents=[common])
    g.add_argument("--q", type=int, default=2)
    g.add_argument("--part", choices=["h", "f", "g"], default="h")
    g.add_argument("--certificate", action="store_true", help="emit the f or g certificate")
    g = gsub.add_parser("lowerbound", parents=[common])
    g.add_argument("--family", dest="family_name", choices=["km2", "kms"], required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--q", type=int, default=2)
    g.add_argument("--n", type=int, default=None, help="km2 only: pad to n >= 3k coordinates")

    p = add("procedural", cmd_procedural, "procedural complexity and shortest-program search")
    network(p)
    p.add_argument("--search", action="store_true")
    p.add_argument("--m", type=int, default=None, help="register count (default n + kappa_min)")
    p.add_argument("--tmax", type=int, default=8)

    p = add("pathwidth-bound", cmd_pathwidth, "pathwidth bound with a verified certificate")
    network(p)
    p.add_argument("--pd", help="path decomposition JSON to use instead of the exact one")

    p = add("t-search", cmd_t_search, "exhaustive search for t(n, q)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--checkpoint", help="write checkpoints to this file")
    p.add_argument("--resume", help="resume from (and keep writing) this checkpoint")
    p.add_argument("--stop-after", type=int, default=None, help="sweep at most this many networks")

    p = add("repro", cmd_repro, "run one acceptance criterion end to end")
    p.add_argument("criterion", help="number (1-11) or name, e.g. example1-kappa")
    p.add_argument("--checkpoint", help="checkpoint file for the t(3,2) sweep")
    return parser


def dispatch(argv=None) -> int:
    """Run one subcommand; JSON on stdout, diagnostics on stderr, exit code returned."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose or args.command in ("t-search", "repro") else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    started = time.perf_counter()
    inputs: list[str] = []
    try:
        results, dot = args.func(args, inputs)
        _emit(args, results, dot, inputs, started)
        return 0
    except _Failure as fail:
        sys.stdout.write(json.dumps(fail.payload) + "\n")
        return 1
    except VerificationError as exc:
        print(f"anseq: verification failed: {exc}", file=sys.stderr)
        return 1
    except ResourceError as exc:
        print(f"anseq: resource limit: {exc}", file=sys.stderr)
        return 3
    except (InputError, ValueError) as exc:
        print(f"anseq: input error: {exc}", file=sys.stderr)
        return 2


main = dispatch

if __name__ == "__main__":
    sys.exit(main())
