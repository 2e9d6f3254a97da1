"""Command-line front end.

Exit codes: 0 on success with verified output, 2 on a structured pipeline
failure (the reason tree goes to stdout), 1 on usage or I/O errors.
Stdout depends only on the inputs, profile and seed; timings and progress
go to stderr.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from collections import Counter

from . import __version__
from .certificate import parse as parse_cert, serialize as serialize_cert, verify
from .errors import InputError, PipelineFailure
from .graph import Graph
from .io import read_graph, serialize_edge_list


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected a comma-separated vertex list, got {text!r}") from None


def _threads() -> int:
    raw = os.environ.get("TKFORGE_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"TKFORGE_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("TKFORGE_THREADS must be positive")
    return n  # advisory: every stage currently runs on one worker


def _need_seed(args):
    if args.seed is None:
        raise UsageError(f"{args.command} requires --seed")


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(args, msg: str):
    if not args.quiet:
        print(msg, file=sys.stderr)


def _profile(args, g: Graph):
    from .profile import load, paper_profile

    name = args.profile or "s0"
    if name == "paper":
        return paper_profile(g.vertex_count, g.average_degree())
    return load(name)


def _budget(args):
    from .expander import SearchBudget

    if args.budget is None:
        return SearchBudget(seed=args.seed or 0)
    if args.budget < 1:
        raise UsageError("--budget must be positive")
    return SearchBudget(samples=args.budget, seed=args.seed or 0)


# -- subcommands -------------------------------------------------------------

def cmd_generate(args) -> int:
    from .generators import GENERATORS, generate

    params = {}
    for item in args.params:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        try:
            params[key] = float(val) if key == "p" else int(val)
        except ValueError:
            raise UsageError(f"bad value for {key}: {val!r}") from None
    if args.kind in GENERATORS and "seed" in GENERATORS[args.kind][1]:
        params["seed"] = args.seed
    g = generate(args.kind, **params)
    _emit(args, serialize_edge_list(g))
    _note(args, f"generated {args.kind}: n={g.vertex_count} m={g.edge_count}")
    return 0


def cmd_extract(args) -> int:
    from .expander import ExpanderParams, extract_expander

    _need_seed(args)
    g = read_graph(args.input)
    d = args.d if args.d is not None else g.average_degree()
    ext = extract_expander(g, d, ExpanderParams(args.eps1, args.eps2, d), _budget(args), seed=args.seed)
    h = ext.graph
    print(f"vertices {h.vertex_count}")
    print(f"edges {h.edge_count}")
    print(f"min_degree {h.min_degree()}")
    print(f"average_degree {h.average_degree():.6f}")
    print(f"descent_steps {ext.steps}")
    print(f"status {ext.verdict.status}")
    if args.out:
        lifted = sorted(
            (min(a, b), max(a, b)) for a, b in ((ext.remap.to_old(u), ext.remap.to_old(v)) for u, v in h.edges())
        )
        with open(args.out, "w") as fh:
            fh.write("".join(f"{u} {v}\n" for u, v in lifted))
    return 0


def cmd_certify(args) -> int:
    from .expander import ExpanderParams, certify_robust

    _need_seed(args)
    g = read_graph(args.input)
    d = args.d if args.d is not None else max(g.average_degree(), 1e-9)
    verdict = certify_robust(g, ExpanderParams(args.eps1, args.eps2, d), _budget(args))
    sys.stdout.write(verdict.report())
    return 0


def cmd_connect(args) -> int:
    from .connector import ConnectRequest, LengthBound, connect

    g = read_graph(args.input)
    cap = args.cap
    if cap is None and g.vertex_count > 1 and g.average_degree() > 0:
        bound = LengthBound(g.vertex_count, g.average_degree(), args.eps1, args.eps2)
        cap = bound.default_cap
    path = connect(g, ConnectRequest(frozenset(_ints(args.a)), frozenset(_ints(args.b)), frozenset(_ints(args.avoid)), cap))
    print(f"length {len(path) - 1}")
    print("path " + " ".join(map(str, path)))
    return 0


def cmd_find(args) -> int:
    from .assembler import find_subdivision

    _need_seed(args)
    if not args.profile:
        raise UsageError("find requires --profile")
    g = read_graph(args.input)
    profile = _profile(args, g)
    start = time.perf_counter()
    result = find_subdivision(g, profile, args.mode, args.seed, args.retry)
    verdict = verify(g, result.cert)
    if not verdict:
        raise AssertionError(f"internal error: find produced a rejected certificate: {verdict}")
    _note(args, f"find: {time.perf_counter() - start:.2f}s")
    print(f"branch {result.branch}")
    print(f"found TK_{result.cert.t}^({result.cert.ell})")
    print("verify accept")
    text = serialize_cert(result.cert)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    g = read_graph(args.input)
    with open(args.cert) as fh:
        cert = parse_cert(fh.read())
    verdict = verify(g, cert)
    print(str(verdict))
    return 0 if verdict else 2


def cmd_oracle(args) -> int:
    from .oracle import brute_force_max_balanced

    g = read_graph(args.input)
    res = brute_force_max_balanced(g, args.t, args.n_max)
    if not res.found:
        print("not found")
        return 2
    verdict = verify(g, res.cert)
    if not verdict:
        raise AssertionError(f"internal error: oracle certificate rejected: {verdict}")
    print(f"found ell={res.ell}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(serialize_cert(res.cert))
    return 0


def cmd_bench(args) -> int:
    """Run each stage once on the input; results to stdout, timings to stderr."""
    from .adjusters import build_simple_adjuster
    from .assembler import build_balanced_subdivision
    from .units import assemble_unit

    _need_seed(args)
    g = read_graph(args.input)
    profile = _profile(args, g)
    stages = [
        ("unit", lambda: assemble_unit(g, (), profile.unit_shape(), profile).describe().splitlines()[0]),
        ("simple_adjuster", lambda: "lengths " + " ".join(map(str, build_simple_adjuster(g, (), profile).lengths))),
        ("balanced", lambda: (lambda c: f"TK_{c.t}^({c.ell})")(build_balanced_subdivision(g, profile, args.seed, args.retry))),
    ]
    worst = 0
    for name, run in stages:
        start = time.perf_counter()
        try:
            out = run()
            print(f"{name} ok {out}")
        except PipelineFailure as exc:
            print(f"{name} failed {exc.stage}: {exc.reason}")
            worst = 2
        _note(args, f"{name}: {time.perf_counter() - start:.3f}s")
    return worst


def cmd_report(args) -> int:
    g = read_graph(args.input)
    rows = [("graph", "vertices", g.vertex_count), ("graph", "edges", g.edge_count),
            ("graph", "average_degree", f"{g.average_degree():.6f}"),
            ("graph", "min_degree", g.min_degree() if g.vertex_count else 0),
            ("graph", "max_degree", g.max_degree() if g.vertex_count else 0)]
    for deg, count in sorted(Counter(g.degrees()).items()):
        rows.append(("degree_histogram", deg, count))
    if args.cert:
        with open(args.cert) as fh:
            cert = parse_cert(fh.read())
        verdict = verify(g, cert)
        rows.append(("certificate", "verdict", str(verdict)))
        rows.append(("certificate", "t", cert.t))
        rows.append(("certificate", "ell", cert.ell))
        rows.append(("certificate", "vertices_used", len(cert.vertices())))
        for length, count in sorted(Counter(len(p) - 1 for p in cert.paths.values()).items()):
            rows.append(("path_length_histogram", length, count))
    if args.csv:
        print("section,key,value")
        for r in rows:
            print(",".join(map(str, r)))
    else:
        for section, key, value in rows:
            print(f"{section:<22} {key!s:<16} {value}")
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "extract": cmd_extract,
    "certify": cmd_certify,
    "connect": cmd_connect,
    "find": cmd_find,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "bench": cmd_bench,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="graph file (edge list, or DIMACS for .col/.dimacs)")
    common.add_argument("--out", help="output file; stdout when omitted")
    common.add_argument("--profile", help="builtin profile name (s0, paper) or key=value file")
    common.add_argument("--seed", type=int)
    common.add_argument("--budget", type=int, help="sampled-certifier sample count")
    common.add_argument("--retry", type=int, help="extra attempts per failed core pair")
    common.add_argument("--mode", choices=("auto", "dense", "expander"), default="auto")
    common.add_argument("--quiet", action="store_true")

    parser = _Parser(prog="tkforge", description="Balanced clique subdivisions: construct and verify.")
    parser.add_argument("--version", action="version", version=f"tkforge {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("generate", parents=[common], help="write a generated graph as an edge list")
    p.add_argument("kind")
    p.add_argument("params", nargs="*", help="generator parameters as key=value")
    for name, text in (("extract", "bipartite expander subgraph"), ("certify", "robust expansion check")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--d", type=float)
        p.add_argument("--eps1", type=float, default=0.001)
        p.add_argument("--eps2", type=float, default=0.2)
    p = sub.add_parser("connect", parents=[common], help="shortest A,B-path avoiding a set")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--avoid")
    p.add_argument("--cap", type=int)
    p.add_argument("--eps1", type=float, default=0.001)
    p.add_argument("--eps2", type=float, default=0.2)
    sub.add_parser("find", parents=[common], help="find and verify a balanced subdivision")
    p = sub.add_parser("verify", parents=[common], help="check a certificate against a graph")
    p.add_argument("--cert", required=True)
    p = sub.add_parser("oracle", parents=[common], help="brute-force smallest balanced ell")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n-max", type=int, default=12)
    sub.add_parser("bench", parents=[common], help="run each stage once")
    p = sub.add_parser("report", parents=[common], help="graph and certificate statistics")
    p.add_argument("--cert")
    p.add_argument("--csv", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; see --help")
        if args.command != "generate" and not args.input:
            raise UsageError(f"{args.command} requires --input")
        _threads()
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except PipelineFailure as exc:
        print("failure")
        print(exc.tree())
        return 2
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
