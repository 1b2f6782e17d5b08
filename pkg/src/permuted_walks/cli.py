"""Command-line front end.

Exit codes: 0 when every checked claim holds, 1 when a counterexample or a
failed certificate is found, 2 for usage, parse and guard errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import chain, search, surgery
from .digraph import DirectedMultigraph, build_ldn, is_isomorphic_to_ldn
from .permwalk import (
    Permutation,
    build_perm_chain,
    build_perm_chain_variant,
    build_signed_chain,
)


class UsageError(Exception):
    pass


def load_graph(spec: str) -> tuple[DirectedMultigraph, int]:
    """Parse a builder spec or read a JSON file; returns (graph, label offset).

    The offset is n for signed walks, whose CLI labels run over -n..n.
    """
    kind, sep, arg = spec.partition(":")
    try:
        if sep and kind == "ldn":
            d, n = (int(v) for v in arg.split(","))
            return build_ldn(d, n), 0
        if sep and kind == "perm":
            return build_perm_chain(Permutation.parse(arg)), 0
        if sep and kind == "variant":
            return build_perm_chain_variant(Permutation.parse(arg)), 0
        if sep and kind == "signed":
            sigma = Permutation.parse(arg, signed=True)
            return build_signed_chain(sigma), sigma.n
    except ValueError as exc:
        raise UsageError(f"bad graph spec {spec!r}: {exc}") from exc
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"{spec!r} is neither a builder spec nor an existing file")
    try:
        return DirectedMultigraph.from_json(path.read_text()), 0
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _labels(text: str, offset: int) -> list[int]:
    try:
        return [int(tok) + offset for tok in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad vertex list {text!r}") from exc


def _emit(obj: dict, fmt: str, text: str | None = None) -> None:
    if fmt == "json" or text is None:
        print(json.dumps(obj, indent=2))
    else:
        print(text)


def _hitting_text(res: chain.HittingResult, offset: int) -> str:
    tgt = ",".join(str(t - offset) for t in res.targets)
    lines = [f"source   {res.source - offset}", f"targets  {tgt}", f"method   {res.method}"]
    if isinstance(res.value, Fraction):
        lines.append(f"value    {res.value} ({float(res.value):.12g})")
    else:
        lines.append(f"value    {res.value:.12g}")
    if res.trials is not None:
        lines += [f"trials   {res.trials}", f"stderr   {res.stderr:.6g}"]
    return "\n".join(lines)


def _relabel(res_dict: dict, offset: int) -> dict:
    res_dict["source"] -= offset
    res_dict["targets"] = [t - offset for t in res_dict["targets"]]
    return res_dict


def cmd_solve(args) -> int:
    g, off = load_graph(args.graph)
    start = time.perf_counter()
    try:
        res = chain.expected_hitting(g, args.source + off, _labels(args.to, off), args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"solve time {time.perf_counter() - start:.4f}s", file=sys.stderr)
    _emit(_relabel(res.to_dict(), off), args.format, _hitting_text(res, off))
    return 0


def cmd_simulate(args) -> int:
    g, off = load_graph(args.graph)
    try:
        res = chain.simulate_hitting(
            g, args.source + off, _labels(args.to, off), args.trials, args.seed,
            step_cap=args.step_cap, jobs=args.jobs,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = _relabel(res.to_dict(), off)
    out["seed"] = args.seed
    _emit(out, args.format, f"seed     {args.seed}\n" + _hitting_text(res, off))
    return 0


def _report_out(report: search.SearchReport, args) -> int:
    if args.records or args.format == "csv":
        if report.records is not None:
            sys.stdout.write(report.records_csv())
        if args.format == "csv":
            return 0 if report.ok else 1
    _emit(report.to_dict(), args.format, report.to_text())
    return 0 if report.ok else 1


def cmd_search(args) -> int:
    keep = args.records or args.format == "csv"
    if args.variant == "signed":
        report = search.signed_perm_search(
            args.n, samples=args.samples, seed=args.seed, jobs=args.jobs,
            keep_records=keep, max_n=args.max_n,
        )
    else:
        report = search.exhaustive_perm_search(
            args.n, args.variant, jobs=args.jobs, keep_records=keep, max_n=args.max_n
        )
    return _report_out(report, args)


def cmd_sweep(args) -> int:
    report = search.random_graph_sweep(args.n, args.d, args.trials, args.seed, jobs=args.jobs)
    return _report_out(report, args)


def cmd_transposition(args) -> int:
    try:
        report = search.transposition_formula_check(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return _report_out(report, args)


def _need(value, flag: str) -> int:
    if value is None:
        raise UsageError(f"this lemma needs {flag}")
    return value


def cmd_verify(args) -> int:
    g, _ = load_graph(args.graph)
    try:
        if args.lemma == "return":
            cert = surgery.verify_return_bound(g, _need(args.i, "--i"))
            out, ok = cert.to_dict(), cert.holds
            if g.degree_profile().is_balanced():
                pi = chain.stationary(g)[cert.vertex]
                out["kac_equality"] = cert.value == 1 / pi
        elif args.lemma == "excursion":
            cert = surgery.verify_excursion_bound(g, _need(args.u, "--u"))
            out, ok = cert.to_dict(), cert.holds
        elif args.lemma == "setA":
            u, i = _need(args.u, "--u"), _need(args.i, "--i")
            a = surgery.build_ai(surgery.build_gi(g, u, i), i)
            out = {"lemma": "setA", "u": u, "i": i, "A_i": sorted(a.vertices)}
            if a.graph is None:
                ok = True
            else:
                claims = surgery.check_set_a_claims(g, u, i, a)
                out["claims"] = claims
                out["subgraph"] = a.graph.to_dict()
                ok = all(claims.values())
            out["holds"] = ok
        else:
            cert = surgery.verify_gpp(g, _need(args.y, "--y"))
            out, ok = cert.to_dict(), cert.holds
            n = cert.outcome.graph.num_vertices - 1
            d = g.out_degree(0)
            if n >= 1:
                out["isomorphic_to"] = f"L({d},{n})" if is_isomorphic_to_ldn(cert.outcome.graph, d, n) else None
    except surgery.PreconditionError as exc:
        raise UsageError(f"precondition failed: {exc}") from exc
    print(json.dumps(out, indent=2))
    return 0 if ok else 1


def cmd_build(args) -> int:
    g, _ = load_graph(args.graph)
    print(g.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="permwalk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def graph_arg(sp):
        sp.add_argument(
            "--graph", required=True,
            help="ldn:d,n | perm:<images> | variant:<images> | signed:<images> | path to graph JSON",
        )

    def fmt_arg(sp, choices=("text", "json")):
        sp.add_argument("--format", choices=choices, default="text")

    sp = sub.add_parser("solve", help="exact/float expected hitting time")
    graph_arg(sp)
    sp.add_argument("--from", dest="source", type=int, required=True)
    sp.add_argument("--to", required=True, help="comma-separated target set")
    sp.add_argument("--mode", choices=("exact", "float", "auto"), default="auto")
    fmt_arg(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("simulate", help="Monte Carlo expected hitting time")
    graph_arg(sp)
    sp.add_argument("--from", dest="source", type=int, required=True)
    sp.add_argument("--to", required=True)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--step-cap", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    fmt_arg(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("search", help="extremal search over permutations")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--variant", choices=("main", "remark3", "signed"), default="main")
    sp.add_argument("--samples", type=int, default=None, help="signed only: random sample size")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-n", type=int, default=None, help="override the size guard")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--records", action="store_true", help="dump the per-permutation CSV")
    fmt_arg(sp, ("text", "json", "csv"))
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("sweep", help="random Eulerian graph sweep")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--records", action="store_true")
    fmt_arg(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("transposition", help="closed form for adjacent transpositions")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--records", action="store_true")
    fmt_arg(sp, ("text", "json", "csv"))
    sp.set_defaults(func=cmd_transposition)

    sp = sub.add_parser("verify", help="check a surgery certificate")
    sp.add_argument("--lemma", choices=("return", "excursion", "setA", "gpp"), required=True)
    graph_arg(sp)
    sp.add_argument("--i", type=int)
    sp.add_argument("--u", type=int)
    sp.add_argument("--y", type=int)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("build", help="print a graph as JSON")
    graph_arg(sp)
    sp.set_defaults(func=cmd_build)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, search.GuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
