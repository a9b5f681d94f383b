"""Command-line interface.

Thin shell over the library: every subcommand prints exactly what the
corresponding library call returns, so scripted output is byte-stable.
Exit codes: 0 success, 1 semantic failure (invalid structure, unreachable
request, cap exceeded), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb
from pathlib import Path

from .core import make_chain
from .counting import (
    OracleCapError, catalan, count_models, count_premodels,
    count_saturated_chain, enumerate_models, enumerate_premodels,
    oracle_models, oracle_wfs, shapiro_table,
)
from .localize import (
    left_quillen_edges, localization_graph, word_str, zigzag_from_trivial,
)
from .model import homotopy_category, verify_model_structure
from .paths import LatticePath, path_to_endo, phi, phi_inverse
from .serialize import (
    ExportConfig, dumps, export_model, graph_to_dot, model_from_json,
    model_to_json, transfer_to_dot,
)
from .transfer import enumerate_transfer_systems

# Bundled sample path: the worked 7x7 route with ordered partition 3+2+2.
EXAMPLE_PATHS = {
    "fig3": "NNENEEENENNNEE",
}


def _add_common(p: argparse.ArgumentParser, *names: str):
    if "n" in names:
        p.add_argument("--n", type=int, required=True, help="chain parameter")
    if "format" in names:
        p.add_argument("--format", default=None, help="output format")
    if "cap" in names:
        p.add_argument("--cap", type=int, default=18,
                       help="max scan exponent for brute-force oracles")
    if "jobs" in names:
        p.add_argument("--jobs", type=int, default=1,
                       help="worker count; accepted for interface stability, "
                            "execution is single-process at these scales")
    if "out" in names:
        p.add_argument("--out", type=Path, default=None, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="posetmodels")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("count", help="print an exact count")
    _add_common(p, "n", "jobs")
    p.add_argument("--what", default="models",
                   choices=["models", "premodels", "transfer", "saturated"])

    p = sub.add_parser("enumerate", help="stream structures")
    _add_common(p, "n", "format", "jobs", "out")
    p.add_argument("--what", default="models",
                   choices=["models", "premodels", "transfer"])

    p = sub.add_parser("verify", help="check a model-structure JSON file")
    p.add_argument("input", help="path to JSON, or - for stdin")

    p = sub.add_parser("triangle", help="homotopy-category refinement table")
    _add_common(p, "n")

    p = sub.add_parser("bijection", help="the path/endomorphism bijection")
    _add_common(p, "n")
    p.add_argument("--check", action="store_true",
                   help="run the full bijectivity suite")
    p.add_argument("--example", choices=sorted(EXAMPLE_PATHS),
                   help="print the endomorphism of a bundled sample path")
    p.add_argument("--path", help="print the endomorphism of an N/E path")

    p = sub.add_parser("localize", help="shortest localization words")
    _add_common(p, "n")
    p.add_argument("--target", help="model-structure JSON path, or - for stdin")
    p.add_argument("--all", action="store_true",
                   help="print a word for every structure")

    p = sub.add_parser("graph", help="the localization graph")
    _add_common(p, "n", "format")
    p.add_argument("--edges", default="steps", choices=["steps", "quillen"])

    p = sub.add_parser("export", help="diagram export")
    _add_common(p, "format", "out", "jobs")
    p.add_argument("--n", type=int, default=None, help="export all structures on [n]")
    p.add_argument("--input", default=None, help="export one structure from JSON")

    p = sub.add_parser("oracle", help="brute-force scans")
    _add_common(p, "n", "cap", "format", "jobs")
    p.add_argument("--what", default="models", choices=["models", "wfs"])
    return ap


def _read_json(source: str) -> dict:
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    return json.loads(text)


def cmd_count(args) -> int:
    n = args.n
    if args.what == "models":
        value = count_models(n)
    elif args.what == "premodels":
        value = count_premodels(n)
    elif args.what == "transfer":
        value = catalan(n + 1)
    else:
        value = count_saturated_chain(n)
    print(value)
    return 0


def cmd_enumerate(args) -> int:
    fmt = args.format or "json"
    if args.what == "models":
        items = enumerate_models(args.n)
        render_json = lambda m: dumps(model_to_json(m))
        render_dot = lambda m: export_model(m, ExportConfig(fmt="dot"))
    elif args.what == "transfer":
        items = enumerate_transfer_systems(make_chain(args.n))
        from .serialize import transfer_to_json
        render_json = lambda t: dumps(transfer_to_json(t))
        render_dot = transfer_to_dot
    else:
        items = enumerate_premodels(args.n)
        render_json = lambda p: dumps({
            "lattice": {"kind": "chain", "n": args.n},
            "cof": sorted(p.c.nonidentity_pairs()),
            "acof": sorted(p.ac.nonidentity_pairs()),
            "fib": sorted(p.f.nonidentity_pairs()),
            "afib": sorted(p.af.nonidentity_pairs()),
        })
        render_dot = None
    if fmt == "json":
        for item in items:
            print(render_json(item))
    elif fmt == "dot":
        if render_dot is None:
            print("dot export is not defined for premodels", file=sys.stderr)
            return 2
        for item in items:
            sys.stdout.write(render_dot(item))
    else:
        print(f"unknown format {fmt!r}", file=sys.stderr)
        return 2
    return 0


def cmd_verify(args) -> int:
    try:
        data = _read_json(args.input)
        m = model_from_json(data)
    except (OSError, ValueError, KeyError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    report = verify_model_structure(m)
    if report.ok:
        line = f"VALID {m.classification()}"
        if m.lattice.is_chain:
            k, _ = homotopy_category(m)
            line += f" Ho=[{k}]"
        print(line)
        return 0
    print(f"INVALID {report.axiom} witness={report.witness}")
    return 1


def cmd_triangle(args) -> int:
    table = shapiro_table(args.n)
    for n, row in enumerate(table.rows):
        cells = [str(v) for v in row] + [str(sum(row))]
        print("\t".join(cells))
    return 0


def cmd_bijection(args) -> int:
    if args.example or args.path:
        steps = EXAMPLE_PATHS[args.example] if args.example else args.path
        try:
            endo = path_to_endo(LatticePath(steps))
        except ValueError as exc:
            print(f"bad path: {exc}", file=sys.stderr)
            return 2
        print(str(endo))
        return 0
    if args.check:
        n = args.n
        seen = {}
        for m in enumerate_models(n):
            e = phi(m)
            if e.values in seen or phi_inverse(e).key() != m.key():
                print(f"FAIL at {e}")
                return 1
            seen[e.values] = True
        expected = comb(2 * n + 1, n)
        ok = len(seen) == expected
        print(f"bijective: {ok} ({len(seen)} structures, expected {expected})")
        return 0 if ok else 1
    for m in enumerate_models(args.n):
        print(str(phi(m)))
    return 0


def cmd_localize(args) -> int:
    if args.all:
        for i, m in enumerate(enumerate_models(args.n)):
            print(f"{i}\t{word_str(zigzag_from_trivial(m))}")
        return 0
    if not args.target:
        print("either --target or --all is required", file=sys.stderr)
        return 2
    try:
        m = model_from_json(_read_json(args.target))
    except (OSError, ValueError, KeyError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    report = verify_model_structure(m)
    if not report.ok:
        print(f"INVALID {report.axiom} witness={report.witness}")
        return 1
    print(word_str(zigzag_from_trivial(m)))
    return 0


def cmd_graph(args) -> int:
    fmt = args.format or "dot"
    if fmt != "dot":
        print(f"unknown format {fmt!r}", file=sys.stderr)
        return 2
    if args.edges == "steps":
        g = localization_graph(args.n)
        sys.stdout.write(graph_to_dot(g.edges, len(g.nodes)))
    else:
        edges = left_quillen_edges(args.n)
        count = count_models(args.n)
        sys.stdout.write(graph_to_dot(edges, count, name="leftquillen",
                                      labels=False))
    return 0


def cmd_export(args) -> int:
    fmt = args.format or "dot"
    ext = {"dot": "dot", "tikz": "tex", "json": "json"}.get(fmt)
    if ext is None:
        print(f"unknown format {fmt!r}", file=sys.stderr)
        return 2
    if (args.n is None) == (args.input is None):
        print("exactly one of --n or --input is required", file=sys.stderr)
        return 2
    if args.input is not None:
        try:
            structures = [model_from_json(_read_json(args.input))]
        except (OSError, ValueError, KeyError) as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return 2
    else:
        structures = list(enumerate_models(args.n))
    if args.out is None:
        for i, m in enumerate(structures):
            sys.stdout.write(export_model(m, ExportConfig(fmt=fmt, name=f"m{i}")))
        return 0
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        for i, m in enumerate(structures):
            path = args.out / f"model_{i:04d}.{ext}"
            path.write_text(export_model(m, ExportConfig(fmt=fmt, name=f"m{i}")))
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(structures)} files to {args.out}")
    return 0


def cmd_oracle(args) -> int:
    l = make_chain(args.n)
    try:
        if args.what == "models":
            items = list(oracle_models(l, cap=args.cap))
        else:
            items = list(oracle_wfs(l, cap=args.cap))
    except OracleCapError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        for item in items:
            if args.what == "models":
                print(dumps(model_to_json(item)))
            else:
                print(dumps({
                    "left": sorted(item.left.nonidentity_pairs()),
                    "right": sorted(item.right.nonidentity_pairs()),
                }))
    print(len(items))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "count": cmd_count,
        "enumerate": cmd_enumerate,
        "verify": cmd_verify,
        "triangle": cmd_triangle,
        "bijection": cmd_bijection,
        "localize": cmd_localize,
        "graph": cmd_graph,
        "export": cmd_export,
        "oracle": cmd_oracle,
    }
    return handlers[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
