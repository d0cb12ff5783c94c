"""Command line interface: ``relgraph <command> ...``.

Exit status is 0 on success, 2 on bad input and 3 when a resource cap is hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import database, optimizer, structure
from .errors import RelGraphError, ResourceLimitError
from .graph import INF, encode, metrics, parse_graph
from .reliability import bernstein_to_power, class_filtration, unrel_exact, unreliability
from .spanning import is_tree_balanced, tree_number

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE = 0, 2, 3


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def _default(o):
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    if o == INF:
        return None
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _ids(text: str | None) -> list[int]:
    if not text:
        return []
    return [int(x) for x in text.split(",") if x.strip()]


def _read_graphs(path: str):
    out = []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append((line, parse_graph(line)))
    return out


def _read_graph_arg(text: str):
    # a literal encoding, or @file to read the first line of a file
    if text.startswith("@"):
        with open(text[1:], encoding="ascii") as fh:
            text = fh.readline().strip()
    return parse_graph(text)


def _read_structure(text: str) -> structure.MarkedStructure:
    if text.startswith("@"):
        with open(text[1:], encoding="ascii") as fh:
            text = fh.readline().strip()
    parts = text.split()
    g = parse_graph(parts[0])
    marks = _ids(parts[1]) if len(parts) > 1 else []
    return structure.MarkedStructure(g, frozenset(marks))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    count, errors = database.ingest(args.files, args.out)
    print(f"{count} records written to {args.out}; {len(errors)} failed lines", file=sys.stderr)
    return EXIT_INPUT if errors else EXIT_OK


def cmd_analyze(args) -> int:
    g = _read_graph_arg(args.graph)
    g.require_loopless()
    g.require_connected()
    poly = unrel_exact(g, cap=1 << 40, max_m=10 ** 6) if args.force else unreliability(g)
    met = metrics(g)
    bal = is_tree_balanced(g)
    out = {
        "encoding": encode(g),
        "n": g.n,
        "m": g.m,
        "r": g.redundancy,
        "girth": None if met.girth == INF else met.girth,
        "edge_connectivity": met.edge_connectivity,
        "min_degree": met.min_degree,
        "max_degree": met.max_degree,
        "regular_degree": met.is_k_regular,
        "is_simple": met.is_simple,
        "bernstein": "[" + ",".join(str(b) for b in poly.bernstein) + "]",
        "power": "[" + ",".join(str(a) for a in bernstein_to_power(poly.bernstein)) + "]",
        "tree_number": str(tree_number(g)),
        "tree_balanced": bal.balanced,
        "tree_balance_witness": bal.witness,
    }
    _emit(args, _json(out))
    return EXIT_OK


def cmd_classes(args) -> int:
    graphs = []
    for path in args.files:
        graphs += _read_graphs(path)
    if not graphs:
        raise RelGraphError("no graphs given")
    filt = class_filtration([g for _, g in graphs], order=args.order, ids=[line for line, _ in graphs],
                            max_level=args.max_level)
    out = {
        "order": filt.order,
        "members": [{"encoding": line, "is_simple": g.is_simple} for line, g in graphs],
        "levels": [{"k": k, "survivors": list(s)} for k, s in filt.levels],
        "final": list(filt.final),
    }
    _emit(args, _json(out))
    return EXIT_OK


def cmd_distill(args) -> int:
    d = structure.distill(_read_graph_arg(args.graph))
    out = {
        "structure": encode(d.structure),
        "chain_lengths": list(d.chain_lengths),
        "chains": [list(p) for p in d.origin_labels],
    }
    _emit(args, _json(out))
    return EXIT_OK


def cmd_subdivide(args) -> int:
    s = _read_graph_arg(args.structure)
    lengths = _ids(args.lengths)
    if len(lengths) == 1:
        lengths = lengths * s.m
    if len(lengths) != s.m:
        raise RelGraphError(f"expected {s.m} lengths, got {len(lengths)}")
    _emit(args, encode(structure.subdivide(s, lengths)))
    return EXIT_OK


def cmd_gamma(args) -> int:
    ms = structure.MarkedStructure(_read_graph_arg(args.structure), frozenset(_ids(args.marks)))
    if args.lam is not None and args.lam != ms.lam:
        raise RelGraphError(f"--lambda {args.lam} does not match {ms.lam} marks")
    gt = structure.gamma_table(ms, args.max_k)
    out = {"r": gt.r, "lambda": ms.lam, "max_k": gt.max_k,
           "gamma": [[str(x) for x in row] for row in gt.gamma]}
    if args.c is not None:
        out["b1"] = [str(x) for x in structure.b1_coeffs(gt, args.c)]
    _emit(args, _json(out))
    return EXIT_OK


def cmd_optimize(args) -> int:
    s = _read_graph_arg(args.structure)
    if args.r is not None and s.redundancy != args.r:
        raise RelGraphError(f"structure has redundancy {s.redundancy}, not {args.r}")
    if args.order == "kj":
        marks = optimizer.minimize_kj(s, args.lam, args.max_k)
    elif args.order == "jk":
        marks = optimizer.minimize_jk(s, args.lam, args.max_k)
    else:
        marks = optimizer.minimize_obstructions(s, args.lam)
    out = {"order": args.order, "lambda": args.lam, "count": len(marks),
           "markings": [sorted(x) for x in marks]}
    _emit(args, _json(out))
    return EXIT_OK


def cmd_algorithm1(args) -> int:
    graphs = _read_graphs(args.pool)
    ids = [database.record_id(line) for line, _ in graphs]
    v = optimizer.algorithm1(args.r, args.lam, [g for _, g in graphs], ids=ids, max_k=args.max_k)
    out = {
        "kind": v.kind,
        "reason": v.reason,
        "evidence": v.evidence,
        "candidates": [ms.to_line() for ms in v.candidates],
        "tree_scope": "pool",
    }
    if v.marked is not None:
        out["marked"] = v.marked.to_line()
        out["graph"] = encode(v.marked.structure)
    _emit(args, _json(out))
    return EXIT_OK


def cmd_export_lp(args) -> int:
    s = _read_graph_arg(args.structure)
    _emit(args, optimizer.export_lp(s, args.lam, args.distance))
    return EXIT_OK


def cmd_percentiles(args) -> int:
    records = database.load(args.db)
    grid = None
    if args.grid:
        grid = [float(x) for x in args.grid.split(",")]
    elif args.p_max is not None or args.step is not None:
        grid = database.default_grid(args.p_max or database.DEFAULT_P_MAX, args.step or database.DEFAULT_STEP)
    rows = database.percentiles(records, grid, args.out)
    if not args.out:
        sys.stdout.write("p,id,unreliability,normalized_rank,girth\n")
        for p, rid, u, rank, g in rows:
            sys.stdout.write(f"{p:.6g},{rid},{u!r},{rank:.6g},{'' if g is None else g}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relgraph", description="Exact all-terminal reliability tools.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build a JSONL database from graph6/sparse6 files")
    p.add_argument("files", nargs="+")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="metrics, polynomial and tree data for one graph")
    p.add_argument("graph", help="graph6/sparse6 line, or @file")
    p.add_argument("--force", action="store_true", help="lift the exact-engine caps")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classes", help="near-zero or near-one reliability classes")
    p.add_argument("files", nargs="+")
    p.add_argument("--order", choices=["near-zero", "near-one"], default="near-zero")
    p.add_argument("--max-level", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("distill", help="structure graph and chain lengths")
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("subdivide", help="replace structure edges by paths")
    p.add_argument("structure")
    p.add_argument("--lengths", required=True, help="comma-separated, or one value for all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("gamma", help="gamma table of a marked structure")
    p.add_argument("structure")
    p.add_argument("--marks", default="", help="comma-separated long-chain ids")
    p.add_argument("--lambda", dest="lam", type=int)
    p.add_argument("--max-k", type=int)
    p.add_argument("--c", type=int, help="also print b^(1) for this chain length")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("optimize", help="optimal long-chain markings on a structure")
    p.add_argument("structure")
    p.add_argument("--r", type=int)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--order", choices=["kj", "jk", "obstruction"], default="kj")
    p.add_argument("--max-k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("algorithm1", help="candidate search over a pool of cubic graphs")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--max-k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_algorithm1)

    p = sub.add_parser("export-lp", help="LP model for separating long chains")
    p.add_argument("structure")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--distance", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("percentiles", help="percentile ranks of database records over p")
    p.add_argument("db")
    p.add_argument("--grid", help="comma-separated p values")
    p.add_argument("--p-max", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_percentiles)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (RelGraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
