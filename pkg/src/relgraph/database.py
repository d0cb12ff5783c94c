"""JSONL reliability database and percentile reports."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cutsets import smallest_nontrivial_cut
from .errors import InvalidGraphError, RelGraphError
from .graph import INF, Multigraph, edge_connectivity, girth, parse_graph
from .reliability import UnrelPoly, evaluate, unreliability
from .spanning import is_tree_balanced, tree_number

log = logging.getLogger(__name__)

DEFAULT_P_MAX = 0.8
DEFAULT_STEP = 0.05


@dataclass(frozen=True)
class GraphRecord:
    id: str
    encoding: str
    n: int
    m: int
    r: int
    girth: int | None  # None for forests
    edge_connectivity: int
    bernstein: tuple[str, ...]
    tree_number: str
    tree_balanced: bool
    g_free: int | None  # None unless the graph is regular of degree >= 3
    is_simple: bool

    @property
    def poly(self) -> UnrelPoly:
        return UnrelPoly(self.m, tuple(int(x) for x in self.bernstein))

    def to_json(self) -> str:
        d = asdict(self)
        d["bernstein"] = list(self.bernstein)
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> GraphRecord:
        d = json.loads(line)
        d["bernstein"] = tuple(d["bernstein"])
        return cls(**d)


def record_id(encoding: str) -> str:
    return hashlib.sha256(encoding.encode("ascii")).hexdigest()[:16]


def make_record(encoding: str, bruteforce_max_m: int = 16) -> GraphRecord:
    encoding = encoding.strip()
    g = parse_graph(encoding)
    g.require_loopless()
    g.require_connected()
    poly = unreliability(g, bruteforce_max_m=bruteforce_max_m)
    gg = girth(g)
    k = g.regular_degree()
    g_free = smallest_nontrivial_cut(g) if (k is not None and k >= 3) else None
    return GraphRecord(
        id=record_id(encoding),
        encoding=encoding,
        n=g.n,
        m=g.m,
        r=g.redundancy,
        girth=None if gg == INF else int(gg),
        edge_connectivity=edge_connectivity(g),
        bernstein=tuple(str(b) for b in poly.bernstein),
        tree_number=str(tree_number(g)),
        tree_balanced=bool(is_tree_balanced(g).balanced) if g.m else True,
        g_free=g_free,
        is_simple=g.is_simple,
    )


def _safe_record(item):
    where, line = item
    try:
        return where, make_record(line), None
    except RelGraphError as exc:
        return where, None, str(exc)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("RELGRAPH_THREADS", "1")))
    except ValueError:
        return 1


def read_lines(paths: Sequence[str]):
    for path in paths:
        with open(path, encoding="ascii", errors="replace") as fh:
            for no, line in enumerate(fh, 1):
                line = line.strip()
                if line and not line.startswith("#"):
                    yield f"{path}:{no}", line


def build_records(paths: Sequence[str], workers: int | None = None):
    """Records plus a list of ``(file:line, message)`` failures."""
    items = list(read_lines(paths))
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_safe_record, items, chunksize=8))
    else:
        results = [_safe_record(x) for x in items]
    records: dict[str, GraphRecord] = {}
    errors = []
    for where, rec, err in results:
        if rec is None:
            log.error("%s: %s", where, err)
            errors.append((where, err))
            continue
        old = records.get(rec.id)
        if old is not None and old.encoding != rec.encoding:
            raise InvalidGraphError(f"record id collision between {old.encoding!r} and {rec.encoding!r}")
        records[rec.id] = rec
    ordered = sorted(records.values(), key=lambda r: (r.n, r.m, r.id))
    return ordered, errors


def ingest(paths: Sequence[str], out: str, workers: int | None = None):
    """Write the JSONL database; returns ``(record_count, errors)``."""
    records, errors = build_records(paths, workers)
    with open(out, "w", encoding="ascii", newline="\n") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")
    return len(records), errors


def load(path: str) -> list[GraphRecord]:
    with open(path, encoding="ascii") as fh:
        return [GraphRecord.from_json(line) for line in fh if line.strip()]


def default_grid(p_max: float = DEFAULT_P_MAX, step: float = DEFAULT_STEP) -> list[Fraction]:
    p_max, step = Fraction(str(p_max)), Fraction(str(step))
    out, p = [], step
    while p <= p_max:
        out.append(p)
        p += step
    return out


def percentile_rows(records: Sequence[GraphRecord], grid: Iterable | None = None):
    """Rows ``(p, id, unreliability, normalized_rank, girth)``; rank 0 is most reliable."""
    records = list(records)
    if not records:
        return []
    if len({(r.n, r.m) for r in records}) > 1:
        raise InvalidGraphError("percentiles need records sharing (n, m)")
    grid = default_grid() if grid is None else [Fraction(str(p)) for p in grid]
    polys = [r.poly for r in records]
    n = len(records)
    rows = []
    for p in grid:
        if not 0 <= p <= 1:
            raise InvalidGraphError(f"p={p} outside [0, 1]")
        vals = [evaluate(poly, p) for poly in polys]
        order = sorted(range(n), key=lambda i: (vals[i], records[i].id))
        ranks = [0.0] * n
        i = 0
        while i < n:
            j = i
            while j + 1 < n and vals[order[j + 1]] == vals[order[i]]:
                j += 1
            mean = (i + j) / 2
            for t in range(i, j + 1):
                ranks[order[t]] = mean
            i = j + 1
        for idx in sorted(range(n), key=lambda i: records[i].id):
            norm = ranks[idx] / (n - 1) if n > 1 else 0.0
            rows.append((float(p), records[idx].id, float(vals[idx]), norm, records[idx].girth))
    return rows


def percentiles(records: Sequence[GraphRecord], grid=None, out_csv: str | None = None) -> list:
    rows = percentile_rows(records, grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "id", "unreliability", "normalized_rank", "girth"])
    for p, rid, u, rank, g in rows:
        w.writerow([f"{p:.6g}", rid, repr(u), f"{rank:.6g}", "" if g is None else g])
    if out_csv is not None:
        with open(out_csv, "w", encoding="ascii", newline="") as fh:
            fh.write(buf.getvalue())
    return rows


def graphs_from_records(records: Sequence[GraphRecord]) -> list[Multigraph]:
    return [parse_graph(r.encoding) for r in records]
