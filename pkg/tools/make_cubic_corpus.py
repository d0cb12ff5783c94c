#!/usr/bin/env python3
"""Regenerate the connected cubic graph fixtures under tests/data.

Cubic multigraphs on n+2 vertices are produced from those on n vertices
by edge insertion (subdivide two edges, join the two new vertices),
starting from the two cubic multigraphs on 2 vertices, and deduplicated
with networkx isomorphism tests inside buckets of equal closed-walk counts. Multigraph intermediates are needed:
some simple cubic graphs only reduce to multigraphs. The simple members
are written out and their counts checked against the known totals of
connected cubic graphs.

    python tools/make_cubic_corpus.py --max-n 14 --out tests/data
"""

import argparse
import itertools
import os
import sys
from collections import defaultdict

import networkx as nx
import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
from relgraph.graph import Multigraph, to_graph6  # noqa: E402

KNOWN = {4: 1, 6: 2, 8: 5, 10: 19, 12: 85, 14: 509, 16: 4060}


def insertions(G):
    n = G.number_of_nodes()
    edges = list(G.edges(keys=True))
    for i, j in itertools.combinations_with_replacement(range(len(edges)), 2):
        H = G.copy()
        a, b = n, n + 1
        e1, e2 = edges[i], edges[j]
        H.remove_edge(*e1)
        if i == j:
            H.add_edges_from([(e1[0], a), (a, b), (a, b), (b, e1[1])])
        else:
            H.remove_edge(*e2)
            H.add_edges_from([(e1[0], a), (a, e1[1]), (e2[0], b), (b, e2[1]), (a, b)])
        yield H


def is_simple(G):
    return nx.number_of_selfloops(G) == 0 and G.number_of_edges() == nx.Graph(G).number_of_edges()


def invariant(G):
    # colour refinement cannot split regular graphs, so bucket by the
    # per-vertex closed walk counts of lengths 2..8 instead
    a = nx.to_numpy_array(G, nodelist=sorted(G.nodes()), multigraph_weight=sum)
    walks, p = [], a.copy()
    for _ in range(7):
        p = p @ a
        walks.append(np.rint(np.diag(p)).astype(np.int64))
    return (nx.number_of_selfloops(G), nx.Graph(G).number_of_edges(),
            tuple(sorted(zip(*(w.tolist() for w in walks)))))


def next_level(graphs, simple_only=False):
    buckets = defaultdict(list)
    for G in graphs:
        for H in insertions(G):
            if simple_only and not is_simple(H):
                continue
            key = invariant(H)
            if not any(nx.is_isomorphic(H, K) for K in buckets[key]):
                buckets[key].append(H)
    return [H for group in buckets.values() for H in group]


def canonical_line(G):
    # relabel by a deterministic BFS order so output is stable across runs
    order = sorted(G.nodes(), key=lambda v: (-nx.eccentricity(G, v), v))
    relabel = {v: i for i, v in enumerate(nx.bfs_tree(G, order[0]).nodes())}
    H = nx.relabel_nodes(G, relabel)
    return to_graph6(Multigraph(H.number_of_nodes(), tuple(H.edges())))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=14)
    ap.add_argument("--out", default=os.path.join("tests", "data"))
    args = ap.parse_args(argv)

    theta = nx.MultiGraph([(0, 1)] * 3)
    dumbbell = nx.MultiGraph([(0, 0), (0, 1), (1, 1)])
    level = [theta, dumbbell]
    n = 2
    while n <= args.max_n:
        simple = [nx.Graph(G) for G in level if is_simple(G)]
        if n in KNOWN and len(simple) != KNOWN[n]:
            raise SystemExit(f"n={n}: generated {len(simple)}, expected {KNOWN[n]}")
        if simple:
            lines = sorted(canonical_line(G) for G in simple)
            path = os.path.join(args.out, f"cubic{n}.g6")
            with open(path, "w") as fh:
                fh.write("\n".join(lines) + "\n")
            print(f"n={n}: {len(lines)} simple of {len(level)} multigraphs -> {path}", flush=True)
        if n + 2 <= args.max_n:
            level = next_level(level, simple_only=(n + 2 > args.max_n - 2))
        n += 2


if __name__ == "__main__":
    main()
