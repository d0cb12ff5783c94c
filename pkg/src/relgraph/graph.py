"""Multigraph carrier, graph6/sparse6 codecs and elementary metrics."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import GraphFormatError, InvalidGraphError

INF = math.inf

# mask-based kernels store edge subsets in a 64-bit word
MAX_MASK_EDGES = 63


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph on vertices ``0..n-1``.

    Edge identity is the position in ``edges``; each pair is stored with
    ``u <= v``. Parallel edges and loops are representable, but analysis
    routines refuse loops.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidGraphError(f"vertex count must be >= 1, got {self.n}")
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def redundancy(self) -> int:
        return self.m - (self.n - 1)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex (a loop appears once)."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            if v != u:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @property
    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    @property
    def is_simple(self) -> bool:
        return not self.has_loops and len(set(self.edges)) == self.m

    def regular_degree(self) -> int | None:
        d = set(self.degrees)
        return d.pop() if len(d) == 1 else None

    def other_end(self, e: int, u: int) -> int:
        a, b = self.edges[e]
        return b if a == u else a

    def is_connected(self, removed_mask: int = 0) -> bool:
        return connected_after_removal(self, removed_mask)

    def without_edges(self, ids) -> Multigraph:
        drop = set(ids)
        return Multigraph(self.n, tuple(e for i, e in enumerate(self.edges) if i not in drop))

    def edge_key(self) -> tuple:
        return (self.n, tuple(sorted(self.edges)))

    def require_loopless(self) -> None:
        if self.has_loops:
            raise InvalidGraphError("loops are not supported by analysis operations")

    def require_connected(self) -> None:
        if not self.is_connected():
            raise InvalidGraphError("graph is not connected")

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, m={self.m})"


def connected_after_removal(g: Multigraph, removed_mask: int = 0) -> bool:
    """True iff ``g`` minus the edges in ``removed_mask`` is connected."""
    if g.n == 1:
        return True
    seen = 1
    stack = [0]
    inc = g.incidence
    edges = g.edges
    while stack:
        u = stack.pop()
        for e in inc[u]:
            if removed_mask >> e & 1:
                continue
            a, b = edges[e]
            w = b if a == u else a
            if not seen >> w & 1:
                seen |= 1 << w
                stack.append(w)
    return seen == (1 << g.n) - 1


def components_after_removal(g: Multigraph, removed_mask: int = 0) -> list[int]:
    """Vertex bitmasks of the components left after removing edges."""
    comp = []
    unseen = (1 << g.n) - 1
    inc, edges = g.incidence, g.edges
    while unseen:
        s = (unseen & -unseen).bit_length() - 1
        seen = 1 << s
        stack = [s]
        while stack:
            u = stack.pop()
            for e in inc[u]:
                if removed_mask >> e & 1:
                    continue
                a, b = edges[e]
                w = b if a == u else a
                if not seen >> w & 1:
                    seen |= 1 << w
                    stack.append(w)
        comp.append(seen)
        unseen &= ~seen
    return comp


# ---------------------------------------------------------------------------
# graph6 / sparse6
# ---------------------------------------------------------------------------

def _strip(text: str, header: str) -> tuple[str, int]:
    text = text.strip("\r\n")
    if text.startswith(header):
        return text[len(header):], len(header)
    return text, 0


def _decode_n(data: str, base: int) -> tuple[int, int]:
    """Return (n, number of characters consumed)."""
    vals = [ord(c) - 63 for c in data[:8]]
    if not vals:
        raise GraphFormatError("missing vertex count", base)
    for i, v in enumerate(vals):
        if not 0 <= v <= 63:
            raise GraphFormatError(f"character {data[i]!r} out of range", base + i)
    if vals[0] < 63:
        return vals[0], 1
    if len(vals) >= 2 and vals[1] < 63:
        if len(vals) < 4:
            raise GraphFormatError("truncated vertex count", base + len(vals))
        return (vals[1] << 12) | (vals[2] << 6) | vals[3], 4
    if len(vals) < 8:
        raise GraphFormatError("truncated vertex count", base + len(vals))
    n = 0
    for v in vals[2:8]:
        n = (n << 6) | v
    return n, 8


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return chr(126) * 2 + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def _bits_of(data: str, base: int):
    for i, ch in enumerate(data):
        v = ord(ch) - 63
        if not 0 <= v <= 63:
            raise GraphFormatError(f"character {ch!r} out of range", base + i)
        for s in range(5, -1, -1):
            yield (v >> s) & 1


def parse_graph6(text: str) -> Multigraph:
    """Decode one graph6 line (an optional ``>>graph6<<`` header is accepted)."""
    data, base = _strip(text, ">>graph6<<")
    if data.startswith(":") or data.startswith("&"):
        raise GraphFormatError("not a graph6 line", base)
    n, used = _decode_n(data, base)
    if n < 1:
        raise GraphFormatError("graph6 with zero vertices is not supported", base)
    body = data[used:]
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) < need:
        raise GraphFormatError(f"expected {need} data bytes, found {len(body)}", base + used + len(body))
    if len(body) > need:
        raise GraphFormatError("trailing characters after graph6 data", base + used + need)
    bits = list(_bits_of(body, base + used))
    if any(bits[nbits:]):
        raise GraphFormatError("nonzero padding bits", base + used + need - 1)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Multigraph(n, tuple(edges))


def to_graph6(g: Multigraph) -> str:
    if not g.is_simple:
        raise InvalidGraphError("graph6 encodes simple graphs only; use sparse6")
    present = set(g.edges)
    bits = [1 if (i, j) in present else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [_encode_n(g.n)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def _sparse6_k(n: int) -> int:
    k = 1
    while (1 << k) < n:
        k += 1
    return k


def parse_sparse6(text: str) -> Multigraph:
    """Decode one sparse6 line; parallel edges and loops are preserved."""
    data, base = _strip(text, ">>sparse6<<")
    if not data.startswith(":"):
        raise GraphFormatError("sparse6 line must start with ':'", base)
    n, used = _decode_n(data[1:], base + 1)
    if n < 1:
        raise GraphFormatError("sparse6 with zero vertices is not supported", base + 1)
    start = base + 1 + used
    bits = list(_bits_of(data[1 + used:], start))
    k = _sparse6_k(n)
    edges = []
    v = 0
    pos = 0
    while pos + 1 + k <= len(bits):
        b = bits[pos]
        x = 0
        for t in bits[pos + 1:pos + 1 + k]:
            x = (x << 1) | t
        pos += 1 + k
        if b:
            v += 1
        if v >= n:
            break
        if x > v:
            v = x
        else:
            edges.append((x, v))
    return Multigraph(n, tuple(edges))


def to_sparse6(g: Multigraph) -> str:
    n = g.n
    k = _sparse6_k(n)

    def enc(x):
        return [(x >> (k - 1 - i)) & 1 for i in range(k)]

    bits: list[int] = []
    cur = 0
    for u, v in sorted((v, u) for u, v in g.edges):
        # (u, v) here is (larger, smaller)
        if u == cur:
            bits += [0] + enc(v)
        elif u == cur + 1:
            cur = u
            bits += [1] + enc(v)
        else:
            cur = u
            bits += [1] + enc(u) + [0] + enc(v)
    pad = -len(bits) % 6
    if k < 6 and n == (1 << k) and pad >= k and cur < n - 1:
        bits.append(0)
        pad = -len(bits) % 6
    bits += [1] * pad
    out = [":", _encode_n(n)]
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def parse_graph(text: str) -> Multigraph:
    """Dispatch on the line prefix: sparse6 lines start with ':'."""
    stripped = text.strip()
    if stripped.startswith(">>sparse6<<") or stripped.startswith(":"):
        return parse_sparse6(stripped)
    return parse_graph6(stripped)


def encode(g: Multigraph) -> str:
    """graph6 for simple graphs, sparse6 otherwise."""
    return to_graph6(g) if g.is_simple else to_sparse6(g)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def girth(g: Multigraph) -> float | int:
    """Length of a shortest cycle; loops give 1, parallel edges give 2."""
    if g.has_loops:
        return 1
    if len(set(g.edges)) < g.m:
        return 2
    best = INF
    inc, edges = g.incidence, g.edges
    for s in range(g.n):
        dist = {s: 0}
        via = {s: -1}
        q = deque([s])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for e in inc[u]:
                if e == via[u]:
                    continue
                a, b = edges[e]
                w = b if a == u else a
                if w not in dist:
                    dist[w] = dist[u] + 1
                    via[w] = e
                    q.append(w)
                else:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def _max_flow(g: Multigraph, s: int, t: int, limit: int) -> int:
    cap: dict[tuple[int, int], int] = {}
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in g.edges:
        if u == v:
            continue
        cap[u, v] = cap.get((u, v), 0) + 1
        cap[v, u] = cap.get((v, u), 0) + 1
        adj[u].add(v)
        adj[v].add(u)
    flow = 0
    while flow < limit:
        parent = {s: None}
        q = deque([s])
        while q and t not in parent:
            u = q.popleft()
            for w in adj[u]:
                if w not in parent and cap[u, w] > 0:
                    parent[w] = u
                    q.append(w)
        if t not in parent:
            break
        w = t
        while parent[w] is not None:
            u = parent[w]
            cap[u, w] -= 1
            cap[w, u] += 1
            w = u
        flow += 1
    return flow


def edge_connectivity(g: Multigraph) -> int:
    """Size of a smallest disconnecting edge set (0 if disconnected)."""
    if g.n == 1:
        return 0
    if not g.is_connected():
        return 0
    best = min(d - 2 * sum(1 for e in g.incidence[v] if g.edges[e][0] == g.edges[e][1])
               for v, d in enumerate(g.degrees))
    for t in range(1, g.n):
        best = min(best, _max_flow(g, 0, t, best))
    return best


def bfs_distances(g: Multigraph, sources) -> list[float]:
    dist = [INF] * g.n
    q = deque()
    for s in sources:
        if dist[s] != 0:
            dist[s] = 0
            q.append(s)
    while q:
        u = q.popleft()
        for w in g.neighbors[u]:
            if dist[w] == INF:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def edge_distance(g: Multigraph, e1: int, e2: int) -> int | float:
    """1 + minimum vertex distance between endpoints; edges sharing a vertex are at 1."""
    for e in (e1, e2):
        if not 0 <= e < g.m:
            raise InvalidGraphError(f"edge id {e} out of range")
    if e1 == e2:
        return 0
    dist = bfs_distances(g, g.edges[e1])
    return 1 + min(dist[x] for x in g.edges[e2])


def edge_distance_matrix(g: Multigraph) -> list[list[int | float]]:
    vd = [bfs_distances(g, [v]) for v in range(g.n)]
    out = [[0] * g.m for _ in range(g.m)]
    for i, (a, b) in enumerate(g.edges):
        for j in range(i + 1, g.m):
            c, d = g.edges[j]
            dd = 1 + min(vd[a][c], vd[a][d], vd[b][c], vd[b][d])
            out[i][j] = out[j][i] = dd
    return out


@dataclass(frozen=True)
class GraphMetrics:
    n: int
    m: int
    girth: float | int
    edge_connectivity: int
    min_degree: int
    max_degree: int
    is_k_regular: int | None
    redundancy: int
    is_simple: bool = field(default=True)


def metrics(g: Multigraph) -> GraphMetrics:
    return GraphMetrics(
        n=g.n,
        m=g.m,
        girth=girth(g),
        edge_connectivity=edge_connectivity(g),
        min_degree=min(g.degrees),
        max_degree=max(g.degrees),
        is_k_regular=g.regular_degree(),
        redundancy=g.redundancy,
        is_simple=g.is_simple,
    )


def girth6_family(n: int) -> Multigraph:
    """Cycle on ``n`` vertices plus chords ``{i, i+5 mod n}`` for even ``i``."""
    if n % 2 or n < 14:
        raise InvalidGraphError("girth6_family needs an even n >= 14")
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(i, (i + 5) % n) for i in range(0, n, 2)]
    return Multigraph(n, tuple(edges))


def cycle_graph(n: int) -> Multigraph:
    if n == 1:
        return Multigraph(1, ((0, 0),))
    if n == 2:
        return Multigraph(2, ((0, 1), (0, 1)))
    return Multigraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def petersen_graph() -> Multigraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Multigraph(10, tuple(outer + spokes + inner))


def heawood_graph() -> Multigraph:
    return girth6_family(14)


def wagner_graph() -> Multigraph:
    """Moebius ladder on 8 vertices: rim cycle 0..7 plus the 4 long diagonals."""
    rim = [(i, (i + 1) % 8) for i in range(8)]
    chords = [(i, i + 4) for i in range(4)]
    return Multigraph(8, tuple(rim + chords))


def theta_graph() -> Multigraph:
    """Two vertices joined by three parallel edges."""
    return Multigraph(2, ((0, 1), (0, 1), (0, 1)))


def prism_graph() -> Multigraph:
    return Multigraph(6, ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)))
