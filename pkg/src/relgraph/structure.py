"""Structure graphs of sparse graphs, marked structures and gamma tables.

A sparse graph is described by its structure graph (degree-2 vertices
suppressed) and the length of each chain. With chain lengths ``c`` and
``c + 1`` the unreliability splits into a part where every chain fails at
most once, counted through the structure graph's disconnecting chain sets,
and a part where some chain fails twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .cutsets import disconnecting_of_size, ids_to_mask, smallest_nontrivial_cut
from .errors import GraphFormatError, InvalidGraphError, ResourceLimitError
from .graph import Multigraph, edge_distance_matrix, parse_sparse6, to_sparse6

GAMMA_MAX_CHAINS = 27


# ---------------------------------------------------------------------------
# distillation and subdivision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Distillation:
    structure: Multigraph
    chain_lengths: tuple[int, ...]
    origin_labels: tuple[tuple[int, ...], ...]
    structure_vertices: tuple[int, ...] = ()

    @property
    def lengths(self) -> tuple[int, ...]:
        return self.chain_lengths


def distill(g: Multigraph) -> Distillation:
    """Suppress degree-2 vertices; chains are numbered by their smallest edge id."""
    g.require_connected()
    deg = g.degrees
    if min(deg) < 2:
        raise InvalidGraphError("distillation needs minimum degree 2")
    if max(deg) < 3:
        raise InvalidGraphError("a cycle has no structure vertex to distill onto")
    hubs = [v for v in range(g.n) if deg[v] != 2]
    index = {v: i for i, v in enumerate(hubs)}
    used = [False] * g.m
    chains = []
    for start in hubs:
        for e0 in g.incidence[start]:
            if used[e0]:
                continue
            path, ids = [start], []
            e, u = e0, start
            while True:
                used[e] = True
                ids.append(e)
                w = g.other_end(e, u)
                path.append(w)
                if deg[w] != 2:
                    break
                e, u = next(f for f in g.incidence[w] if not used[f]), w
            chains.append((min(ids), path, ids))
    chains.sort()
    edges, lengths, labels = [], [], []
    for _, path, ids in chains:
        a, b = index[path[0]], index[path[-1]]
        if a > b:
            path = path[::-1]
            a, b = b, a
        edges.append((a, b))
        lengths.append(len(ids))
        labels.append(tuple(path))
    return Distillation(Multigraph(len(hubs), tuple(edges)), tuple(lengths), tuple(labels), tuple(hubs))


def subdivide(s: Multigraph, lengths: Mapping[int, int] | Sequence[int]) -> Multigraph:
    """Replace edge ``e`` by a path of ``lengths[e]`` edges; new vertices follow ``s``'s."""
    lv = [lengths[e] for e in range(s.m)]
    if any(x < 1 for x in lv):
        raise InvalidGraphError("chain lengths must be at least 1")
    n = s.n
    edges = []
    for (u, v), length in zip(s.edges, lv):
        prev = u
        for _ in range(length - 1):
            edges.append((prev, n))
            prev = n
            n += 1
        edges.append((prev, v))
    return Multigraph(n, tuple(edges))


def c_lambda(n: int, r: int) -> tuple[int, int]:
    """Chain length ``c`` and long-chain count for ``n`` vertices and redundancy ``r``."""
    if r < 2:
        raise InvalidGraphError("redundancy must be at least 2")
    ns, chains = 2 * (r - 1), 3 * (r - 1)
    if n < ns:
        raise InvalidGraphError(f"n={n} is below the {ns} structure vertices needed for r={r}")
    q, lam = divmod(n - ns, chains)
    return q + 1, lam


def u2_poly(lengths: Sequence[int], m: int | None = None) -> tuple[int, ...]:
    """Bernstein coefficients of the probability that some chain fails twice.

    ``b_k = C(m, k) - e_k(lengths)`` with ``e_k`` the elementary symmetric sum.
    """
    lengths = list(lengths)
    total = sum(lengths)
    if m is None:
        m = total
    if m != total:
        raise InvalidGraphError(f"chain lengths sum to {total}, not m={m}")
    e = [1] + [0] * len(lengths)
    for x in lengths:
        for k in range(len(lengths), 0, -1):
            e[k] += e[k - 1] * x
    return tuple(comb(m, k) - (e[k] if k < len(e) else 0) for k in range(m + 1))


# ---------------------------------------------------------------------------
# marked structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MarkedStructure:
    structure: Multigraph
    long_chains: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "long_chains", frozenset(int(e) for e in self.long_chains))
        s = self.structure
        if any(not 0 <= e < s.m for e in self.long_chains):
            raise InvalidGraphError("long chain id out of range")
        if s.regular_degree() != 3 or s.has_loops or not s.is_connected():
            raise InvalidGraphError("a marked structure must be a connected loopless cubic multigraph")

    @property
    def lam(self) -> int:
        return len(self.long_chains)

    @property
    def r(self) -> int:
        return self.structure.redundancy

    @property
    def mask(self) -> int:
        return ids_to_mask(self.long_chains)

    def lengths(self, c: int) -> tuple[int, ...]:
        return tuple(c + 1 if e in self.long_chains else c for e in range(self.structure.m))

    def to_line(self) -> str:
        """``<sparse6> <ids>``; edge ids refer to the order the sparse6 line decodes to."""
        line = to_sparse6(self.structure)
        back = parse_sparse6(line)
        remap = _edge_map(self.structure, back)
        ids = sorted(remap[e] for e in self.long_chains)
        return line + (" " + ",".join(map(str, ids)) if ids else "")

    @classmethod
    def from_line(cls, line: str) -> MarkedStructure:
        parts = line.strip().split()
        if not parts or len(parts) > 2:
            raise GraphFormatError("expected '<sparse6> [id,id,...]'")
        s = parse_sparse6(parts[0])
        ids = []
        if len(parts) == 2:
            try:
                ids = [int(x) for x in parts[1].split(",") if x]
            except ValueError as exc:
                raise GraphFormatError(f"bad long-chain list {parts[1]!r}") from exc
        return cls(s, frozenset(ids))


def _edge_map(a: Multigraph, b: Multigraph) -> dict[int, int]:
    pool: dict[tuple[int, int], list[int]] = {}
    for i, e in enumerate(b.edges):
        pool.setdefault(e, []).append(i)
    out = {}
    for i, e in enumerate(a.edges):
        out[i] = pool[e].pop(0)
    return out


# ---------------------------------------------------------------------------
# disconnecting chain sets
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8192)
def cuts_of_size(s: Multigraph, k: int) -> np.ndarray:
    """Disconnecting chain subsets of ``s`` with exactly ``k`` chains (read-only uint64)."""
    if not s.is_connected():
        raise InvalidGraphError("structure graph is not connected")
    a = disconnecting_of_size(s, k, cap=1 << 34)
    a.setflags(write=False)
    return a


def chain_cuts(s: Multigraph, max_k: int) -> tuple[np.ndarray, ...]:
    """Disconnecting chain subsets of ``s`` by size ``0..max_k``."""
    return tuple(cuts_of_size(s, k) for k in range(min(max_k, s.m) + 1))


def _resolve_max_k(s: Multigraph, max_k: int | None) -> int:
    if max_k is None:
        if s.m > GAMMA_MAX_CHAINS:
            raise ResourceLimitError(f"{s.m} chains exceed the full-scan cap of {GAMMA_MAX_CHAINS}")
        return s.m
    return min(max_k, s.m)


def overlap_histogram(cuts: np.ndarray, marks: np.ndarray, k: int) -> np.ndarray:
    """``H[i, l]`` = number of cuts sharing exactly ``l`` chains with marking ``i``."""
    marks = np.asarray(marks, dtype=np.uint64)
    out = np.zeros((marks.shape[0], k + 1), dtype=np.int64)
    if cuts.shape[0] == 0 or marks.shape[0] == 0:
        return out
    step = max(1, (1 << 22) // cuts.shape[0])
    for lo in range(0, marks.shape[0], step):
        blk = marks[lo:lo + step]
        ov = _kernels.popcount(blk[:, None] & cuts[None, :])
        for ell in range(k + 1):
            out[lo:lo + step, ell] = (ov == ell).sum(axis=1)
    return out


def _binom_matrix(k: int) -> np.ndarray:
    return np.array([[comb(ell, j) for j in range(k + 1)] for ell in range(k + 1)], dtype=np.int64)


def gamma_rows(cuts_k: np.ndarray, marks: np.ndarray, k: int) -> np.ndarray:
    """Row ``k`` of the gamma table for many markings at once (int64)."""
    return overlap_histogram(cuts_k, marks, k) @ _binom_matrix(k)


@dataclass(frozen=True)
class GammaTable:
    r: int
    gamma: tuple[tuple[int, ...], ...]
    max_k: int = 0

    def __getitem__(self, kj):
        k, j = kj
        return self.gamma[k][j]

    @property
    def flat_kj(self) -> tuple[int, ...]:
        return tuple(x for row in self.gamma for x in row)

    @property
    def flat_jk(self) -> tuple[int, ...]:
        top = len(self.gamma) - 1
        return tuple(self.gamma[k][j] for j in range(top + 1) for k in range(j, top + 1))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] if j < len(row) else 0 for row in self.gamma)


def gamma_table_for(s: Multigraph, long_mask: int, max_k: int | None = None) -> GammaTable:
    """gamma[k][j] = sum over disconnecting k-sets X of C(|X & L|, j)."""
    top = _resolve_max_k(s, max_k)
    cuts = chain_cuts(s, top)
    rows = []
    for k in range(top + 1):
        ov = _kernels.popcount(cuts[k] & np.uint64(long_mask)) if cuts[k].size else np.zeros(0, int)
        hist = np.bincount(ov.astype(np.int64), minlength=k + 1)
        rows.append(tuple(sum(int(hist[ell]) * comb(ell, j) for ell in range(j, k + 1))
                          for j in range(k + 1)))
    return GammaTable(s.redundancy, tuple(rows), top)


def gamma_table(ms: MarkedStructure, max_k: int | None = None) -> GammaTable:
    return gamma_table_for(ms.structure, ms.mask, max_k)


def b1_coeffs(gt: GammaTable, c: int) -> tuple[int, ...]:
    """``b_k^(1) = sum_j gamma[k][j] c^(k-j)``."""
    if c < 1:
        raise InvalidGraphError("chain length c must be at least 1")
    return tuple(sum(g * c ** (k - j) for j, g in enumerate(row)) for k, row in enumerate(gt.gamma))


def u1_poly(gt: GammaTable, c: int, m: int) -> tuple[int, ...]:
    """Bernstein coefficients over ``m`` edges of the single-failure-per-chain part."""
    b = list(b1_coeffs(gt, c))
    if len(b) > m + 1:
        raise InvalidGraphError("gamma table is larger than m")
    return tuple(b + [0] * (m + 1 - len(b)))


def marking_of(g: Multigraph) -> tuple[Distillation, int, frozenset[int]]:
    """Distill ``g`` and read off ``c`` and the long chains (length ``c + 1``)."""
    d = distill(g)
    c = min(d.chain_lengths)
    if max(d.chain_lengths) > c + 1:
        raise InvalidGraphError("chain lengths differ by more than one")
    return d, c, frozenset(e for e, x in enumerate(d.chain_lengths) if x == c + 1)


def decompose_check(g: Multigraph, poly=None) -> bool:
    """Exact check that the unreliability of ``g`` equals u1 + u2 coefficientwise."""
    from .reliability import unreliability

    d, c, longs = marking_of(g)
    gt = gamma_table_for(d.structure, ids_to_mask(longs))
    u1 = u1_poly(gt, c, g.m)
    u2 = u2_poly(d.chain_lengths, g.m)
    if poly is None:
        poly = unreliability(g)
    return tuple(a + b for a, b in zip(u1, u2)) == tuple(poly.bernstein)


# ---------------------------------------------------------------------------
# obstruction parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionProfile:
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    mu: tuple[int, ...]
    rho: tuple[tuple[int, ...], ...]
    rank: tuple[int, ...]
    g_free: int
    mu_all: dict = field(default_factory=dict)


def _require_cubic(s: Multigraph) -> None:
    if s.regular_degree() != 3 or s.has_loops:
        raise InvalidGraphError("obstruction parameters need a loopless cubic structure")


def structure_g_free(s: Multigraph) -> int:
    """Size of the smallest non-trivial cut of a cubic structure (m + 1 if none)."""
    return smallest_nontrivial_cut(s)


def rho_vectors(s: Multigraph, max_k: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Per chain, the number of disconnecting k-sets containing it for 3 <= k <= max_k."""
    top = _resolve_max_k(s, max_k)
    cuts = chain_cuts(s, top)
    out = [[0] * max(0, top - 2) for _ in range(s.m)]
    for k in range(3, top + 1):
        arr = cuts[k]
        for e in range(s.m):
            out[e][k - 3] = int(np.count_nonzero(arr & np.uint64(1 << e)))
    return tuple(tuple(x) for x in out)


def dense_rank(vectors) -> tuple[int, ...]:
    levels = {v: i for i, v in enumerate(sorted(set(vectors)))}
    return tuple(levels[v] for v in vectors)


def alpha_counts(s: Multigraph, long_mask: int) -> tuple[int, ...]:
    alpha = [0] * 4
    for v in range(s.n):
        alpha[min(3, sum(1 for e in s.incidence[v] if long_mask >> e & 1))] += 1
    return tuple(alpha)


def beta_counts(s: Multigraph, long_mask: int) -> tuple[int, ...]:
    """Chains by the number of long chains among the four adjacent chain ends."""
    beta = [0] * 5
    for e, (u, v) in enumerate(s.edges):
        cnt = 0
        for x in (u, v):
            cnt += sum(1 for f in s.incidence[x] if f != e and long_mask >> f & 1)
        beta[min(4, cnt)] += 1
    return tuple(beta)


def separation_counts(dist, long_ids) -> dict[int, int]:
    out: dict[int, int] = {}
    ids = sorted(long_ids)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            d = dist[a][b]
            out[d] = out.get(d, 0) + 1
    return out


def obstruction_profile(ms: MarkedStructure, g_free: int | None = None,
                        max_k: int | None = None) -> ObstructionProfile:
    s = ms.structure
    _require_cubic(s)
    if g_free is None:
        g_free = structure_g_free(s)
    mask = ms.mask
    dist = edge_distance_matrix(s)
    sep = separation_counts(dist, ms.long_chains)
    mu = tuple(sep.get(d, 0) for d in range(1, g_free - 2))
    rho = rho_vectors(s, max_k)
    return ObstructionProfile(
        alpha=alpha_counts(s, mask),
        beta=beta_counts(s, mask),
        mu=mu,
        rho=rho,
        rank=dense_rank(rho),
        g_free=g_free,
        mu_all=dict(sorted(sep.items())),
    )


def b3_closed_form(ms: MarkedStructure, c: int) -> int:
    """``n c^3 + 2 lambda c^2 + (alpha_2 + 3 alpha_3) c + alpha_3`` for trivial-3-cut structures."""
    a = alpha_counts(ms.structure, ms.mask)
    return ms.structure.n * c ** 3 + 2 * ms.lam * c ** 2 + (a[2] + 3 * a[3]) * c + a[3]


__all__ = [
    "Distillation", "distill", "subdivide", "c_lambda", "u2_poly", "MarkedStructure",
    "GammaTable", "gamma_table", "gamma_table_for", "b1_coeffs", "u1_poly", "decompose_check",
    "ObstructionProfile", "obstruction_profile", "rho_vectors", "dense_rank", "chain_cuts",
    "b3_closed_form", "marking_of",
]
