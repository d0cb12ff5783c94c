"""Exact unreliability polynomials, comparators and reliability classes.

Coefficients are Python integers throughout; floats appear only in
:func:`evaluate` when the caller passes a float probability.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from . import _kernels
from .cutsets import disconnecting_masks_by_size
from .errors import InvalidGraphError, ResourceLimitError
from .graph import Multigraph

BRUTEFORCE_MAX_M = 28
EXACT_MAX_M = 60
DEFAULT_NODE_CAP = 5_000_000


@dataclass(frozen=True)
class UnrelPoly:
    """Unreliability polynomial in Bernstein form ``sum b_k p^k q^(m-k)``."""

    m: int
    bernstein: tuple[int, ...]

    def __post_init__(self):
        if len(self.bernstein) != self.m + 1:
            raise ValueError(f"expected {self.m + 1} coefficients, got {len(self.bernstein)}")

    @property
    def power(self) -> tuple[int, ...]:
        return tuple(bernstein_to_power(self.bernstein))

    def __call__(self, p):
        return evaluate(self, p)

    def __getitem__(self, k: int) -> int:
        return self.bernstein[k]


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def unrel_bruteforce(g: Multigraph) -> UnrelPoly:
    """Count disconnecting subsets of every size by scanning all 2^m subsets."""
    g.require_loopless()
    if g.m > BRUTEFORCE_MAX_M:
        raise ResourceLimitError(f"m={g.m} is too large for a 2^m scan; use unrel_exact")
    g.require_connected()
    counts = [0] * (g.m + 1)
    total = 1 << g.m
    step = 1 << 18
    for lo in range(0, total, step):
        masks = np.arange(lo, min(total, lo + step), dtype=np.uint64)
        flags = _kernels.connected_flags(g, masks)
        sizes = _kernels.popcount(masks[~flags])
        for k, c in enumerate(np.bincount(sizes, minlength=g.m + 1)):
            counts[k] += int(c)
    return UnrelPoly(g.m, tuple(counts))


# ---------------------------------------------------------------------------
# deletion-contraction with series/parallel reductions
# ---------------------------------------------------------------------------
#
# Each generalised edge carries a pair (w, z) of polynomials in x: w counts
# the ways the edge connects its endpoints, z the ways it does not, with x
# marking working original edges. The engine returns C[j], the number of
# connected spanning subgraphs with j edges.

_ONE = (1,)
_X = (0, 1)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return tuple(out)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _parallel(e1, e2):
    w1, z1 = e1
    w2, z2 = e2
    return _padd(_padd(_pmul(w1, w2), _pmul(w1, z2)), _pmul(z1, w2)), _pmul(z1, z2)


def _series(e1, e2):
    w1, z1 = e1
    w2, z2 = e2
    return _pmul(w1, w2), _padd(_pmul(w1, z2), _pmul(z1, w2))


class _Engine:
    def __init__(self, cap: int):
        self.memo: dict = {}
        self.cap = cap
        self.nodes = 0

    def solve(self, n: int, edges: dict) -> tuple:
        """``edges`` maps (u, v) with u < v to a (w, z) pair; vertices 0..n-1."""
        factor = _ONE
        adj: dict[int, dict[int, tuple]] = {v: {} for v in range(n)}
        for (u, v), wz in edges.items():
            adj[u][v] = wz
            adj[v][u] = wz
        # series and pendant reductions until none apply
        changed = True
        while changed and len(adj) > 1:
            changed = False
            for v in list(adj):
                if v not in adj or len(adj) == 1:
                    continue
                d = len(adj[v])
                if d == 0:
                    return ()
                if d == 1:
                    (u, wz), = adj[v].items()
                    factor = _pmul(factor, wz[0])
                    del adj[u][v]
                    del adj[v]
                    changed = True
                elif d == 2:
                    (a, e1), (b, e2) = adj[v].items()
                    del adj[a][v]
                    del adj[b][v]
                    del adj[v]
                    new = _series(e1, e2)
                    if b in adj[a]:
                        old = adj[a][b]
                        # the merged pair may fail to connect a and b in two ways,
                        # but the series chain still has to reach the middle vertex
                        new = _parallel(old, new)
                    adj[a][b] = new
                    adj[b][a] = new
                    changed = True
        if len(adj) == 1:
            return factor
        order = sorted(adj)
        index = {v: i for i, v in enumerate(order)}
        key = tuple(
            sorted((index[u], index[v], wz) for u in adj for v, wz in adj[u].items() if u < v)
        )
        key = (len(order), key)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._branch(len(order), {(index[u], index[v]): wz for u in adj
                                            for v, wz in adj[u].items() if u < v})
            self.memo[key] = hit
        return _pmul(factor, hit)

    def _branch(self, n: int, edges: dict) -> tuple:
        self.nodes += 1
        if self.nodes > self.cap:
            raise ResourceLimitError("deletion-contraction exceeded its node cap")
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        # branch on an edge at a minimum-degree vertex, towards its highest-degree neighbour
        v0 = min(range(n), key=lambda v: (deg[v], v))
        cands = [(u, v) for (u, v) in edges if v0 in (u, v)]
        e = max(cands, key=lambda uv: (deg[uv[0] + uv[1] - v0], -(uv[0] + uv[1])))
        w, z = edges[e]
        rest = {k: val for k, val in edges.items() if k != e}
        # deletion
        deleted = ()
        if _connected(n, rest):
            deleted = self.solve(n, rest)
        # contraction: merge e[1] into e[0]
        a, b = e
        merged: dict = {}
        for (u, v), wz in rest.items():
            u2 = a if u == b else u
            v2 = a if v == b else v
            u2, v2 = (u2, v2) if u2 < v2 else (v2, u2)
            u2 -= u2 > b
            v2 -= v2 > b
            k = (u2, v2)
            merged[k] = _parallel(merged[k], wz) if k in merged else wz
        # parallel copies of e are already folded into e, so no loops appear here
        contracted = self.solve(n - 1, merged)
        return _padd(_pmul(w, contracted), _pmul(z, deleted))


def _connected(n: int, edges) -> bool:
    if n <= 1:
        return True
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def connected_subgraph_counts(g: Multigraph, cap: int = DEFAULT_NODE_CAP) -> list[int]:
    """``C[j]`` = number of connected spanning subgraphs with ``j`` edges."""
    g.require_loopless()
    edges: dict = {}
    for u, v in g.edges:
        edges[(u, v)] = _parallel(edges[(u, v)], (_X, _ONE)) if (u, v) in edges else (_X, _ONE)
    if not _connected(g.n, edges):
        return [0] * (g.m + 1)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10_000))
    try:
        poly = _Engine(cap).solve(g.n, edges)
    finally:
        sys.setrecursionlimit(limit)
    out = [0] * (g.m + 1)
    for j, c in enumerate(poly):
        out[j] = c
    return out


def unrel_exact(g: Multigraph, cap: int = DEFAULT_NODE_CAP, max_m: int = EXACT_MAX_M) -> UnrelPoly:
    """Exact unreliability polynomial by deletion-contraction."""
    g.require_loopless()
    if g.m > max_m:
        raise ResourceLimitError(f"m={g.m} exceeds the exact-engine limit of {max_m}")
    g.require_connected()
    conn = connected_subgraph_counts(g, cap)
    m = g.m
    return UnrelPoly(m, tuple(comb(m, k) - conn[m - k] for k in range(m + 1)))


def unreliability(g: Multigraph, bruteforce_max_m: int = 16) -> UnrelPoly:
    """Pick the brute-force scan for small graphs, deletion-contraction otherwise."""
    if g.m <= bruteforce_max_m:
        return unrel_bruteforce(g)
    return unrel_exact(g)


def near_zero_prefix(g: Multigraph, max_k: int, **kw) -> tuple[int, ...]:
    """``b_0..b_max_k`` from cut enumeration alone."""
    return tuple(len(x) for x in disconnecting_masks_by_size(g, max_k, **kw))


# ---------------------------------------------------------------------------
# representations and evaluation
# ---------------------------------------------------------------------------

def bernstein_to_power(b: Sequence[int]) -> list[int]:
    """Coefficients ``a_0..a_m`` with ``U(p) = sum a_i p^i``."""
    m = len(b) - 1
    a = [0] * (m + 1)
    for k, bk in enumerate(b):
        if not bk:
            continue
        for i in range(k, m + 1):
            t = comb(m - k, i - k)
            a[i] += -bk * t if (i - k) % 2 else bk * t
    return a


def power_to_bernstein(a: Sequence[int], m: int | None = None) -> list[int]:
    if m is None:
        m = len(a) - 1
    if len(a) != m + 1:
        raise ValueError(f"power vector has length {len(a)}, expected {m + 1}")
    b = [0] * (m + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for k in range(i, m + 1):
            b[k] += ai * comb(m - i, k - i)
    return b


def evaluate(poly: UnrelPoly, p):
    """``U(p)``; exact for int/Fraction input, compensated float sum otherwise."""
    if isinstance(p, (int, Fraction)):
        p = Fraction(p)
        if not 0 <= p <= 1:
            raise ValueError("p must lie in [0, 1]")
        q = 1 - p
        return sum((bk * p ** k * q ** (poly.m - k) for k, bk in enumerate(poly.bernstein) if bk),
                   Fraction(0))
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    q = 1.0 - p
    terms = []
    for k, bk in enumerate(poly.bernstein):
        if bk:
            # log-space keeps huge binomial-sized coefficients finite
            if (k and p == 0.0) or (poly.m - k and q == 0.0):
                continue
            lt = math.log(bk)
            if k:
                lt += k * math.log(p)
            if poly.m - k:
                lt += (poly.m - k) * math.log(q)
            terms.append(math.exp(lt))
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# comparators and classes
# ---------------------------------------------------------------------------

def _coeffs(x) -> tuple[int, ...]:
    return tuple(x.bernstein) if isinstance(x, UnrelPoly) else tuple(x)


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def compare_near_zero(x, y) -> int:
    """-1 if ``x`` is more reliable near zero, 0 if equal, 1 otherwise."""
    a, b = _coeffs(x), _coeffs(y)
    if len(a) != len(b):
        raise ValueError("polynomials have different edge counts")
    return _cmp(a[1:], b[1:])


def compare_near_one(x, y) -> int:
    a, b = _coeffs(x), _coeffs(y)
    if len(a) != len(b):
        raise ValueError("polynomials have different edge counts")
    return _cmp(a[:0:-1], b[:0:-1])


@dataclass
class ClassFiltration:
    order: str
    levels: list[tuple[int, tuple]] = field(default_factory=list)

    @property
    def final(self) -> tuple:
        return self.levels[-1][1]

    def survivors(self, k: int) -> tuple:
        return self.levels[k][1]


def class_filtration(items, order: str = "near_zero", ids=None, max_level: int | None = None,
                     coefficient_fn=None) -> ClassFiltration:
    """Sequential minimisation of coefficients over a pool of same-size graphs.

    ``items`` may be graphs, :class:`UnrelPoly` objects or coefficient prefixes.
    Level ``k`` keeps the survivors of level ``k-1`` with the smallest
    ``b_k`` (near zero) or ``b_{m-k}`` (near one).
    """
    order = order.replace("-", "_")
    if order not in ("near_zero", "near_one"):
        raise ValueError(f"unknown order {order!r}")
    items = list(items)
    if ids is None:
        ids = list(range(len(items)))
    if not items:
        raise InvalidGraphError("empty pool")
    graphs = [x for x in items if isinstance(x, Multigraph)]
    if graphs and len({(g.n, g.m) for g in graphs}) > 1:
        raise InvalidGraphError("all graphs in a class filtration must share (n, m)")
    fn = coefficient_fn or unreliability
    coeffs = [_coeffs(fn(x)) if isinstance(x, Multigraph) else _coeffs(x) for x in items]
    if order == "near_one" and len({len(c) for c in coeffs}) > 1:
        raise InvalidGraphError("near-one filtration needs full coefficient vectors")
    m = len(coeffs[0]) - 1
    top = m if max_level is None else min(max_level, m)
    if any(len(c) - 1 < top for c in coeffs):
        raise InvalidGraphError("coefficient prefixes shorter than the requested level")
    alive = list(range(len(items)))
    out = ClassFiltration(order, [(0, tuple(ids[i] for i in alive))])
    for k in range(1, top + 1):
        idx = k if order == "near_zero" else len(coeffs[0]) - 1 - k
        best = min(coeffs[i][idx] for i in alive)
        alive = [i for i in alive if coeffs[i][idx] == best]
        out.levels.append((k, tuple(ids[i] for i in alive)))
    return out


def verify_coefficient_comparison(x, y, samples: int = 40) -> bool:
    """Numerical sanity check that ``x <= y`` near zero on ``p = 2^-j``.

    Returns True when, past the last grid point where ``x`` exceeds ``y``,
    a strict improvement is observed; identical polynomials pass vacuously.
    """
    px = x if isinstance(x, UnrelPoly) else UnrelPoly(len(x) - 1, tuple(x))
    py = y if isinstance(y, UnrelPoly) else UnrelPoly(len(y) - 1, tuple(y))
    if px.bernstein == py.bernstein:
        return True
    last_bad = 0
    strict_after = False
    for j in range(1, samples + 1):
        p = Fraction(1, 2 ** j)
        ux, uy = evaluate(px, p), evaluate(py, p)
        if ux > uy:
            last_bad = j
            strict_after = False
        elif ux < uy:
            strict_after = True
    return strict_after and last_bad < samples

eval = evaluate  # name used by the public API; shadows the builtin only inside this module
