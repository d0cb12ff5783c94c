"""Spanning-tree counts, tree balance and the tree-number polynomial in c."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Mapping, Sequence

from .errors import InvalidGraphError, ResourceLimitError
from .graph import Multigraph

TREE_POLY_MAX_EDGES = 27


def _bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * piv - aik * row_k[j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def _laplacian_minor(n: int, edges, weights=None):
    lap = [[0] * n for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        if u == v:
            continue
        w = 1 if weights is None else weights[i]
        lap[u][u] += w
        lap[v][v] += w
        lap[u][v] -= w
        lap[v][u] -= w
    return [row[1:] for row in lap[1:]]


def tree_number(g: Multigraph, removed_mask: int = 0) -> int:
    """Number of spanning trees by the matrix-tree theorem (0 if disconnected)."""
    edges = [e for i, e in enumerate(g.edges) if not removed_mask >> i & 1]
    if g.n == 1:
        return 1
    return _bareiss_det(_laplacian_minor(g.n, edges))


def tree_number_minus_edge(g: Multigraph, e: int) -> int:
    if not 0 <= e < g.m:
        raise InvalidGraphError(f"edge id {e} out of range")
    return tree_number(g, 1 << e)


@dataclass(frozen=True)
class Balance:
    balanced: bool
    values: tuple[int, ...]
    max_edge: int
    min_edge: int

    def __bool__(self):
        return self.balanced

    @property
    def witness(self) -> tuple[int, int] | None:
        return None if self.balanced else (self.max_edge, self.min_edge)


def is_tree_balanced(g: Multigraph) -> Balance:
    """True iff ``T(G - e)`` is the same for every edge; else a (max, min) witness."""
    g.require_connected()
    vals = tuple(tree_number_minus_edge(g, e) for e in range(g.m))
    hi = max(range(g.m), key=lambda e: (vals[e], -e))
    lo = min(range(g.m), key=lambda e: (vals[e], e))
    return Balance(vals[hi] == vals[lo], vals, hi, lo)


@dataclass(frozen=True)
class TreePoly:
    """``T = sum_i coeffs[i] * c^i`` for a subdivided structure graph."""

    r: int
    coeffs: tuple[int, ...]

    def __call__(self, c) -> int:
        return sum(t * c ** i for i, t in enumerate(self.coeffs))

    def coefficient(self, power: int) -> int:
        return self.coeffs[power]


def tree_poly(s: Multigraph, r_assign: Mapping[int, int] | Sequence[int],
              max_edges: int = TREE_POLY_MAX_EDGES) -> TreePoly:
    """Tree number of the subdivision with chain lengths ``c + r_e`` as a polynomial in c.

    The coefficient of ``c^(r-j)`` is the sum over ``j``-sets ``X`` of chains of
    ``T(S - X) * prod(r_e for e in X)``.
    """
    s.require_connected()
    if s.m > max_edges:
        raise ResourceLimitError(f"tree_poly enumerates 2^{s.m} chain subsets; cap is 2^{max_edges}")
    rv = [r_assign[e] for e in range(s.m)]
    r = s.redundancy
    coeffs = [0] * (r + 1)
    nonzero = [e for e in range(s.m) if rv[e]]
    # X must leave S - X connected, so |X| <= r; subsets of zero-weight edges vanish
    stack = [(0, 0, 1, 0)]
    while stack:
        start, mask, weight, size = stack.pop()
        t = tree_number(s, mask)
        if t == 0:
            continue
        coeffs[r - size] += t * weight
        if size == r:
            continue
        for idx in range(start, len(nonzero)):
            e = nonzero[idx]
            stack.append((idx + 1, mask | 1 << e, weight * rv[e], size + 1))
    return TreePoly(r, tuple(coeffs))


def tree_number_of_subdivision(s: Multigraph, lengths: Mapping[int, int] | Sequence[int]) -> int:
    """Sum over spanning trees of ``S`` of the product of lengths of non-tree edges.

    Computed as ``prod(L_e) * det`` of the reduced Laplacian weighted by ``1/L_e``.
    """
    lv = [lengths[e] for e in range(s.m)]
    if any(x < 1 for x in lv):
        raise InvalidGraphError("chain lengths must be at least 1")
    if s.n == 1:
        return prod(lv)
    n = s.n - 1
    lap = [[Fraction(0)] * s.n for _ in range(s.n)]
    for (u, v), length in zip(s.edges, lv):
        if u == v:
            continue
        w = Fraction(1, length)
        lap[u][u] += w
        lap[v][v] += w
        lap[u][v] -= w
        lap[v][u] -= w
    a = [row[1:] for row in lap[1:]]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    out = det * prod(lv)
    assert out.denominator == 1
    return int(out)
