"""Disconnecting edge sets, minimal cuts, skeletons and triviality."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .errors import InvalidGraphError, ResourceLimitError
from .graph import (
    MAX_MASK_EDGES,
    Multigraph,
    components_after_removal,
    girth,
)

DEFAULT_WORK_CAP = 1 << 28
# direct subset scans are used when they are this cheap or the graph is small
SCAN_LIMIT = 400_000


def mask_to_ids(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def ids_to_mask(ids) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << int(i)
    return mask


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class CutRecord:
    """A disconnecting edge set.

    ``skeleton`` is the smaller side of a minimal cut (ties go to the side
    holding vertex 0); it is ``None`` for non-minimal sets.
    """

    mask: int
    size: int
    minimal: bool
    skeleton: frozenset[int] | None
    skeleton_is_tree: bool

    @property
    def edges(self) -> tuple[int, ...]:
        return mask_to_ids(self.mask)


@dataclass(frozen=True)
class TrivialityReport:
    size: int
    g_free: int
    witnesses: tuple[CutRecord, ...]

    @property
    def bounded(self) -> bool:
        return bool(self.witnesses)


def _check_mask_graph(g: Multigraph) -> None:
    g.require_loopless()
    if g.m > MAX_MASK_EDGES:
        raise ResourceLimitError(f"m={g.m} exceeds the {MAX_MASK_EDGES}-edge mask limit")


def boundary_mask(g: Multigraph, vertex_mask: int) -> int:
    out = 0
    for i, (u, v) in enumerate(g.edges):
        if (vertex_mask >> u & 1) != (vertex_mask >> v & 1):
            out |= 1 << i
    return out


def boundary(g: Multigraph, X) -> frozenset[int]:
    """Edges with exactly one endpoint in ``X``."""
    xs = set(X)
    if not xs or len(xs) >= g.n or not xs <= set(range(g.n)):
        raise InvalidGraphError("X must be a nonempty proper subset of the vertices")
    return frozenset(mask_to_ids(boundary_mask(g, ids_to_mask(xs))))


def _skeleton(g: Multigraph, mask: int):
    comps = components_after_removal(g, mask)
    if len(comps) != 2:
        return None, False
    a, b = comps
    na, nb = _popcount(a), _popcount(b)
    side = a if (na < nb or (na == nb and a & 1)) else b
    nv = _popcount(side)
    inner = sum(1 for u, v in g.edges if side >> u & 1 and side >> v & 1)
    return frozenset(mask_to_ids(side)), inner == nv - 1


def _connected_vertex_sets(g: Multigraph, max_size: int, cap: int):
    """Yield bitmasks of connected vertex subsets with at most max_size vertices."""
    nb = [0] * g.n
    for u, v in g.edges:
        if u != v:
            nb[u] |= 1 << v
            nb[v] |= 1 << u
    work = 0
    for root in range(g.n):
        above = ~((1 << (root + 1)) - 1)
        stack = [(1 << root, nb[root] & above, nb[root] | (1 << root))]
        while stack:
            sub, ext, closed = stack.pop()
            work += 1
            if work > cap:
                raise ResourceLimitError("connected-subset enumeration exceeded its work cap")
            yield sub
            if _popcount(sub) >= max_size:
                continue
            while ext:
                w = ext & -ext
                ext ^= w
                wi = w.bit_length() - 1
                new_nb = nb[wi] & ~closed & above
                stack.append((sub | w, ext | new_nb, closed | nb[wi]))


def minimal_cut_masks(g: Multigraph, max_k: int, cap: int = DEFAULT_WORK_CAP) -> list[int]:
    """Minimal cut sets with at most ``max_k`` edges, grown skeleton-first."""
    _check_mask_graph(g)
    if g.n == 1:
        return []
    full = (1 << g.n) - 1
    found = set()
    for sub in _connected_vertex_sets(g, g.n // 2, cap):
        bm = boundary_mask(g, sub)
        if _popcount(bm) > max_k or bm in found:
            continue
        if _is_connected_vertex_set(g, full & ~sub):
            found.add(bm)
    return sorted(found, key=lambda x: (_popcount(x), x))


def _is_connected_vertex_set(g: Multigraph, vmask: int) -> bool:
    if not vmask:
        return False
    start = (vmask & -vmask).bit_length() - 1
    seen = 1 << start
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.neighbors[u]:
            if vmask >> w & 1 and not seen >> w & 1:
                seen |= 1 << w
                stack.append(w)
    return seen == vmask


def _scan_disconnecting(g: Multigraph, max_k: int) -> list[np.ndarray]:
    by_size = []
    for k in range(max_k + 1):
        masks = _kernels.masks_of_size(g.m, k)
        by_size.append(masks[~_kernels.connected_flags(g, masks)])
    return by_size


def _supersets_disconnecting(g: Multigraph, max_k: int, cap: int) -> list[list[int]]:
    minimal = minimal_cut_masks(g, max_k, cap)
    by_size: list[set[int]] = [set() for _ in range(max_k + 1)]
    work = 0
    for cut in minimal:
        s = _popcount(cut)
        rest = [i for i in range(g.m) if not cut >> i & 1]
        for extra in range(0, max_k - s + 1):
            work += comb(len(rest), extra)
            if work > cap:
                raise ResourceLimitError("superset expansion exceeded its work cap")
            for combo in _combinations_masks(rest, extra):
                by_size[s + extra].add(cut | combo)
    return [sorted(x) for x in by_size]


def _combinations_masks(items, r):
    from itertools import combinations

    for c in combinations(items, r):
        mask = 0
        for i in c:
            mask |= 1 << i
        yield mask


def disconnecting_arrays_by_size(
    g: Multigraph, max_k: int | None = None, cap: int = DEFAULT_WORK_CAP, method: str = "auto"
) -> list[np.ndarray]:
    """Disconnecting edge subsets grouped by size as sorted uint64 arrays.

    ``method`` is ``"scan"`` (direct subset scan), ``"skeleton"`` (supersets of
    skeleton-grown minimal cuts) or ``"auto"``.
    """
    _check_mask_graph(g)
    if not g.is_connected():
        raise InvalidGraphError("graph is not connected")
    if max_k is None:
        max_k = g.m
    max_k = min(max_k, g.m)
    scan_cost = sum(comb(g.m, k) for k in range(max_k + 1))
    if method == "auto":
        method = "scan" if (scan_cost <= SCAN_LIMIT or g.m <= 16) else "skeleton"
    if method == "scan":
        if scan_cost > cap:
            raise ResourceLimitError(f"subset scan of {scan_cost} sets exceeds cap {cap}")
        return _scan_disconnecting(g, max_k)
    if method == "skeleton":
        return [np.array(x, dtype=np.uint64) for x in _supersets_disconnecting(g, max_k, cap)]
    raise ValueError(f"unknown method {method!r}")


def disconnecting_masks_by_size(
    g: Multigraph, max_k: int | None = None, cap: int = DEFAULT_WORK_CAP, method: str = "auto"
) -> list[list[int]]:
    """Same as :func:`disconnecting_arrays_by_size` with Python int lists."""
    return [[int(x) for x in arr] for arr in disconnecting_arrays_by_size(g, max_k, cap, method)]


def enumerate_disconnecting_sets(
    g: Multigraph, max_k: int, cap: int = DEFAULT_WORK_CAP, method: str = "auto"
) -> list[CutRecord]:
    """Every disconnecting edge set with at most ``max_k`` edges.

    Records are sorted by (size, mask value).
    """
    if max_k > g.m:
        raise InvalidGraphError(f"max_k={max_k} exceeds m={g.m}")
    by_size = disconnecting_masks_by_size(g, max_k, cap, method)
    minimal = set(minimal_cut_masks(g, max_k, cap))
    out = []
    for k, masks in enumerate(by_size):
        for mask in masks:
            if mask in minimal:
                skel, tree = _skeleton(g, mask)
                out.append(CutRecord(mask, k, True, skel, tree))
            else:
                out.append(CutRecord(mask, k, False, None, False))
    return out


def minimal_cuts(g: Multigraph, max_k: int, cap: int = DEFAULT_WORK_CAP) -> list[CutRecord]:
    out = []
    for mask in minimal_cut_masks(g, max_k, cap):
        skel, tree = _skeleton(g, mask)
        out.append(CutRecord(mask, _popcount(mask), True, skel, tree))
    return out


def cut_record(g: Multigraph, edge_ids) -> CutRecord:
    """Build a record for an explicit edge set (must disconnect ``g``)."""
    mask = ids_to_mask(edge_ids)
    comps = components_after_removal(g, mask)
    if len(comps) < 2:
        raise InvalidGraphError("edge set does not disconnect the graph")
    size = _popcount(mask)
    if len(comps) == 2:
        # minimal iff every removed edge joins the two components
        a = comps[0]
        if all((a >> u & 1) != (a >> v & 1) for u, v in (g.edges[i] for i in mask_to_ids(mask))):
            skel, tree = _skeleton(g, mask)
            return CutRecord(mask, size, True, skel, tree)
    return CutRecord(mask, size, False, None, False)


def _require_regular(g: Multigraph) -> int:
    k = g.regular_degree()
    if k is None:
        raise InvalidGraphError("triviality is defined for regular graphs only")
    return k


def classify_trivial(g: Multigraph, cut: CutRecord) -> bool:
    """True iff the cut is the boundary of a tree skeleton with at most girth-1 vertices."""
    _require_regular(g)
    if not cut.minimal:
        raise InvalidGraphError("classify_trivial expects a minimal cut")
    gg = girth(g)
    return cut.skeleton_is_tree and len(cut.skeleton) <= gg - 1


def has_nontrivial_cutsets_up_to(
    g: Multigraph, size: int | None = None, cap: int = DEFAULT_WORK_CAP
) -> TrivialityReport:
    """Search for non-trivial minimal cuts with fewer than ``size`` edges.

    The bound is exclusive: a girth-``g`` cycle always induces a cut of
    exactly ``g(k-2)`` edges, and such cuts sit on the boundary of the
    class of graphs free of non-trivial cuts. ``g_free`` is the largest
    ``g`` with no non-trivial cut of fewer than ``g(k-2)`` edges, capped at
    ``size // (k-2)`` when nothing is found.
    """
    k = _require_regular(g)
    g.require_connected()
    if k < 3:
        raise InvalidGraphError("triviality needs degree >= 3")
    gg = girth(g)
    if size is None:
        size = int(gg) * (k - 2)
    cuts = minimal_cuts(g, size - 1, cap) if size > 0 else []
    bad = [c for c in cuts if not (c.skeleton_is_tree and len(c.skeleton) <= gg - 1)]
    if not bad:
        return TrivialityReport(size, size // (k - 2), ())
    smallest = min(c.size for c in bad)
    witnesses = tuple(c for c in bad if c.size == smallest)
    return TrivialityReport(size, smallest // (k - 2), witnesses)


def smallest_nontrivial_cut(g: Multigraph, limit: int | None = None, cap: int = DEFAULT_WORK_CAP) -> int:
    """Size of the smallest non-trivial minimal cut of a regular graph.

    Returns ``limit + 1`` when none has at most ``limit`` edges.
    """
    if limit is None:
        limit = g.m
    rep = has_nontrivial_cutsets_up_to(g, limit + 1, cap)
    if rep.witnesses:
        return rep.witnesses[0].size
    return limit + 1


def inclusion_exclusion_unreliability(g: Multigraph, p):
    """Unreliability at ``p`` from minimal cuts by inclusion-exclusion (tiny graphs)."""
    from itertools import combinations

    cuts = minimal_cut_masks(g, g.m)
    if len(cuts) > 16:
        raise ResourceLimitError("too many minimal cuts for inclusion-exclusion")
    total = 0
    for size in range(1, len(cuts) + 1):
        sign = 1 if size % 2 else -1
        for group in combinations(cuts, size):
            union = 0
            for c in group:
                union |= c
            total += sign * p ** _popcount(union)
    return total


def counts_by_size(g: Multigraph, max_k: int, **kw) -> list[int]:
    return [len(x) for x in disconnecting_masks_by_size(g, max_k, **kw)]


def as_array(masks: list[int]) -> np.ndarray:
    return np.array(masks, dtype=np.uint64)


def disconnecting_of_size(g: Multigraph, k: int, cap: int = DEFAULT_WORK_CAP) -> np.ndarray:
    """Disconnecting edge subsets of exactly ``k`` edges as a sorted uint64 array."""
    _check_mask_graph(g)
    if not 0 <= k <= g.m:
        return np.zeros(0, dtype=np.uint64)
    if comb(g.m, k) <= SCAN_LIMIT or comb(g.m, k) <= cap // 64:
        masks = _kernels.masks_of_size(g.m, k)
        return masks[~_kernels.connected_flags(g, masks)]
    return disconnecting_arrays_by_size(g, k, cap, "skeleton")[k]
