"""Vectorised subset kernels over edge bitmasks."""

from __future__ import annotations

from math import comb

import numpy as np

from .graph import Multigraph

CHUNK = 1 << 18


def _edge_order(g: Multigraph) -> list[int]:
    # BFS edge order makes label propagation converge in few sweeps
    order, seen_e = [], set()
    seen_v = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for e in g.incidence[u]:
                if e not in seen_e:
                    seen_e.add(e)
                    order.append(e)
                    w = g.other_end(e, u)
                    if w not in seen_v:
                        seen_v.add(w)
                        nxt.append(w)
        frontier = nxt
    order += [e for e in range(g.m) if e not in seen_e]
    return order


def connected_flags(g: Multigraph, masks: np.ndarray) -> np.ndarray:
    """Boolean array: is ``g`` connected after removing each mask's edges."""
    masks = np.asarray(masks, dtype=np.uint64)
    out = np.empty(masks.shape[0], dtype=bool)
    if g.n == 1:
        out[:] = True
        return out
    order = [e for e in _edge_order(g) if g.edges[e][0] != g.edges[e][1]]
    dtype = np.int8 if g.n < 127 else np.int32
    for lo in range(0, masks.shape[0], CHUNK):
        chunk = masks[lo:lo + CHUNK]
        alive = [((chunk >> np.uint64(e)) & np.uint64(1)) == 0 for e in order]
        # one contiguous row of labels per vertex
        lab = np.repeat(np.arange(g.n, dtype=dtype)[:, None], chunk.shape[0], axis=1)
        while True:
            before = lab.copy()
            for e, a in zip(order, alive):
                u, v = g.edges[e]
                mn = np.minimum(lab[u], lab[v])
                np.copyto(lab[u], mn, where=a)
                np.copyto(lab[v], mn, where=a)
            if np.array_equal(before, lab):
                break
        out[lo:lo + CHUNK] = lab.max(axis=0) == 0
    return out


def masks_of_size(m: int, k: int) -> np.ndarray:
    """All ``k``-subsets of ``range(m)`` as sorted uint64 bitmasks."""
    if k < 0 or k > m:
        return np.zeros(0, dtype=np.uint64)
    masks = np.zeros(1, dtype=np.uint64)
    top = np.full(1, -1, dtype=np.int64)
    for _ in range(k):
        parts, tops = [], []
        for j in range(m):
            sel = top < j
            if sel.any():
                parts.append(masks[sel] | np.uint64(1 << j))
                tops.append(np.full(int(sel.sum()), j, dtype=np.int64))
        masks = np.concatenate(parts)
        top = np.concatenate(tops)
    assert masks.shape[0] == comb(m, k)
    return np.sort(masks)


def all_masks(m: int) -> np.ndarray:
    return np.arange(1 << m, dtype=np.uint64)


def popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(a, dtype=np.uint64))
