"""Placement of long chains on cubic structures, and the candidate search.

Markings are handled as uint64 chain masks so that a whole population of
markings can be scored with a few array operations; the public functions
return sorted lists of frozensets of chain ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from . import _kernels
from .cutsets import mask_to_ids
from .errors import InvalidGraphError, ResourceLimitError
from .graph import Multigraph, edge_distance_matrix, girth
from .reliability import class_filtration, unrel_exact
from .spanning import is_tree_balanced, tree_number
from .structure import (
    MarkedStructure,
    cuts_of_size,
    dense_rank,
    gamma_rows,
    gamma_table_for,
    rho_vectors,
    structure_g_free,
)

MARKING_CAP = 10_000_000

CANDIDATE = "Candidate"
NO_UNIFORM = "NoUniform"
NOT_TREE_BALANCED = "NotTreeBalanced"
NOT_TREE_MAXIMAL = "NotTreeMaximal"
NO_JOINT_MINIMIZER = "NoJointMinimizer"
DOMINATED = "DominatedByOtherStructure"


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _check_structure(s: Multigraph, lam: int) -> None:
    if s.regular_degree() != 3 or s.has_loops or not s.is_connected():
        raise InvalidGraphError("structure must be a connected loopless cubic multigraph")
    if not 0 <= lam < s.m:
        raise InvalidGraphError(f"lambda must lie in [0, {s.m}), got {lam}")


def all_markings(s: Multigraph, lam: int, cap: int = MARKING_CAP) -> np.ndarray:
    _check_structure(s, lam)
    if comb(s.m, lam) > cap:
        raise ResourceLimitError(f"C({s.m}, {lam}) markings exceed the cap of {cap}")
    return _kernels.masks_of_size(s.m, lam)


def _initial(s: Multigraph, lam: int, candidates) -> np.ndarray:
    if candidates is None:
        return all_markings(s, lam)
    _check_structure(s, lam)
    arr = np.array(sorted({_as_mask(c) for c in candidates}), dtype=np.uint64)
    if arr.size and np.any(_kernels.popcount(arr) != lam):
        raise InvalidGraphError("candidate markings must all have lambda chains")
    return arr


def _as_mask(c) -> int:
    if isinstance(c, (int, np.integer)):
        return int(c)
    return sum(1 << int(e) for e in c)


def _bits(marks: np.ndarray, m: int) -> np.ndarray:
    return ((marks[:, None] >> np.arange(m, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(np.int64)


def _lex_keep(vals: np.ndarray) -> np.ndarray:
    keep = np.ones(vals.shape[0], dtype=bool)
    for col in range(vals.shape[1]):
        c = vals[:, col]
        keep &= c == c[keep].min()
    return keep


def _pair_sum(bits: np.ndarray, weight: np.ndarray) -> np.ndarray:
    """Sum of ``weight[e, f]`` over unordered pairs inside each marking (zero diagonal)."""
    return ((bits @ weight) * bits).sum(axis=1) // 2


def as_sets(marks: np.ndarray) -> list[frozenset[int]]:
    return [frozenset(mask_to_ids(int(x))) for x in marks]


def _top(s: Multigraph, max_k: int | None) -> int:
    return s.m if max_k is None else min(max_k, s.m)


# ---------------------------------------------------------------------------
# lexicographic gamma minimisation
# ---------------------------------------------------------------------------

def lex_min_kj(s: Multigraph, lam: int, max_k: int | None = None, candidates=None) -> np.ndarray:
    """Masks of markings whose gamma table is minimal in row-major (k, j) order."""
    marks = _initial(s, lam, candidates)
    for k in range(_top(s, max_k) + 1):
        if marks.size <= 1:
            break
        marks = marks[_lex_keep(gamma_rows(cuts_of_size(s, k), marks, k))]
    return marks


def minimize_kj(s: Multigraph, lam: int, max_k: int | None = None, candidates=None) -> list[frozenset[int]]:
    return as_sets(lex_min_kj(s, lam, max_k, candidates))


def _membership(s: Multigraph, k: int):
    """Per-chain and per-pair counts of disconnecting k-sets."""
    cuts = cuts_of_size(s, k)
    single = np.zeros(s.m, dtype=np.int64)
    pair = np.zeros((s.m, s.m), dtype=np.int64)
    for lo in range(0, cuts.shape[0], 1 << 16):
        b = _bits(cuts[lo:lo + (1 << 16)], s.m)
        single += b.sum(axis=0)
        pair += b.T @ b
    np.fill_diagonal(pair, 0)
    return single, pair


def lex_min_jk(s: Multigraph, lam: int, max_k: int | None = None, candidates=None) -> np.ndarray:
    """Masks of markings whose gamma table is minimal in column-major (j, k) order."""
    marks = _initial(s, lam, candidates)
    top = _top(s, max_k)
    member = [_membership(s, k) for k in range(top + 1)]
    # column j = 1: gamma_{k,1} is the rho-load of the marking
    for k in range(1, top + 1):
        if marks.size <= 1:
            return marks
        marks = marks[_lex_keep((_bits(marks, s.m) @ member[k][0])[:, None])]
    # column j = 2: pair loads
    for k in range(2, top + 1):
        if marks.size <= 1:
            return marks
        marks = marks[_lex_keep(_pair_sum(_bits(marks, s.m), member[k][1])[:, None])]
    if marks.size <= 1 or top < 3:
        return marks
    rows = {k: gamma_rows(cuts_of_size(s, k), marks, k) for k in range(3, top + 1)}
    keep = np.ones(marks.shape[0], dtype=bool)
    for j in range(3, top + 1):
        for k in range(j, top + 1):
            col = rows[k][:, j]
            keep &= col == col[keep].min()
    return marks[keep]


def minimize_jk(s: Multigraph, lam: int, max_k: int | None = None, candidates=None) -> list[frozenset[int]]:
    return as_sets(lex_min_jk(s, lam, max_k, candidates))


# ---------------------------------------------------------------------------
# separation and obstruction parameters
# ---------------------------------------------------------------------------

def _distance_indicators(s: Multigraph) -> dict[int, np.ndarray]:
    dist = np.array(edge_distance_matrix(s), dtype=float)
    out = {}
    for d in sorted({int(x) for x in dist.ravel() if x >= 1 and np.isfinite(x)}):
        out[d] = (dist == d).astype(np.int64)
    return out


def _adjacent_incidences(s: Multigraph) -> np.ndarray:
    """``A[f, e]`` = how often chain f appears among the chain ends adjacent to e."""
    a = np.zeros((s.m, s.m), dtype=np.int64)
    for e, (u, v) in enumerate(s.edges):
        for x in (u, v):
            for f in s.incidence[x]:
                if f != e:
                    a[f, e] += 1
    return a


def separation_vectors(s: Multigraph, marks: np.ndarray, dmax: int) -> np.ndarray:
    """``mu_1..mu_dmax`` for each marking, as a (P, dmax) array."""
    ind = _distance_indicators(s)
    b = _bits(marks, s.m)
    out = np.zeros((marks.shape[0], max(0, dmax)), dtype=np.int64)
    for d in range(1, dmax + 1):
        if d in ind:
            out[:, d - 1] = _pair_sum(b, ind[d])
    return out


def beta_vectors(s: Multigraph, marks: np.ndarray) -> np.ndarray:
    cnt = _bits(marks, s.m) @ _adjacent_incidences(s)
    return np.stack([(cnt == i).sum(axis=1) for i in range(5)], axis=1)


def obstruction_sequence(s: Multigraph) -> list[str]:
    r = s.redundancy
    seq = []
    if r >= 4:
        seq.append("mu1")
    if r >= 5:
        seq.append("mu2")
    seq += ["beta3+4beta4", "beta4"]
    if girth(s) >= 6:
        seq.append("mu3")
    return seq


def obstruction_values(s: Multigraph, marks: np.ndarray) -> dict[str, np.ndarray]:
    mu = separation_vectors(s, marks, 3)
    beta = beta_vectors(s, marks)
    return {
        "mu1": mu[:, 0],
        "mu2": mu[:, 1],
        "mu3": mu[:, 2],
        "beta3+4beta4": beta[:, 3] + 4 * beta[:, 4],
        "beta4": beta[:, 4],
    }


def lex_min_obstructions(s: Multigraph, lam: int, candidates=None):
    marks = _initial(s, lam, candidates)
    seq = obstruction_sequence(s)
    vals = obstruction_values(s, marks)
    keep = np.ones(marks.shape[0], dtype=bool)
    best = {}
    for name in seq:
        col = vals[name]
        best[name] = int(col[keep].min()) if keep.any() else 0
        keep &= col == best[name]
    return marks[keep], best


def minimize_obstructions(s: Multigraph, lam: int, candidates=None) -> list[frozenset[int]]:
    return as_sets(lex_min_obstructions(s, lam, candidates)[0])


def lex_min_separation(s: Multigraph, lam: int, g_free: int | None = None, candidates=None):
    marks = _initial(s, lam, candidates)
    if g_free is None:
        g_free = structure_g_free(s)
    mu = separation_vectors(s, marks, g_free - 3)
    if mu.shape[1] == 0:
        return marks, ()
    keep = _lex_keep(mu)
    return marks[keep], tuple(int(x) for x in mu[keep][0])


# ---------------------------------------------------------------------------
# LP export
# ---------------------------------------------------------------------------

def export_lp(s: Multigraph, lam: int, d: int) -> str:
    """CPLEX LP text minimising the number of marked chain pairs at distance ``d``."""
    _check_structure(s, lam)
    dist = edge_distance_matrix(s)
    pairs = [(i, j) for i in range(s.m) for j in range(i + 1, s.m) if dist[i][j] == d]
    lines = [f"\\ {s.m} chains, lambda = {lam}, pairs at distance {d}", "Minimize"]
    if pairs:
        terms = " + ".join(f"y{i}_{j}" for i, j in pairs)
        lines.append(f" obj: {terms}")
    else:
        lines.append(" obj: 0 x0")
    lines.append("Subject To")
    lines.append(" card: " + " + ".join(f"x{i}" for i in range(s.m)) + f" = {lam}")
    for i, j in pairs:
        lines.append(f" p{i}_{j}: y{i}_{j} - x{i} - x{j} >= -1")
    lines.append("Binary")
    lines += [f" x{i}" for i in range(s.m)]
    lines += [f" y{i}_{j}" for i, j in pairs]
    lines.append("End")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# candidate search
# ---------------------------------------------------------------------------

@dataclass
class Verdict:
    kind: str
    marked: MarkedStructure | None = None
    reason: str | None = None
    evidence: dict = field(default_factory=dict)
    candidates: list = field(default_factory=list)
    steps: dict = field(default_factory=dict)

    @property
    def is_candidate(self) -> bool:
        return self.kind == CANDIDATE


def _first_difference(a: Sequence[int], b: Sequence[int]) -> int:
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return i
    return -1


def _kj_index(flat_pos: int) -> tuple[int, int]:
    k = 0
    while flat_pos > k:
        flat_pos -= k + 1
        k += 1
    return k, flat_pos


def pool_lex_min(pool: Sequence[Multigraph], lam: int, max_k: int | None = None):
    """Row-by-row joint minimisation of gamma tables over every (structure, marking)."""
    alive = {i: all_markings(s, lam) for i, s in enumerate(pool)}
    top = min(_top(s, max_k) for s in pool)
    for k in range(top + 1):
        rows = {i: gamma_rows(cuts_of_size(pool[i], k), marks, k) for i, marks in alive.items()}
        stacked = np.concatenate([rows[i] for i in alive])
        best = stacked[_lex_keep(stacked)][0]
        nxt = {}
        for i, marks in alive.items():
            hit = np.all(rows[i] == best[None, :], axis=1)
            if hit.any():
                nxt[i] = marks[hit]
        alive = nxt
    return alive, top


def algorithm1(r: int, lam: int, pool: Sequence[Multigraph], ids: Sequence[str] | None = None,
               max_k: int | None = None) -> Verdict:
    """Search for a candidate uniformly most reliable marked structure.

    Tree maximality is judged against the supplied pool only. With ``max_k``
    the gamma comparisons use rows ``k <= max_k``.
    """
    pool = list(pool)
    if not pool:
        raise InvalidGraphError("empty pool")
    if r < 2:
        raise InvalidGraphError("r must be at least 2")
    ns, chains = 2 * (r - 1), 3 * (r - 1)
    if not 0 <= lam < chains:
        raise InvalidGraphError(f"lambda must lie in [0, {chains})")
    for s in pool:
        if s.n != ns or s.regular_degree() != 3 or s.has_loops or not s.is_connected():
            raise InvalidGraphError(f"pool members must be connected cubic graphs on {ns} vertices")
    ids = [str(i) for i in range(len(pool))] if ids is None else [str(x) for x in ids]
    steps: dict = {"tree_scope": "pool"}

    # 1. most reliable near zero
    polys = [unrel_exact(s) for s in pool]
    filt = class_filtration(polys, "near_zero", ids=list(range(len(pool))))
    winners = list(filt.final)
    steps["near_zero_winners"] = [ids[i] for i in winners]

    trees = [tree_number(s) for s in pool]
    t_best = max(trees)
    failures = []
    candidates = []
    for w in winners:
        g = pool[w]
        # 2. tree balance and pool-wide tree maximality
        bal = is_tree_balanced(g)
        if not bal.balanced:
            failures.append(Verdict(NO_UNIFORM, reason=NOT_TREE_BALANCED, evidence={
                "graph": ids[w], "max_edge": bal.max_edge, "min_edge": bal.min_edge,
                "max_value": bal.values[bal.max_edge], "min_value": bal.values[bal.min_edge]}))
            continue
        if trees[w] < t_best:
            better = trees.index(t_best)
            failures.append(Verdict(NO_UNIFORM, reason=NOT_TREE_MAXIMAL, evidence={
                "graph": ids[w], "tree_number": trees[w], "better_graph": ids[better],
                "better_tree_number": t_best, "scope": "pool"}))
            continue
        # 3. rank-optimal chains
        top = _top(g, max_k)
        rank = dense_rank(rho_vectors(g, top))
        order = sorted(rank)
        thr = order[lam - 1] if lam else -1
        forced = sum(1 << e for e in range(g.m) if rank[e] < thr)
        e_opt = sum(1 << e for e in range(g.m) if rank[e] <= thr)
        # 4. separation-minimal and obstruction-minimal markings
        g_free = structure_g_free(g)
        mu_marks, mu_min = lex_min_separation(g, lam, g_free)
        ob_marks, ob_min = lex_min_obstructions(g, lam)
        # 5. joint minimisers inside E_opt
        joint = np.intersect1d(mu_marks, ob_marks)
        joint = joint[((joint & np.uint64(forced)) == np.uint64(forced))
                      & ((joint & ~np.uint64(e_opt)) == 0)]
        info = {"graph": ids[w], "g_free": g_free, "mu_min": mu_min, "obstruction_min": ob_min,
                "e_opt": mask_to_ids(e_opt), "forced": mask_to_ids(forced),
                "rank": rank}
        steps.setdefault("per_winner", []).append(info)
        if joint.size == 0:
            failures.append(Verdict(NO_UNIFORM, reason=NO_JOINT_MINIMIZER, evidence={
                **info,
                "mu_minimizers": len(mu_marks), "obstruction_minimizers": len(ob_marks)}))
            continue
        best = lex_min_kj(g, lam, top, candidates=joint)
        tables = [gamma_table_for(g, int(x), top) for x in best]
        candidates.append((w, best, tables[0]))

    if not candidates:
        v = failures[0]
        v.steps = steps
        if len(failures) > 1:
            v.evidence["other_winners"] = [f.evidence for f in failures[1:]]
        return v

    # 6. cross-structure dominance in (k, j) order
    glob, top = pool_lex_min(pool, lam, max_k)
    gi = min(glob)
    g_mark = int(glob[gi][0])
    g_flat = gamma_table_for(pool[gi], g_mark, top).flat_kj
    steps["pool_best"] = {"graph": ids[gi], "marking": mask_to_ids(g_mark)}
    survivors = []
    dominated = []
    for w, best, table in candidates:
        flat = table.flat_kj
        if g_flat < flat:
            pos = _first_difference(g_flat, flat)
            dominated.append(Verdict(NO_UNIFORM, reason=DOMINATED, evidence={
                "graph": ids[w], "marking": mask_to_ids(int(best[0])),
                "dominating_graph": ids[gi], "dominating_marking": mask_to_ids(g_mark),
                "position": _kj_index(pos), "values": (g_flat[pos], flat[pos])}))
        else:
            for x in best:
                survivors.append(MarkedStructure(pool[w], frozenset(mask_to_ids(int(x)))))
    if not survivors:
        v = dominated[0]
        v.steps = steps
        return v
    return Verdict(CANDIDATE, marked=survivors[0], candidates=survivors, steps=steps,
                   evidence={"graph": ids[pool.index(survivors[0].structure)]})
