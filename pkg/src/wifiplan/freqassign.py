"""Frequency assignment for a fixed set of installed APs.

With the cover fixed, associations are fixed too, and each TP splits its
neighbours into those that always interfere (same AP, ``H``) and those
that interfere only when their AP shares the TP's frequency (``Ubar``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .efficiency import EfficiencyValue, eval_design
from .errors import BudgetExceeded
from .topology import Association, Topology, associate, normalize_sites

TOL = 1e-9
_CHUNK = 1 << 16


@dataclass(frozen=True)
class FixedAssociationSets:
    assoc: Association
    H: tuple[frozenset[int], ...]
    U: tuple[frozenset[int], ...]
    Ubar: tuple[frozenset[int], ...]
    C: tuple[tuple[int, ...], ...]


def fixed_association_sets(topo: Topology, sites: Iterable[int]) -> FixedAssociationSets:
    assoc = associate(topo, sites)
    a = assoc.ap
    H, U, Ubar, C = [], [], [], []
    for i, Ni in enumerate(topo.N):
        ai = a[i]
        Hi = frozenset(h for h in Ni if h != i and a[h] == ai)
        Ui = frozenset(h for h in Ni - topo.I[ai] if a[h] in topo.rank[i])
        Ubi = Ui | (topo.I[ai] - Hi - {i})
        H.append(Hi)
        U.append(Ui)
        Ubar.append(Ubi)
        C.append(tuple(sorted({a[h] for h in Ubi})))
    return FixedAssociationSets(assoc, tuple(H), tuple(U), tuple(Ubar), tuple(C))


def prune_unused_aps(topo: Topology, sites: Iterable[int]) -> tuple[int, ...]:
    """Drop installed APs that serve no TP; associations are unaffected."""
    assoc = associate(topo, sites)
    return tuple(sorted(set(assoc.ap)))


# --------------------------------------------------------------------------
# overlap graph and greedy colouring


@dataclass(frozen=True)
class OverlapGraph:
    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.nodes}
        for j, k in self.edges:
            adj[j].add(k)
            adj[k].add(j)
        return adj


def build_overlap_graph(topo: Topology, sites: Iterable[int]) -> OverlapGraph:
    """APs ``j, k`` are adjacent when some TP covered by both associates to one of them."""
    assoc = associate(topo, sites)
    edges = set()
    for i, ai in enumerate(assoc.ap):
        for k in topo.J[i]:
            if k != ai and k in assoc.sites:
                edges.add((min(ai, k), max(ai, k)))
    return OverlapGraph(assoc.sites, frozenset(edges))


def greedy_coloring(g: OverlapGraph, num_colors: int) -> dict[int, int]:
    """DSATUR with a colour cap.

    Picks the unprocessed node with most distinct neighbour colours (then
    highest degree, then smallest id) and gives it the smallest free colour.
    Nodes with no free colour among ``num_colors`` stay uncoloured.
    """
    if num_colors < 1:
        raise ValueError("num_colors must be >= 1")
    adj = g.adjacency()
    color: dict[int, int] = {}
    pending = set(g.nodes)
    while pending:
        v = max(pending, key=lambda u: (len({color[w] for w in adj[u] if w in color}), len(adj[u]), -u))
        pending.remove(v)
        used = {color[w] for w in adj[v] if w in color}
        free = next((c for c in range(num_colors) if c not in used), None)
        if free is not None:
            color[v] = free
    return color


def extend_coloring(g: OverlapGraph, partial: dict[int, int], num_colors: int) -> dict[int, int]:
    """Complete a partial colouring: each uncoloured node (by id) takes the
    colour shared by the fewest already-coloured neighbours."""
    adj = g.adjacency()
    f = dict(partial)
    for v in g.nodes:
        if v not in f:
            clash = [sum(1 for w in adj[v] if f.get(w) == c) for c in range(num_colors)]
            f[v] = clash.index(min(clash))
    return f


# --------------------------------------------------------------------------
# exact enumeration


class _FaKernel:
    """Evaluates many frequency maps at once; columns follow ``sites``."""

    def __init__(self, topo: Topology, fas: FixedAssociationSets) -> None:
        self.sites = fas.assoc.sites
        pos = {j: p for p, j in enumerate(self.sites)}
        n = topo.num_tps
        a = fas.assoc.ap
        self.rate = np.array([topo.rate(i, a[i]) for i in range(n)], dtype=float)
        self.base = np.array([1.0 + len(fas.H[i]) for i in range(n)])
        pa, pk, rows, cnt = [], [], [], []
        for i in range(n):
            per_ap: dict[int, int] = {}
            for h in fas.Ubar[i]:
                per_ap[a[h]] = per_ap.get(a[h], 0) + 1
            for k, c in sorted(per_ap.items()):
                pa.append(pos[a[i]])
                pk.append(pos[k])
                rows.append(i)
                cnt.append(c)
        self.pa = np.array(pa, dtype=np.int64)
        self.pk = np.array(pk, dtype=np.int64)
        self.weights = np.zeros((len(pa), n))
        self.weights[np.arange(len(pa)), rows] = cnt

    def values(self, labels: np.ndarray) -> np.ndarray:
        eq = (labels[:, self.pa] == labels[:, self.pk]).astype(float)
        den = self.base[None, :] + eq @ self.weights
        return (self.rate[None, :] / den).sum(axis=1)


def canonical_labelings(n: int, num_freqs: int) -> np.ndarray:
    """All restricted-growth strings of length ``n`` using at most
    ``num_freqs`` labels, one row each, in lexicographic order."""
    rows = np.zeros((1, 0), dtype=np.int8)
    top = np.zeros(1, dtype=np.int8)  # number of labels used so far
    for _ in range(n):
        parts, tops = [], []
        for lab in range(num_freqs):
            keep = top >= lab if lab > 0 else np.ones(len(top), dtype=bool)
            if not keep.any():
                continue
            sub = rows[keep]
            parts.append(np.hstack([sub, np.full((len(sub), 1), lab, dtype=np.int8)]))
            tops.append(np.maximum(top[keep], lab + 1))
        rows = np.vstack(parts)
        top = np.concatenate(tops).astype(np.int8)
        order = np.lexsort(rows.T[::-1])
        rows, top = rows[order], top[order]
    return rows


def _best_row(kernel: _FaKernel, labels: np.ndarray) -> tuple[int, float]:
    best_idx, best_val = -1, -np.inf
    for start in range(0, len(labels), _CHUNK):
        vals = kernel.values(labels[start:start + _CHUNK])
        k = int(vals.argmax())
        if vals[k] > best_val + TOL:
            best_val = float(vals[k])
            best_idx = start + int(np.flatnonzero(vals >= vals[k] - TOL)[0])
    return best_idx, best_val


@dataclass(frozen=True)
class FaBudget:
    max_sites: int = 14


def _heuristic_fa(topo: Topology, S: tuple[int, ...], num_freqs: int) -> tuple[dict[int, int], EfficiencyValue]:
    """Greedy colouring extension followed by single-AP recolouring."""
    g = build_overlap_graph(topo, S)
    f = extend_coloring(g, greedy_coloring(g, num_freqs), num_freqs)
    kernel = _FaKernel(topo, fixed_association_sets(topo, S))
    cur = np.array([[f[j] for j in kernel.sites]], dtype=np.int8)
    cur_val = float(kernel.values(cur)[0])
    improved = True
    while improved:
        improved = False
        for p in range(len(kernel.sites)):
            trial = np.repeat(cur, num_freqs, axis=0)
            trial[:, p] = np.arange(num_freqs)
            vals = kernel.values(trial)
            k = int(vals.argmax())
            if vals[k] > cur_val + TOL:
                cur, cur_val, improved = trial[k:k + 1], float(vals[k]), True
    f = {j: int(c) for j, c in zip(kernel.sites, cur[0])}
    return f, eval_design(topo, S, f)


def solve_exact_fa(
    topo: Topology, sites: Iterable[int], num_freqs: int, budget: FaBudget = FaBudget()
) -> tuple[dict[int, int], EfficiencyValue]:
    """Optimal frequency map over canonical labelings (labels are interchangeable)."""
    if num_freqs < 1:
        raise ValueError("num_freqs must be >= 1")
    S = normalize_sites(sites)
    if len(S) > budget.max_sites:
        raise BudgetExceeded(
            f"{len(S)} APs exceed max_sites={budget.max_sites}",
            incumbent=_heuristic_fa(topo, S, num_freqs),
        )
    kernel = _FaKernel(topo, fixed_association_sets(topo, S))
    labels = canonical_labelings(len(S), num_freqs)
    idx, _ = _best_row(kernel, labels)
    f = {j: int(c) for j, c in zip(S, labels[idx])}
    return f, eval_design(topo, S, f)


def reduce_then_solve(
    topo: Topology, sites: Iterable[int], num_freqs: int, budget: FaBudget = FaBudget()
) -> tuple[dict[int, int], EfficiencyValue]:
    """Colour the overlap graph greedily; a complete proper colouring already
    reaches the complete-separation value. Otherwise freeze coloured nodes
    whose whole neighbourhood is coloured and enumerate the others."""
    S = normalize_sites(sites)
    g = build_overlap_graph(topo, S)
    partial = greedy_coloring(g, num_freqs)
    if len(partial) == len(S):
        return dict(partial), eval_design(topo, S, partial)

    adj = g.adjacency()
    frozen = {v: c for v, c in partial.items() if all(w in partial for w in adj[v])}
    free = [v for v in S if v not in frozen]
    baseline = extend_coloring(g, partial, num_freqs)
    base_val = eval_design(topo, S, baseline)
    if len(free) > budget.max_sites:
        raise BudgetExceeded(
            f"{len(free)} unfrozen APs exceed max_sites={budget.max_sites}",
            incumbent=(baseline, base_val),
        )
    kernel = _FaKernel(topo, fixed_association_sets(topo, S))
    pos = {j: p for p, j in enumerate(S)}
    if frozen:
        grids = np.meshgrid(*[np.arange(num_freqs, dtype=np.int8)] * len(free), indexing="ij")
        free_labels = np.stack([gr.ravel() for gr in grids], axis=1) if free else np.zeros((1, 0), np.int8)
    else:
        free_labels = canonical_labelings(len(free), num_freqs)
    labels = np.zeros((len(free_labels), len(S)), dtype=np.int8)
    for v, c in frozen.items():
        labels[:, pos[v]] = c
    for col, v in enumerate(free):
        labels[:, pos[v]] = free_labels[:, col]
    idx, _ = _best_row(kernel, labels)
    f = {j: int(c) for j, c in zip(S, labels[idx])}
    val = eval_design(topo, S, f)
    if val.total < base_val.total:
        return baseline, base_val
    return f, val
