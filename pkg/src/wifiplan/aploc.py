"""AP location under the partial-separation objective.

``solve_exact`` is a depth-first include/exclude search over candidate
sites; ``solve_local_search`` is a first-improvement add/drop/swap search
from a greedy cover. ``enumerate_scenarios`` lists the per-TP interference
scenarios used as columns of the enumerative MILP.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .efficiency import check_alpha, eval_pcs
from .errors import BudgetExceeded, ScenarioExplosion
from .topology import Association, Topology, associate

TOL = 1e-9
_NO_LINK = np.iinfo(np.int64).max // 4


@dataclass(frozen=True)
class Budget:
    max_sites_exact: int = 20
    max_nodes: Optional[int] = None
    time_limit: Optional[float] = None


@dataclass(frozen=True)
class PsapResult:
    sites: tuple[int, ...]
    association: Association
    objective: float
    alpha: float
    proof_status: str  # "optimal" | "heuristic"
    nodes_explored: int
    wall_time: float


class PcsKernel:
    """Vectorised partial-separation evaluator over site masks."""

    def __init__(self, topo: Topology) -> None:
        n, m = topo.num_tps, topo.num_css
        self.n, self.m = n, m
        self.cover = np.zeros((n, m), dtype=bool)
        self.rank = np.full((n, m), _NO_LINK, dtype=np.int64)
        self.rate = np.zeros((n, m))
        for i, Ji in enumerate(topo.J):
            for r, j in enumerate(Ji):
                self.cover[i, j] = True
                self.rank[i, j] = r
                self.rate[i, j] = topo.rate(i, j)
        self.rows = np.arange(n)
        self.eye = np.eye(n, dtype=bool)

    def value(self, mask: np.ndarray, alpha: float) -> Optional[float]:
        """Objective for the sites flagged in ``mask``; ``None`` if not a cover."""
        if self.n == 0:
            return 0.0
        r = np.where(mask[None, :], self.rank, _NO_LINK)
        a = r.argmin(axis=1)
        if (r[self.rows, a] == _NO_LINK).any():
            return None
        b = self.cover[:, a]  # b[i, h]: a_h covers i
        n_sf = ((b | b.T) & ~self.eye).sum(axis=1)
        n_cs = (a[:, None] == a[None, :]).sum(axis=1) - 1
        g = self.rate[self.rows, a]
        return float((g / (1.0 + n_cs + alpha * (n_sf - n_cs))).sum())


def _result(topo, S, alpha, status, nodes, t0) -> PsapResult:
    S = tuple(sorted(S))
    return PsapResult(
        sites=S,
        association=associate(topo, S),
        objective=eval_pcs(topo, S, alpha).total,
        alpha=alpha,
        proof_status=status,
        nodes_explored=nodes,
        wall_time=time.perf_counter() - t0,
    )


def _better(val: float, S: tuple, best_val: float, best_S) -> bool:
    if val > best_val + TOL:
        return True
    return abs(val - best_val) <= TOL and best_S is not None and S < best_S


def greedy_cover(topo: Topology) -> tuple[int, ...]:
    """Classic greedy set cover; ties broken by smallest site id."""
    uncovered = set(range(topo.num_tps))
    chosen: list[int] = []
    while uncovered:
        j = max(range(topo.num_css), key=lambda k: (len(topo.I[k] & uncovered), -k))
        if not topo.I[j] & uncovered:
            raise ValueError("instance has uncoverable TPs")
        chosen.append(j)
        uncovered -= topo.I[j]
    return tuple(sorted(chosen))


def solve_exact(topo: Topology, alpha: float, budget: Budget = Budget()) -> PsapResult:
    """Optimal cover by branch and bound.

    Sites are branched in order of decreasing coverage (include first).
    A branch is cut when the remaining sites can no longer complete a cover,
    or when the sum over TPs of the best still-reachable term falls below
    the incumbent. A TP associated to ``j`` always counts every other TP of
    ``I_j`` as a single-frequency interferer, so the reachable term for
    ``j`` is ``rate / (1 + alpha * (|I_j| - 1))``.
    """
    alpha = check_alpha(alpha)
    t0 = time.perf_counter()
    m, n = topo.num_css, topo.num_tps
    if m > budget.max_sites_exact:
        raise BudgetExceeded(
            f"{m} sites exceed max_sites_exact={budget.max_sites_exact}",
            incumbent=_result(topo, greedy_cover(topo), alpha, "heuristic", 0, t0),
        )
    kernel = PcsKernel(topo)
    order = sorted(range(m), key=lambda j: (-len(topo.I[j]), j))
    masks = [sum(1 << i for i in topo.I[j]) for j in order]
    full = (1 << n) - 1
    suffix = [0] * (m + 1)
    for d in range(m - 1, -1, -1):
        suffix[d] = suffix[d + 1] | masks[d]

    sizes = np.array([len(topo.I[j]) for j in range(m)], dtype=float)
    sizes = np.maximum(sizes, 1.0)  # empty sites only feed masked-out entries
    reach = np.where(kernel.cover, kernel.rate / (1.0 + alpha * (sizes[None, :] - 1.0)), -np.inf)

    state = np.full(m, -1, dtype=np.int8)  # -1 undecided, 0 out, 1 in
    best_S: Optional[tuple] = None
    best_val = -np.inf
    nodes = 0

    def bound() -> float:
        if n == 0:
            return 0.0
        inc_rank = np.where(state[None, :] == 1, kernel.rank, _NO_LINK).min(axis=1)
        ok = kernel.cover & (state[None, :] != 0) & (kernel.rank <= inc_rank[:, None])
        return float(np.where(ok, reach, -np.inf).max(axis=1).sum())

    def out_of_budget() -> bool:
        if budget.max_nodes is not None and nodes > budget.max_nodes:
            return True
        return budget.time_limit is not None and time.perf_counter() - t0 > budget.time_limit

    def dfs(d: int, covered: int) -> None:
        nonlocal best_S, best_val, nodes
        nodes += 1
        if out_of_budget():
            raise _Stop
        if covered | suffix[d] != full:
            return
        if d == m:
            S = tuple(int(j) for j in np.flatnonzero(state == 1))
            val = kernel.value(state == 1, alpha)
            if val is not None and (best_S is None or _better(val, S, best_val, best_S)):
                best_S, best_val = S, val
            return
        if best_S is not None and bound() < best_val - TOL:
            return
        j = order[d]
        state[j] = 1
        dfs(d + 1, covered | masks[d])
        state[j] = 0
        dfs(d + 1, covered)
        state[j] = -1

    try:
        dfs(0, 0)
    except _Stop:
        S = best_S if best_S is not None else greedy_cover(topo)
        raise BudgetExceeded(
            f"node/time budget exhausted after {nodes} nodes",
            incumbent=_result(topo, S, alpha, "heuristic", nodes, t0),
        ) from None
    if best_S is None:
        raise ValueError("instance has no cover")
    return _result(topo, best_S, alpha, "optimal", nodes, t0)


class _Stop(Exception):
    pass


def solve_local_search(
    topo: Topology, alpha: float, seed: int = 0, iters: int = 1000
) -> PsapResult:
    """Improve the greedy cover by add/drop/swap moves, accepting only strict
    improvements (first improvement in a seeded random scan order). Stops
    after ``iters`` accepted moves or at a local optimum."""
    alpha = check_alpha(alpha)
    t0 = time.perf_counter()
    rng = random.Random(seed)
    kernel = PcsKernel(topo)
    m = topo.num_css
    current = set(greedy_cover(topo))
    mask = np.zeros(m, dtype=bool)
    mask[list(current)] = True
    cur_val = kernel.value(mask, alpha)
    evals = 1
    for _ in range(iters):
        inside = sorted(current)
        outside = [j for j in range(m) if j not in current]
        moves = [(None, k) for k in outside] + [(j, None) for j in inside]
        moves += [(j, k) for j in inside for k in outside]
        rng.shuffle(moves)
        for drop, add in moves:
            trial = mask.copy()
            if drop is not None:
                trial[drop] = False
            if add is not None:
                trial[add] = True
            if not trial.any():
                continue
            val = kernel.value(trial, alpha)
            evals += 1
            if val is not None and val > cur_val + TOL:
                mask, cur_val = trial, val
                current = set(int(j) for j in np.flatnonzero(mask))
                break
        else:
            break
    return _result(topo, current, alpha, "heuristic", evals, t0)


# --------------------------------------------------------------------------
# interference scenarios


@dataclass(frozen=True)
class InterferenceScenario:
    tp: int
    site: int
    H: frozenset[int]
    U: frozenset[int]
    coeff: float


def scenario_coeff(topo: Topology, i: int, j: int, nH: int, nU: int, alpha: float) -> float:
    # CS interferers are the nH members of H; SF adds the rest of I_j and U
    return topo.rate(i, j) / (1 + nH + alpha * (nU + len(topo.n_cs[i, j]) - nH))


def _powerset(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def enumerate_scenarios(
    topo: Topology, i: int, alpha: float, cap: int = 4096
) -> list[InterferenceScenario]:
    """All scenarios of TP ``i``, grouped by association in signal order."""
    alpha = check_alpha(alpha)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    out = []
    for j in topo.J[i]:
        ncs, nsf = sorted(topo.n_cs[i, j]), sorted(topo.n_sf[i, j])
        count = 2 ** (len(ncs) + len(nsf))
        if count > cap:
            raise ScenarioExplosion(i, j, count)
        for H in _powerset(ncs):
            for U in _powerset(nsf):
                out.append(InterferenceScenario(
                    i, j, frozenset(H), frozenset(U),
                    scenario_coeff(topo, i, j, len(H), len(U), alpha),
                ))
    return out


def realized_scenario(topo: Topology, assoc: Association, i: int) -> tuple[int, frozenset, frozenset]:
    """(j, H, U) actually realised by TP ``i`` under ``assoc``."""
    a = assoc.ap
    j = a[i]
    H = frozenset(h for h in topo.n_cs[i, j] if a[h] == j)
    U = frozenset(h for h in topo.n_sf[i, j] if a[h] in topo.rank[i])
    return j, H, U
