"""Brute-force reference solvers and the INST-A micro fixture.

These deliberately re-derive everything from the raw :class:`Instance`
fields and use plain enumeration, so they stay independent of the
topology/efficiency/solver code they are used to check.
"""

from __future__ import annotations

import itertools
import math
from typing import Optional

from .errors import TooLarge
from .instance import CandidateSite, Instance, TestPoint

MAX_SITES = 10
MAX_WFAP_MAPS = 200_000


def inst_a() -> Instance:
    """Two APs, three TPs: ``a`` only sees AP 0, ``c`` only AP 1, ``b`` sees
    both and prefers AP 0. All rates are 54 Mbps."""
    return Instance(
        tps=(TestPoint(0, (-0.5, 0.0)), TestPoint(1, (0.9, 0.0)), TestPoint(2, (2.5, 0.0))),
        css=(CandidateSite(0, (0.0, 0.0)), CandidateSite(1, (2.0, 0.0))),
        num_frequencies=2,
        covers=((0, 1), (1, 2)),
        signal_order=((0,), (0, 1), (1,)),
        rates={(0, 0): 54, (1, 0): 54, (1, 1): 54, (2, 1): 54},
        meta={"name": "INST-A"},
    )


def _assoc(inst: Instance, S) -> Optional[list[int]]:
    out = []
    for order in inst.signal_order:
        a = next((j for j in order if j in S), None)
        if a is None:
            return None
        out.append(a)
    return out


def _counts(inst: Instance, a: list[int], freq=None) -> list[tuple[int, int, int]]:
    """Per TP: (rate, #SF interferers, #CS interferers) or, with ``freq``,
    (rate, #actual interferers, #CS interferers)."""
    n = len(inst.tps)
    J = [set(o) for o in inst.signal_order]
    out = []
    for i in range(n):
        neighbours = set()
        for j in J[i]:
            neighbours.update(inst.covers[j])
        sf = cs = 0
        for h in neighbours:
            if h == i:
                continue
            if a[i] in J[h] or a[h] in J[i]:
                if freq is None or freq[a[i]] == freq[a[h]]:
                    sf += 1
            if a[h] == a[i]:
                cs += 1
        out.append((inst.rates[(i, a[i])], sf, cs))
    return out


def design_value(inst: Instance, S, freq) -> float:
    a = _assoc(inst, set(S))
    if a is None:
        raise ValueError("not a cover")
    return math.fsum(g / (1 + k) for g, k, _ in _counts(inst, a, freq))


def pcs_value(inst: Instance, S, alpha: float) -> float:
    a = _assoc(inst, set(S))
    if a is None:
        raise ValueError("not a cover")
    return math.fsum(g / (1 + alpha * sf + (1 - alpha) * cs) for g, sf, cs in _counts(inst, a))


def _subsets(m: int):
    for r in range(1, m + 1):
        yield from itertools.combinations(range(m), r)


def brute_force_psap(inst: Instance, alpha: float) -> tuple[tuple[int, ...], float]:
    """Best cover for the alpha-blended objective; ties go to the
    lexicographically smallest site tuple."""
    m = len(inst.css)
    if m > MAX_SITES:
        raise TooLarge(f"{m} sites exceed the oracle limit {MAX_SITES}")
    best, best_val = None, -math.inf
    for S in _subsets(m):
        if _assoc(inst, set(S)) is None:
            continue
        val = pcs_value(inst, S, alpha)
        if val > best_val + 1e-9 or (abs(val - best_val) <= 1e-9 and S < best):
            best, best_val = S, val
    if best is None:
        raise ValueError("instance has no cover")
    return best, best_val


def _canonical_maps(n: int, num_freqs: int):
    """Restricted-growth strings: labels appear in first-use order."""
    def rec(prefix, used):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for lab in range(min(used + 1, num_freqs)):
            prefix.append(lab)
            yield from rec(prefix, max(used, lab + 1))
            prefix.pop()
    yield from rec([], 0)


def brute_force_wfap(
    inst: Instance, S, num_freqs: int, canonical: bool = False
) -> tuple[dict[int, int], float]:
    """Best frequency map for a fixed cover. By default all ``|F|^|S|`` maps
    are tried; ``canonical=True`` enumerates one map per label permutation."""
    S = tuple(sorted(S))
    if num_freqs ** len(S) > MAX_WFAP_MAPS:
        raise TooLarge(f"{num_freqs}^{len(S)} maps exceed the oracle limit")
    maps = (
        _canonical_maps(len(S), num_freqs)
        if canonical
        else itertools.product(range(num_freqs), repeat=len(S))
    )
    best, best_val = None, -math.inf
    for labels in maps:
        f = dict(zip(S, labels))
        val = design_value(inst, S, f)
        if val > best_val + 1e-9:
            best, best_val = f, val
    return best, best_val


def brute_force_wpp(inst: Instance, num_freqs: int):
    """Joint optimum over all covers and all canonical frequency maps."""
    m = len(inst.css)
    if m > MAX_SITES:
        raise TooLarge(f"{m} sites exceed the oracle limit {MAX_SITES}")
    best = (None, None, -math.inf)
    for S in _subsets(m):
        if _assoc(inst, set(S)) is None:
            continue
        for labels in _canonical_maps(len(S), num_freqs):
            f = dict(zip(S, labels))
            val = design_value(inst, S, f)
            if val > best[2] + 1e-9:
                best = (S, f, val)
    if best[0] is None:
        raise ValueError("instance has no cover")
    return best


# --------------------------------------------------------------------------
# micro-scale MILP enumeration

MAX_MODEL_BINARIES = 22


def brute_force_model(model, max_binaries: int = MAX_MODEL_BINARIES, chunk: int = 1 << 15):
    """Optimum of a built model by enumerating every binary assignment.

    Rows touching only binaries filter assignments directly; when the model
    also has continuous variables, each surviving assignment is completed by
    an LP (scipy/HiGHS). Returns ``(objective, solution)`` or
    ``(-inf, None)`` when infeasible.
    """
    import numpy as np
    from scipy.optimize import linprog

    bins = model.binaries()
    conts = model.continuous_vars()
    if len(bins) > max_binaries:
        raise TooLarge(f"{len(bins)} binaries exceed the limit {max_binaries}")
    bpos = {v: k for k, v in enumerate(bins)}
    cpos = {v: k for k, v in enumerate(conts)}
    R = len(model.rows)
    Ab = np.zeros((R, len(bins)))
    Ac = np.zeros((R, len(conts)))
    sense = np.array([row.sense for row in model.rows], dtype=object)
    rhs = np.array([row.rhs for row in model.rows], dtype=float)
    for r, row in enumerate(model.rows):
        for v, c in row.terms.items():
            if v in bpos:
                Ab[r, bpos[v]] = c
            else:
                Ac[r, cpos[v]] = c
    cb = np.array([model.objective.get(v, 0.0) for v in bins])
    cc = np.array([model.objective.get(v, 0.0) for v in conts])
    pure = ~Ac.any(axis=1)
    le, ge, eq = (sense == "<="), (sense == ">="), (sense == "=")
    tol = 1e-9

    best_val, best_x, best_y = -math.inf, None, None
    shifts = np.arange(len(bins), dtype=np.int64)
    total = 1 << len(bins)
    for start in range(0, total, chunk):
        ids = np.arange(start, min(total, start + chunk), dtype=np.int64)
        X = ((ids[:, None] >> shifts[None, :]) & 1).astype(float)
        act = X @ Ab.T
        ok = np.ones(len(ids), dtype=bool)
        ok &= ~((act[:, pure & le] > rhs[pure & le] + tol).any(axis=1))
        ok &= ~((act[:, pure & ge] < rhs[pure & ge] - tol).any(axis=1))
        ok &= ~((np.abs(act[:, pure & eq] - rhs[pure & eq]) > tol).any(axis=1))
        for k in np.flatnonzero(ok):
            x = X[k]
            if not conts:
                val = float(cb @ x)
                y = np.zeros(0)
            else:
                res_rhs = rhs - act[k]
                mixed = ~pure
                A_ub = np.vstack([Ac[mixed & le], -Ac[mixed & ge]])
                b_ub = np.concatenate([res_rhs[mixed & le], -res_rhs[mixed & ge]])
                lp = linprog(
                    -cc,
                    A_ub=A_ub if len(A_ub) else None,
                    b_ub=b_ub if len(b_ub) else None,
                    A_eq=Ac[mixed & eq] if (mixed & eq).any() else None,
                    b_eq=res_rhs[mixed & eq] if (mixed & eq).any() else None,
                    bounds=[(model.variables[v].lower, model.variables[v].upper) for v in conts],
                    method="highs",
                )
                if lp.status != 0:
                    continue
                y = lp.x
                val = float(cb @ x) - float(lp.fun)
            if val > best_val + tol:
                best_val, best_x, best_y = val, x, y
    if best_x is None:
        return -math.inf, None
    sol = {v: float(best_x[k]) for k, v in enumerate(bins)}
    sol.update({v: float(best_y[k]) for k, v in enumerate(conts)})
    return best_val, sol
