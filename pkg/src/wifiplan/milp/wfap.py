"""Frequency-assignment models for a fixed cover: ``wfap-h`` (frequency
variables), ``wfap-h2`` (same-frequency pair variables) and ``wfap-l``
(enumeration over interfering-AP subsets)."""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Mapping

from ..errors import InconsistentDesign, NotACover, ScenarioExplosion, TooManyAPs
from ..freqassign import FixedAssociationSets, fixed_association_sets
from ..topology import Topology, normalize_sites
from .model import MilpModel, add_products

ROW_BUDGET = 2_000_000


def _pair(j: int, k: int) -> tuple[int, int]:
    return (j, k) if j < k else (k, j)


def _setup(name: str, topo: Topology, sites, num_freqs: int) -> tuple[MilpModel, FixedAssociationSets]:
    if num_freqs < 1:
        raise ValueError("num_freqs must be >= 1")
    fas = fixed_association_sets(topo, sites)
    model = MilpModel(name=name, meta={
        "formulation": name, "sites": fas.assoc.sites, "num_freqs": num_freqs, "fas": fas,
    })
    return model, fas


def _hyperbolic_part(model: MilpModel, topo: Topology, fas: FixedAssociationSets, pair_var) -> None:
    """Per-TP efficiency ``c_i`` with ``c_i (1 + |H_i|) + sum_h c_i * s_ih = rate``
    where ``s_ih`` (given by ``pair_var(i, h)``) flags a shared frequency."""
    a = fas.assoc.ap
    products = []
    for i in range(topo.num_tps):
        g = topo.rate(i, a[i])
        base = 1 + len(fas.H[i])
        cap = g / base
        c = model.continuous(f"c_{i}", 0.0, cap)
        model.add_objective(c, 1)
        defn = [(c, base)]
        for h in sorted(fas.Ubar[i]):
            z = model.continuous(f"z_{i}_{h}", 0.0, cap)
            products.append(("z", z, c, [(pair_var(i, h), 1)], cap))
            defn.append((z, 1))
        model.add_row(f"cdef_{i}", defn, "=", g)
    add_products(model, products)


def build_wfap_h(topo: Topology, sites: Iterable[int], num_freqs: int) -> MilpModel:
    model, fas = _setup("wfap-h", topo, sites, num_freqs)
    S, a = fas.assoc.sites, fas.assoc.ap
    F = range(num_freqs)
    for j in S:
        for f in F:
            model.binary(f"xf_{j}_{f}")
    tp_pairs = sorted({_pair(i, h) for i in range(topo.num_tps) for h in fas.Ubar[i]})
    ap_pairs = sorted({_pair(a[i], a[h]) for i, h in tp_pairs})
    for j, k in ap_pairs:
        for f in F:
            model.binary(f"p_{j}_{k}_{f}")
    for i, h in tp_pairs:
        model.binary(f"y_{i}_{h}")
    for j in S:
        model.add_row(f"freq_{j}", [(f"xf_{j}_{f}", 1) for f in F], "=", 1)
    for j, k in ap_pairs:
        for f in F:
            model.add_row(f"anda_{j}_{k}_{f}", [(f"p_{j}_{k}_{f}", 1), (f"xf_{j}_{f}", -1)], "<=", 0)
    for j, k in ap_pairs:
        for f in F:
            model.add_row(f"andb_{j}_{k}_{f}", [(f"p_{j}_{k}_{f}", 1), (f"xf_{k}_{f}", -1)], "<=", 0)
    for j, k in ap_pairs:
        for f in F:
            model.add_row(
                f"andc_{j}_{k}_{f}",
                [(f"p_{j}_{k}_{f}", 1), (f"xf_{j}_{f}", -1), (f"xf_{k}_{f}", -1)], ">=", -1,
            )
    for i, h in tp_pairs:
        j, k = _pair(a[i], a[h])
        model.add_row(f"ydef_{i}_{h}", [(f"y_{i}_{h}", 1)] + [(f"p_{j}_{k}_{f}", -1) for f in F], "=", 0)
    _hyperbolic_part(model, topo, fas, lambda i, h: "y_%d_%d" % _pair(i, h))
    return model


def _partition_part(model: MilpModel, S: tuple[int, ...], num_freqs: int, row_budget: int) -> None:
    """Pair variables ``v_jk`` forming an equivalence relation with at most
    ``num_freqs`` classes: any ``num_freqs + 1`` APs contain a same-frequency
    pair, plus the three transitivity families."""
    t = num_freqs + 1
    if math.comb(len(S), t) > row_budget:
        raise TooManyAPs(f"C({len(S)}, {t}) pigeonhole rows exceed the budget {row_budget}")
    for j, k in itertools.combinations(S, 2):
        model.binary(f"v_{j}_{k}")
    for T in itertools.combinations(S, t):
        model.add_row(
            "pig_" + "_".join(map(str, T)),
            [(f"v_{j}_{k}", 1) for j, k in itertools.combinations(T, 2)], ">=", 1,
        )
    triples = list(itertools.combinations(S, 3))
    for j, k, l in triples:
        model.add_row(f"tra_{j}_{k}_{l}", [(f"v_{j}_{k}", 1), (f"v_{j}_{l}", -1), (f"v_{k}_{l}", -1)], ">=", -1)
    for j, k, l in triples:
        model.add_row(f"trb_{j}_{k}_{l}", [(f"v_{k}_{l}", 1), (f"v_{j}_{k}", -1), (f"v_{j}_{l}", -1)], ">=", -1)
    for j, k, l in triples:
        model.add_row(f"trc_{j}_{k}_{l}", [(f"v_{j}_{l}", 1), (f"v_{j}_{k}", -1), (f"v_{k}_{l}", -1)], ">=", -1)


def build_wfap_h2(
    topo: Topology, sites: Iterable[int], num_freqs: int, row_budget: int = ROW_BUDGET
) -> MilpModel:
    model, fas = _setup("wfap-h2", topo, sites, num_freqs)
    a = fas.assoc.ap
    _partition_part(model, fas.assoc.sites, num_freqs, row_budget)
    _hyperbolic_part(model, topo, fas, lambda i, h: "v_%d_%d" % _pair(a[i], a[h]))
    return model


def interfering_count(fas: FixedAssociationSets, i: int, A) -> int:
    """TPs of ``Ubar_i`` whose AP is in ``A``."""
    a = fas.assoc.ap
    return sum(1 for h in fas.Ubar[i] if a[h] in A)


def build_wfap_enum(
    topo: Topology, sites: Iterable[int], num_freqs: int, cap: int = 4096, row_budget: int = ROW_BUDGET
) -> MilpModel:
    model, fas = _setup("wfap-l", topo, sites, num_freqs)
    a = fas.assoc.ap
    for i, Ci in enumerate(fas.C):
        if 2 ** len(Ci) > cap:
            raise ScenarioExplosion(i, a[i], 2 ** len(Ci))
    _partition_part(model, fas.assoc.sites, num_freqs, row_budget)
    for i, Ci in enumerate(fas.C):
        g = topo.rate(i, a[i])
        for mask in range(2 ** len(Ci)):
            A = {k for b, k in enumerate(Ci) if mask >> b & 1}
            w = model.binary(f"wa_{i}_m{mask}")
            model.add_objective(w, g / (1 + len(fas.H[i]) + interfering_count(fas, i, A)))
    for i, Ci in enumerate(fas.C):
        for b, k in enumerate(Ci):
            terms = [("v_%d_%d" % _pair(a[i], k), 1)]
            terms += [(f"wa_{i}_m{mask}", -1) for mask in range(2 ** len(Ci)) if mask >> b & 1]
            model.add_row(f"link_{i}_{k}", terms, "=", 0)
    for i, Ci in enumerate(fas.C):
        model.add_row(f"conv_{i}", [(f"wa_{i}_m{mask}", 1) for mask in range(2 ** len(Ci))], "=", 1)
    return model


def embed_wfap(model: MilpModel, topo: Topology, sites: Iterable[int], freq: Mapping[int, int]) -> dict[str, float]:
    """Variable values representing frequency map ``freq`` in a WFAP model."""
    S = normalize_sites(sites)
    if S != tuple(model.meta["sites"]):
        raise InconsistentDesign(f"model was built for sites {model.meta['sites']}, got {S}")
    if set(freq) != set(S):
        raise InconsistentDesign("frequency map must be defined exactly on the sites")
    F = model.meta["num_freqs"]
    if any(not 0 <= freq[j] < F for j in S):
        raise InconsistentDesign(f"frequencies must lie in 0..{F - 1}")
    fas: FixedAssociationSets = model.meta["fas"]
    a = fas.assoc.ap
    sol: dict[str, float] = {}
    c = {}
    for i in range(topo.num_tps):
        shared = sum(1 for h in fas.Ubar[i] if freq[a[h]] == freq[a[i]])
        c[i] = topo.rate(i, a[i]) / (1 + len(fas.H[i]) + shared)
    for name in model.variables:
        prefix, _, rest = name.partition("_")
        if prefix == "wa":
            i_s, m_s = rest.split("_")
            i, mask = int(i_s), int(m_s[1:])
            A = {k for b, k in enumerate(fas.C[i]) if mask >> b & 1}
            real = {k for k in fas.C[i] if freq[k] == freq[a[i]]}
            sol[name] = float(A == real)
            continue
        idx = [int(t) for t in rest.split("_")]
        if prefix == "xf":
            sol[name] = float(freq[idx[0]] == idx[1])
        elif prefix == "p":
            j, k, f = idx
            sol[name] = float(freq[j] == f and freq[k] == f)
        elif prefix == "y":
            i, h = idx
            sol[name] = float(freq[a[i]] == freq[a[h]])
        elif prefix == "v":
            sol[name] = float(freq[idx[0]] == freq[idx[1]])
        elif prefix == "c":
            sol[name] = c[idx[0]]
        elif prefix == "z":
            i, h = idx
            sol[name] = c[i] * float(freq[a[i]] == freq[a[h]])
    return sol
