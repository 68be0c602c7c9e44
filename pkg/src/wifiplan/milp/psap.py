"""AP-location models: two linearisations of the hyperbolic model
(``lin-a``, ``lin-b``) and the scenario-enumeration model (``psap-l``)."""

from __future__ import annotations

from typing import Iterable

from ..aploc import enumerate_scenarios, realized_scenario
from ..efficiency import check_alpha
from ..errors import InconsistentDesign, NotACover
from ..topology import Topology, associate
from .model import MilpModel, add_products


def _location_part(model: MilpModel, topo: Topology) -> None:
    """x/l variables with the assignment, install and nearest-AP rows."""
    for j in range(topo.num_css):
        model.binary(f"x_{j}")
    for i, Ji in enumerate(topo.J):
        for j in Ji:
            model.binary(f"l_{i}_{j}")
    for i, Ji in enumerate(topo.J):
        model.add_row(f"assign_{i}", [(f"l_{i}_{j}", 1) for j in Ji], "=", 1)
    for i, Ji in enumerate(topo.J):
        for j in Ji:
            model.add_row(f"install_{i}_{j}", [(f"l_{i}_{j}", 1), (f"x_{j}", -1)], "<=", 0)
    for i, Ji in enumerate(topo.J):
        for j in Ji:
            terms = [(f"x_{j}", 1)] + [(f"l_{i}_{k}", 1) for k in topo.weaker[i, j]]
            model.add_row(f"nearest_{i}_{j}", terms, "<=", 1)


def _pairs(topo: Topology):
    for i, Ni in enumerate(topo.N):
        for h in sorted(Ni):
            if h > i:
                yield i, h


def build_psap_lin(topo: Topology, alpha: float, variant: str = "lin-a") -> MilpModel:
    """Linearised hyperbolic AP-location model.

    ``lin-a``: one interference variable ``y`` per unordered TP pair, and a
    product variable for every ``c_ij * y_ih`` and ``c_ij * l_hj``.

    ``lin-b``: ``y`` is eliminated. Given ``a_i = j`` every other TP of
    ``I_j`` is a single-frequency interferer, and the remaining ones are the
    TPs of ``N^SF_ij`` associated to a weaker AP of ``i``; that indicator is
    a sum of ``l`` variables, so only one product per such TP is needed.
    """
    alpha = check_alpha(alpha)
    variant = variant.lower()
    if variant not in ("lin-a", "lin-b"):
        raise ValueError(f"unknown variant {variant!r}")
    model = MilpModel(name=variant, meta={"formulation": variant, "alpha": alpha})
    _location_part(model, topo)
    rows_after = []

    if variant == "lin-a":
        if alpha > 0:
            for i, h in _pairs(topo):
                model.binary(f"y_{i}_{h}")
            for i, h in _pairs(topo):
                common = [j for j in topo.J[i] if j in topo.rank[h]]
                model.add_row(f"interf_{i}_{h}", [(f"y_{i}_{h}", 1)] + [(f"l_{i}_{j}", -1) for j in common], ">=", 0)
                model.add_row(f"interf_{h}_{i}", [(f"y_{i}_{h}", 1)] + [(f"l_{h}_{j}", -1) for j in common], ">=", 0)
        for i, Ji in enumerate(topo.J):
            for j in Ji:
                g = topo.rate(i, j)
                c = model.continuous(f"c_{i}_{j}", 0.0, g)
                model.add_objective(c, 1)
                defn = [(c, 1), (f"l_{i}_{j}", -g)]
                if alpha > 0:
                    for h in sorted(topo.N[i] - {i}):
                        z = model.continuous(f"zy_{i}_{h}_{j}", 0.0, g)
                        y = f"y_{min(i, h)}_{max(i, h)}"
                        rows_after.append(("zy", z, c, [(y, 1)], g))
                        defn.append((z, alpha))
                if alpha < 1:
                    for h in sorted(topo.n_cs[i, j]):
                        z = model.continuous(f"zl_{i}_{h}_{j}", 0.0, g)
                        rows_after.append(("zl", z, c, [(f"l_{h}_{j}", 1)], g))
                        defn.append((z, 1 - alpha))
                model.add_row(f"cdef_{i}_{j}", defn, "=", 0)
    else:
        for i, Ji in enumerate(topo.J):
            for j in Ji:
                g = topo.rate(i, j)
                ncs = topo.n_cs[i, j]
                cap = g / (1 + alpha * len(ncs))
                c = model.continuous(f"c_{i}_{j}", 0.0, cap)
                model.add_objective(c, 1)
                defn = [(c, 1 + alpha * len(ncs)), (f"l_{i}_{j}", -g)]
                if alpha > 0:
                    weaker = topo.weaker[i, j]
                    for h in sorted(topo.n_sf[i, j]):
                        z = model.continuous(f"zu_{i}_{h}_{j}", 0.0, cap)
                        b = [(f"l_{h}_{k}", 1) for k in weaker if k in topo.rank[h]]
                        rows_after.append(("zu", z, c, b, cap))
                        defn.append((z, alpha))
                if alpha < 1:
                    for h in sorted(ncs):
                        z = model.continuous(f"zl_{i}_{h}_{j}", 0.0, cap)
                        rows_after.append(("zl", z, c, [(f"l_{h}_{j}", 1)], cap))
                        defn.append((z, 1 - alpha))
                model.add_row(f"cdef_{i}_{j}", defn, "=", 0)

    add_products(model, rows_after)
    return model


def build_psap_enum(topo: Topology, alpha: float, cap: int = 4096) -> MilpModel:
    """Scenario-enumeration model: one binary per (TP, scenario)."""
    alpha = check_alpha(alpha)
    scen = {i: enumerate_scenarios(topo, i, alpha, cap) for i in range(topo.num_tps)}
    model = MilpModel(name="psap-l", meta={"formulation": "psap-l", "alpha": alpha, "scenarios": scen})
    _location_part(model, topo)
    for i, lst in scen.items():
        for k, s in enumerate(lst):
            w = model.binary(f"w_{i}_s{k}")
            model.add_objective(w, s.coeff)

    def w_of(i, pred):
        return [(f"w_{i}_s{k}", 1) for k, s in enumerate(scen[i]) if pred(s)]

    for i, Ji in enumerate(topo.J):
        for j in Ji:
            model.add_row(f"scen_{i}_{j}", w_of(i, lambda s: s.site == j) + [(f"l_{i}_{j}", -1)], "=", 0)
    for i, h in _pairs(topo):
        common = [j for j in topo.J[i] if j in topo.rank[h]]
        terms = w_of(i, lambda s: h in s.U) + [(f"l_{i}_{j}", 1) for j in common]
        terms += [(v, -c) for v, c in w_of(h, lambda s: i in s.U)]
        terms += [(f"l_{h}_{j}", -1) for j in common]
        model.add_row(f"sym_{i}_{h}", terms, "=", 0)
    for i, Ji in enumerate(topo.J):
        for j in Ji:
            for h in sorted(topo.n_cs[i, j]):
                both = w_of(i, lambda s: s.site == j and h in s.H)
                model.add_row(f"hle_{i}_{j}_{h}", both + [(f"l_{h}_{j}", -1)], "<=", 0)
    for i, Ji in enumerate(topo.J):
        for j in Ji:
            for h in sorted(topo.n_cs[i, j]):
                both = w_of(i, lambda s: s.site == j and h in s.H)
                model.add_row(f"hge_{i}_{j}_{h}", both + [(f"l_{i}_{j}", -1), (f"l_{h}_{j}", -1)], ">=", -1)
    return model


# --------------------------------------------------------------------------
# embedding


def embed_psap(model: MilpModel, topo: Topology, sites: Iterable[int]) -> dict[str, float]:
    """Variable values representing cover ``sites`` in a PSAP model."""
    form = model.meta.get("formulation")
    alpha = model.meta["alpha"]
    try:
        assoc = associate(topo, sites)
    except NotACover as exc:
        raise InconsistentDesign(f"sites are not a cover: {exc}") from exc
    a = assoc.ap
    S = set(assoc.sites)
    if any(not 0 <= j < topo.num_css for j in S):
        raise InconsistentDesign("unknown site id")
    sol: dict[str, float] = {f"x_{j}": float(j in S) for j in range(topo.num_css)}
    for i, Ji in enumerate(topo.J):
        for j in Ji:
            sol[f"l_{i}_{j}"] = float(a[i] == j)

    def sf(i, h):
        return a[i] in topo.rank[h] or a[h] in topo.rank[i]

    term = []
    for i in range(topo.num_tps):
        n_sf = sum(1 for h in topo.N[i] if h != i and sf(i, h))
        n_cs = sum(1 for h in topo.N[i] if h != i and a[h] == a[i])
        term.append(topo.rate(i, a[i]) / (1 + alpha * n_sf + (1 - alpha) * n_cs))

    if form == "psap-l":
        for i, lst in model.meta["scenarios"].items():
            j, H, U = realized_scenario(topo, assoc, i)
            for k, s in enumerate(lst):
                sol[f"w_{i}_s{k}"] = float(s.site == j and s.H == H and s.U == U)
        return sol

    for i, Ji in enumerate(topo.J):
        for j in Ji:
            sol[f"c_{i}_{j}"] = term[i] if a[i] == j else 0.0
    for name in model.variables:
        prefix, _, rest = name.partition("_")
        idx = [int(t) for t in rest.split("_")]
        if prefix == "y":
            sol[name] = float(sf(*idx))
        elif prefix == "zy":
            i, h, j = idx
            sol[name] = sol[f"c_{i}_{j}"] * float(sf(i, h))
        elif prefix == "zl":
            i, h, j = idx
            sol[name] = sol[f"c_{i}_{j}"] * float(a[h] == j)
        elif prefix == "zu":
            i, h, j = idx
            sol[name] = sol[f"c_{i}_{j}"] * float(a[h] in topo.weaker[i, j])
    return sol
