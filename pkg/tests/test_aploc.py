import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import instances, make_instance, random_instance
from wifiplan.aploc import (
    Budget,
    PcsKernel,
    enumerate_scenarios,
    greedy_cover,
    realized_scenario,
    solve_exact,
    solve_local_search,
)
from wifiplan.efficiency import eval_pcs
from wifiplan.errors import BudgetExceeded, ScenarioExplosion
from wifiplan.instance import Anisotropic, GeneratorConfig, generate
from wifiplan.oracle import brute_force_psap, pcs_value
from wifiplan.topology import associate, build_topology


@pytest.mark.parametrize("alpha,value", [(0.0, 108.0), (0.5, 84.6), (1.0, 72.0)])
def test_exact_inst_a(topo, alpha, value):
    res = solve_exact(topo, alpha)
    assert res.sites == (0, 1)
    assert res.objective == pytest.approx(value, abs=1e-9)
    assert res.proof_status == "optimal"
    assert res.association.ap == (0, 0, 1)


def test_single_dominant_site_matches_oracle():
    # site 0 hears everyone at the top rate; the others are local
    inst = make_instance([[0, 1], [0, 1], [0, 2], [0, 2]], 3)
    topo = build_topology(inst)
    for alpha in (0.0, 0.5, 1.0):
        S, val = brute_force_psap(inst, alpha)
        res = solve_exact(topo, alpha)
        assert res.objective == pytest.approx(val, abs=1e-9)
        assert res.sites == S


@settings(max_examples=80, deadline=None)
@given(inst=instances(max_css=7, max_tps=9), alpha=st.sampled_from([0.0, 0.25, 0.6, 1.0]))
def test_exact_matches_oracle(inst, alpha):
    topo = build_topology(inst)
    S, val = brute_force_psap(inst, alpha)
    res = solve_exact(topo, alpha)
    assert abs(res.objective - val) <= 1e-9
    # argmax equal up to ties
    assert abs(pcs_value(inst, res.sites, alpha) - val) <= 1e-9
    assert abs(eval_pcs(topo, res.sites, alpha).total - res.objective) <= 1e-9


def test_budget_exceeded_carries_greedy():
    inst = random_instance(random.Random(0), 12, 20)
    topo = build_topology(inst)
    with pytest.raises(BudgetExceeded) as exc:
        solve_exact(topo, 0.5, Budget(max_sites_exact=10))
    inc = exc.value.incumbent
    assert inc.sites == greedy_cover(topo)
    assert inc.proof_status == "heuristic"


def test_node_limit_returns_heuristic():
    inst = random_instance(random.Random(1), 12, 20, max_links=4)
    topo = build_topology(inst)
    with pytest.raises(BudgetExceeded) as exc:
        solve_exact(topo, 0.5, Budget(max_nodes=5))
    inc = exc.value.incumbent
    assert topo.is_cover(inc.sites)
    assert inc.objective == pytest.approx(eval_pcs(topo, inc.sites, 0.5).total, abs=1e-9)


def test_kernel_matches_evaluator():
    rng = random.Random(3)
    inst = random_instance(rng, 6, 12, max_links=3)
    topo = build_topology(inst)
    kernel = PcsKernel(topo)
    for bits in range(1, 64):
        mask = np.array([(bits >> j) & 1 for j in range(6)], dtype=bool)
        S = tuple(np.flatnonzero(mask))
        val = kernel.value(mask, 0.3)
        if topo.is_cover(S):
            assert val == pytest.approx(eval_pcs(topo, S, 0.3).total, abs=1e-9)
        else:
            assert val is None


def test_local_search_improves_greedy(topo):
    greedy = eval_pcs(topo, greedy_cover(topo), 0.0).total
    assert solve_local_search(topo, 0.0).objective >= greedy


def test_local_search_zero_iters_is_greedy():
    inst = random_instance(random.Random(5), 8, 15)
    topo = build_topology(inst)
    res = solve_local_search(topo, 0.4, iters=0)
    assert res.sites == greedy_cover(topo)
    assert res.objective == pytest.approx(eval_pcs(topo, res.sites, 0.4).total)


@pytest.mark.parametrize("seed", range(10))
def test_local_search_below_exact(seed):
    cfg = GeneratorConfig(25, 12, 50.0, Anisotropic(12.0, 24.0), rng_seed=seed)
    topo = build_topology(generate(cfg))
    for alpha in (0.0, 0.5, 1.0):
        exact = solve_exact(topo, alpha).objective
        heur = solve_local_search(topo, alpha, seed=seed)
        assert topo.is_cover(heur.sites)
        assert heur.objective <= exact + 1e-9


def test_local_search_deterministic():
    topo = build_topology(random_instance(random.Random(8), 10, 20))
    a = solve_local_search(topo, 0.3, seed=4)
    b = solve_local_search(topo, 0.3, seed=4)
    assert a.sites == b.sites and a.objective == b.objective


def test_four_scenarios_for_one_and_one():
    # TP 0: CS 0 also serves TP 1; weaker CS 1 serves TP 2
    inst = make_instance([[0, 1], [0], [1]], 2)
    topo = build_topology(inst)
    sc = [s for s in enumerate_scenarios(topo, 0, 0.5) if s.site == 0]
    assert len(sc) == 4


def test_inst_a_tp_b_scenarios(topo):
    alpha = 0.5
    sc = enumerate_scenarios(topo, 1, alpha)
    assert len(sc) == 6
    got = {(s.site, tuple(sorted(s.H)), tuple(sorted(s.U))): s.coeff for s in sc}
    expected = {
        (0, (), ()): 54 / (1 + alpha),
        (0, (), (2,)): 54 / (1 + 2 * alpha),
        (0, (0,), ()): 27.0,
        (0, (0,), (2,)): 54 / (2 + alpha),
        (1, (), ()): 54 / (1 + alpha),
        (1, (2,), ()): 27.0,
    }
    assert got.keys() == expected.keys()
    for k, v in expected.items():
        assert got[k] == pytest.approx(v, abs=1e-12)


def test_isolated_tp_single_scenario_per_site():
    inst = make_instance([[0, 1]], 2, rates={(0, 0): 48, (0, 1): 12})
    topo = build_topology(inst)
    sc = enumerate_scenarios(topo, 0, 0.7)
    assert [(s.site, s.H, s.U, s.coeff) for s in sc] == [
        (0, frozenset(), frozenset(), 48.0),
        (1, frozenset(), frozenset(), 12.0),
    ]


def test_scenario_explosion():
    inst = make_instance([[0]] * 14, 1)
    topo = build_topology(inst)
    with pytest.raises(ScenarioExplosion) as exc:
        enumerate_scenarios(topo, 0, 0.5, cap=4096)
    assert exc.value.count == 2 ** 13


@settings(max_examples=100, deadline=None)
@given(inst=instances(max_css=6, max_tps=7), alpha=st.floats(0.0, 1.0), data=st.data())
def test_realized_scenario_coefficient_is_term(inst, alpha, data):
    topo = build_topology(inst)
    S = sorted({data.draw(st.sampled_from(o)) for o in inst.signal_order})
    extra = data.draw(st.sets(st.integers(0, inst.num_css - 1)))
    S = sorted(set(S) | extra)
    a = associate(topo, S)
    terms = eval_pcs(topo, S, alpha).per_tp
    for i in range(topo.num_tps):
        j, H, U = realized_scenario(topo, a, i)
        match = [s for s in enumerate_scenarios(topo, i, alpha)
                 if s.site == j and s.H == H and s.U == U]
        assert len(match) == 1
        assert match[0].coeff == pytest.approx(terms[i], abs=1e-12)
