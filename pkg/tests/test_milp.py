import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import instance_with_cover, make_instance, random_cover, random_instance
from wifiplan.aploc import solve_exact
from wifiplan.efficiency import eval_design, eval_pcs
from wifiplan.errors import InconsistentDesign, ParseError, TooManyAPs, UnknownVariable
from wifiplan.freqassign import solve_exact_fa
from wifiplan.milp import FORMULATIONS, build_model, embed_design
from wifiplan.milp.lpformat import emit_lp, load_lp, parse_lp, to_lp_text
from wifiplan.milp.model import MilpModel, check_solution
from wifiplan.milp.wfap import build_wfap_h2
from wifiplan.oracle import brute_force_model
from wifiplan.topology import associate, build_topology

PSAP = ("lin-a", "lin-b", "psap-l")
WFAP = ("wfap-h", "wfap-h2", "wfap-l")


def _embed_check(form, topo, S, alpha=0.5, F=3, freq=None):
    S = associate(topo, S).sites
    if form in PSAP:
        model = build_model(form, topo, alpha)
        expected = eval_pcs(topo, S, alpha).total
    else:
        model = build_model(form, topo, sites=S, num_freqs=F)
        expected = eval_design(topo, S, freq).total
    model.validate()
    res = check_solution(model, embed_design(model, topo, S, freq))
    return res, expected


@pytest.mark.parametrize("form", PSAP)
@pytest.mark.parametrize("alpha,value", [(0.0, 108.0), (0.5, 84.6), (1.0, 72.0)])
def test_psap_embed_inst_a(topo, form, alpha, value):
    res, expected = _embed_check(form, topo, (0, 1), alpha)
    assert res.feasible, res.violated_rows
    assert res.objective == pytest.approx(value, abs=1e-6)


@pytest.mark.parametrize("form", WFAP)
@pytest.mark.parametrize("freq,value", [({0: 0, 1: 1}, 108.0), ({0: 1, 1: 1}, 72.0)])
def test_wfap_embed_inst_a(topo, form, freq, value):
    res, _ = _embed_check(form, topo, (0, 1), F=2, freq=freq)
    assert res.feasible, res.violated_rows
    assert res.objective == pytest.approx(value, abs=1e-6)


@pytest.mark.parametrize("form", WFAP)
def test_wfap_single_ap_fixed(form):
    topo = build_topology(make_instance([[0], [0], [0, 1]], 2))
    res, expected = _embed_check(form, topo, (0,), F=3, freq={0: 2})
    assert res.feasible
    assert res.objective == pytest.approx(expected)
    assert expected == pytest.approx(54.0)


@settings(max_examples=25, deadline=None)
@given(ic=instance_with_cover(max_css=5, max_tps=6), alpha=st.floats(0.0, 1.0),
       form=st.sampled_from(PSAP))
def test_psap_embed_random(ic, alpha, form):
    inst, S = ic
    res, expected = _embed_check(form, build_topology(inst), S, alpha)
    assert res.feasible, res.violated_rows
    assert abs(res.objective - expected) <= 1e-6


@settings(max_examples=25, deadline=None)
@given(ic=instance_with_cover(max_css=5, max_tps=6), F=st.sampled_from([1, 2, 3]),
       form=st.sampled_from(WFAP), data=st.data())
def test_wfap_embed_random(ic, F, form, data):
    inst, S = ic
    topo = build_topology(inst)
    sites = associate(topo, S).sites
    freq = {j: data.draw(st.integers(0, F - 1)) for j in sites}
    res, expected = _embed_check(form, topo, S, F=F, freq=freq)
    assert res.feasible, res.violated_rows
    assert abs(res.objective - expected) <= 1e-6


@pytest.mark.parametrize("form", ["lin-a", "lin-b"])
def test_endpoint_alphas_drop_products(topo, form):
    # complete-separation products carry 1 - alpha, single-frequency ones alpha
    model = build_model(form, topo, 1.0)
    assert not any(v.startswith("zl_") for v in model.variables)
    model = build_model(form, topo, 0.0)
    assert not any(v.startswith(("zy_", "zu_", "y_")) for v in model.variables)


def test_single_tp_single_cs_optimum():
    topo = build_topology(make_instance([[0]], 1, rates={(0, 0): 36}))
    for form in PSAP:
        val, _ = brute_force_model(build_model(form, topo, 0.5))
        assert val == pytest.approx(36.0, abs=1e-6)


def test_isolated_tps_psap_l():
    rates = {(0, 0): 48, (0, 1): 54, (1, 2): 24, (2, 3): 6, (2, 2): 12}
    inst = make_instance([[0, 1], [2], [3, 2]], 4, rates=rates)
    topo = build_topology(inst)
    model = build_model("psap-l", topo, 0.5)
    # TP 2 and TP 1 share CS 2, so only TP 0 is fully isolated
    assert sum(v.startswith("w_0_") for v in model.variables) == 2
    val, _ = brute_force_model(model)
    assert val == pytest.approx(solve_exact(topo, 0.5).objective, abs=1e-6)


def test_truly_isolated_tps_optimum():
    rates = {(0, 0): 48, (0, 1): 54, (1, 2): 24, (2, 3): 6}
    topo = build_topology(make_instance([[0, 1], [2], [3]], 4, rates=rates))
    val, _ = brute_force_model(build_model("psap-l", topo, 0.3))
    assert val == pytest.approx(54 + 24 + 6, abs=1e-6)


def _micro(seed, form, max_bins=22, tries=500):
    """First small random instance whose model has at most ``max_bins`` binaries."""
    rng = random.Random(seed)
    for _ in range(tries):
        inst = random_instance(rng, rng.randint(2, 4), rng.randint(2, 5), max_links=2)
        topo = build_topology(inst)
        if form in PSAP:
            model = build_model(form, topo, rng.choice([0.0, 0.3, 0.5, 1.0]))
        else:
            S = random_cover(rng, inst)
            model = build_model(form, topo, sites=S, num_freqs=rng.choice([2, 3]))
        if len(model.binaries()) <= max_bins:
            return topo, model
    raise RuntimeError("no micro instance found")


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("form", FORMULATIONS)
def test_micro_optimum_matches(seed, form):
    topo, model = _micro(seed, form, max_bins=16)
    val, sol = brute_force_model(model)
    if form in PSAP:
        expected = solve_exact(topo, model.meta["alpha"]).objective
    else:
        _, best = solve_exact_fa(topo, model.meta["sites"], model.meta["num_freqs"])
        expected = best.total
    assert val == pytest.approx(expected, abs=1e-6)
    assert check_solution(model, sol).feasible


def test_pigeonhole_counts(topo):
    orders = [[j] for j in range(4)] + [[0, 1], [1, 2], [2, 3]]
    topo4 = build_topology(make_instance(orders, 4))
    m3 = build_wfap_h2(topo4, (0, 1, 2, 3), 3)
    pig = [r for r in m3.rows if r.name.startswith("pig_")]
    assert len(pig) == 1 and len(pig[0].terms) == 6
    assert sum(r.name.startswith("tr") for r in m3.rows) == 3 * 4
    topo3 = build_topology(make_instance([[0], [1], [2]], 3))
    m = build_wfap_h2(topo3, (0, 1, 2), 3)
    assert not any(r.name.startswith("pig_") for r in m.rows)
    assert sum(r.name.startswith("tr") for r in m.rows) == 3


def test_pigeonhole_budget():
    topo = build_topology(make_instance([[j] for j in range(12)], 12))
    with pytest.raises(TooManyAPs):
        build_wfap_h2(topo, range(12), 3, row_budget=100)


def test_h2_every_three_partition_feasible():
    orders = [[j] for j in range(4)] + [[0, 1], [1, 2], [2, 3], [3, 0]]
    topo = build_topology(make_instance(orders, 4))
    model = build_wfap_h2(topo, range(4), 3)
    for labels in itertools.product(range(3), repeat=4):
        f = dict(enumerate(labels))
        res = check_solution(model, embed_design(model, topo, range(4), f))
        assert res.feasible
        assert res.objective == pytest.approx(eval_design(topo, range(4), f).total, abs=1e-6)


def test_wfap_l_empty_interferer_set():
    topo = build_topology(make_instance([[0], [0], [1]], 2))
    model = build_model("wfap-l", topo, sites=(0, 1), num_freqs=2)
    # TP 2 has no potential interferers: one scenario worth rate / (1 + |H|)
    assert [v for v in model.variables if v.startswith("wa_2_")] == ["wa_2_m0"]
    assert model.objective["wa_2_m0"] == 54.0
    assert model.objective["wa_0_m0"] == 27.0


def test_all_zero_psap_infeasible(topo):
    model = build_model("psap-l", topo, 0.5)
    res = check_solution(model, {})
    assert not res.feasible
    assert {f"assign_{i}" for i in range(3)} <= set(res.violated_rows)


@pytest.mark.parametrize("form", FORMULATIONS)
def test_mutation_detected(topo, form):
    if form in PSAP:
        model = build_model(form, topo, 0.5)
        sol = embed_design(model, topo, (0, 1))
    else:
        model = build_model(form, topo, sites=(0, 1), num_freqs=2)
        sol = embed_design(model, topo, (0, 1), {0: 0, 1: 1})
    base = check_solution(model, sol)
    assert base.feasible
    for b in model.binaries():
        flipped = dict(sol)
        flipped[b] = 1 - sol.get(b, 0.0)
        res = check_solution(model, flipped)
        assert not res.feasible or abs(res.objective - base.objective) > 1e-9, b


def test_unknown_variable(topo):
    model = build_model("lin-b", topo, 0.5)
    with pytest.raises(UnknownVariable):
        check_solution(model, {"nope": 1})


def test_bounds_and_integrality_reported():
    m = MilpModel("t")
    m.binary("x_0")
    m.continuous("c_0", 0, 2)
    res = check_solution(m, {"x_0": 0.5, "c_0": 3})
    assert set(res.violated_rows) == {"integrality:x_0", "bound:c_0"}


def test_non_cover_rejected(topo):
    for form in PSAP:
        model = build_model(form, topo, 0.5)
        with pytest.raises(InconsistentDesign):
            embed_design(model, topo, (1,))
    model = build_model("wfap-h", topo, sites=(0, 1), num_freqs=2)
    with pytest.raises(InconsistentDesign):
        embed_design(model, topo, (0, 1))
    with pytest.raises(InconsistentDesign):
        embed_design(model, topo, (0, 1), {0: 0, 1: 5})


def test_empty_model_lp():
    text = to_lp_text(MilpModel())
    lines = text.splitlines()
    assert "Maximize" in lines and " obj:" in lines and lines[-1] == "End"
    assert parse_lp(text) == MilpModel()


@pytest.mark.parametrize("form", FORMULATIONS)
def test_lp_round_trip(tmp_path, form):
    rng = random.Random(4)
    inst = random_instance(rng, 5, 8, max_links=3)
    topo = build_topology(inst)
    S = random_cover(rng, inst)
    model = build_model(form, topo, 0.4, sites=S, num_freqs=3)
    emit_lp(model, tmp_path / "a.lp")
    emit_lp(model, tmp_path / "b.lp")
    first = (tmp_path / "a.lp").read_bytes()
    assert first == (tmp_path / "b.lp").read_bytes()
    back = load_lp(tmp_path / "a.lp")
    assert back == model
    assert to_lp_text(back).encode() == first


def test_lp_inst_a_psap_l(topo):
    model = build_model("psap-l", topo, 0.5)
    text = to_lp_text(model)
    assert parse_lp(text) == model
    assert "Binary" in text and "Subject To" in text


def test_lp_long_rows_wrap():
    m = MilpModel("wide")
    names = [m.binary(f"x_{k}") for k in range(200)]
    m.add_row("big", [(n, 1.5) for n in names], "<=", 7)
    text = to_lp_text(m)
    assert max(len(line) for line in text.splitlines()) <= 200
    assert parse_lp(text) == m


@pytest.mark.parametrize("bad", ["Maximize\n obj: 2 x\nSubject To\n r: x <<= 1\nEnd\n",
                                 "Minimize\n obj: x\nEnd\n", "garbage"])
def test_lp_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_lp(bad)
