"""Instance builders for tests that do not go through the geometric generator."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from wifiplan.instance import RATE_SET, CandidateSite, Instance, TestPoint


def make_instance(orders: list[list[int]], num_css: int, rates=None, num_frequencies: int = 3) -> Instance:
    """Instance from per-TP signal orders (strongest first)."""
    covers = [[] for _ in range(num_css)]
    for i, order in enumerate(orders):
        for j in order:
            covers[j].append(i)
    if rates is None:
        rates = {(i, j): 54 for i, order in enumerate(orders) for j in order}
    return Instance(
        tps=tuple(TestPoint(i, (float(i), 0.0)) for i in range(len(orders))),
        css=tuple(CandidateSite(j, (float(j), 1.0)) for j in range(num_css)),
        num_frequencies=num_frequencies,
        covers=covers,
        signal_order=orders,
        rates=rates,
    )


def random_instance(rng: random.Random, num_css: int, num_tps: int, max_links: int | None = None) -> Instance:
    max_links = max_links or num_css
    orders = []
    for _ in range(num_tps):
        k = rng.randint(1, min(num_css, max_links))
        orders.append(rng.sample(range(num_css), k))
    rates = {(i, j): rng.choice(RATE_SET) for i, o in enumerate(orders) for j in o}
    return make_instance(orders, num_css, rates)


def random_cover(rng: random.Random, inst: Instance) -> tuple[int, ...]:
    """Random superset of a random cover."""
    S = {rng.choice(order) for order in inst.signal_order}
    for j in range(len(inst.css)):
        if rng.random() < 0.3:
            S.add(j)
    return tuple(sorted(S))


def k4_instance() -> Instance:
    """Four APs, each with a private TP, plus one TP per AP pair covered by
    both and preferring the smaller id: the overlap graph is K4."""
    orders = [[j] for j in range(4)]
    for j in range(4):
        for k in range(j + 1, 4):
            orders.append([j, k])
    return make_instance(orders, 4)


@st.composite
def instances(draw, max_css: int = 5, max_tps: int = 8, min_tps: int = 1):
    m = draw(st.integers(1, max_css))
    n = draw(st.integers(min_tps, max_tps))
    orders = [
        draw(st.lists(st.integers(0, m - 1), min_size=1, max_size=m, unique=True))
        for _ in range(n)
    ]
    rates = {(i, j): draw(st.sampled_from(RATE_SET)) for i, o in enumerate(orders) for j in o}
    return make_instance(orders, m, rates)


@st.composite
def instance_with_cover(draw, **kw):
    inst = draw(instances(**kw))
    base = {draw(st.sampled_from(order)) for order in inst.signal_order}
    extra = draw(st.sets(st.integers(0, len(inst.css) - 1)))
    return inst, tuple(sorted(base | extra))
