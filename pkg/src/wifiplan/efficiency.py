"""Access-efficiency objectives.

Every evaluator returns per-TP terms ``rate / denominator`` and their sum,
where the denominator counts interferers under the chosen assumption:
actual frequencies, single frequency (SF), complete separation (CS) or
the alpha-blend of the last two (PCS).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InvalidAlpha
from .topology import (
    Association,
    Topology,
    associate,
    cs_interferers,
    interferers,
    sf_interferers,
)


@dataclass(frozen=True)
class EfficiencyValue:
    total: float
    per_tp: tuple[float, ...]


def _value(terms: list[float]) -> EfficiencyValue:
    return EfficiencyValue(math.fsum(terms), tuple(terms))


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:  # also rejects NaN
        raise InvalidAlpha(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


def _rates(topo: Topology, assoc: Association) -> list[int]:
    return [topo.rate(i, a) for i, a in enumerate(assoc.ap)]


def eval_design(
    topo: Topology, sites: Iterable[int], freq: Mapping[int, int]
) -> EfficiencyValue:
    assoc = associate(topo, sites)
    phi = interferers(topo, assoc, freq)
    return _value([g / (1 + len(p)) for g, p in zip(_rates(topo, assoc), phi)])


def eval_sf(topo: Topology, sites: Iterable[int]) -> EfficiencyValue:
    assoc = associate(topo, sites)
    phi = sf_interferers(topo, assoc)
    return _value([g / (1 + len(p)) for g, p in zip(_rates(topo, assoc), phi)])


def eval_cs(topo: Topology, sites: Iterable[int]) -> EfficiencyValue:
    assoc = associate(topo, sites)
    phi = cs_interferers(topo, assoc)
    return _value([g / (1 + len(p)) for g, p in zip(_rates(topo, assoc), phi)])


def eval_pcs(
    topo: Topology, sites: Iterable[int], alpha: float, form: str = "split"
) -> EfficiencyValue:
    """Partial-separation efficiency.

    ``form="blend"`` weighs the SF and CS interferer counts by ``alpha`` and
    ``1 - alpha``; ``form="split"`` charges CS interferers fully and only the
    frequency-dependent remainder by ``alpha``. The two are algebraically
    equal; ``split`` is the default because it is exactly non-increasing in
    ``alpha`` and exact at both endpoints in floating point.
    """
    alpha = check_alpha(alpha)
    assoc = associate(topo, sites)
    sf = sf_interferers(topo, assoc)
    cs = cs_interferers(topo, assoc)
    terms = []
    for g, p_sf, p_cs in zip(_rates(topo, assoc), sf, cs):
        if form == "blend":
            den = 1 + alpha * len(p_sf) + (1 - alpha) * len(p_cs)
        elif form == "split":
            den = 1 + alpha * len(p_sf - p_cs) + len(p_cs)
        else:
            raise ValueError(f"unknown form {form!r}")
        terms.append(g / den)
    return _value(terms)
