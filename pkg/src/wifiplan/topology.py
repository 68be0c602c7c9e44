"""Derived coverage/association sets of an instance, and the association
induced by a set of installed APs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import NotACover
from .instance import Instance


@dataclass(frozen=True)
class Topology:
    """All set structures derived from an :class:`Instance`, computed once.

    Per-pair sets are keyed by ``(i, j)`` for every ``j`` in ``J[i]``:

    * ``weaker[i, j]``   -- APs covering ``i`` weaker than ``j`` (compatible with ``a_i = j``)
    * ``stronger[i, j]`` -- APs covering ``i`` stronger than ``j``
    * ``n_cs[i, j]``     -- ``I_j`` without ``i``
    * ``n_sf[i, j]``     -- TPs covered by some weaker AP but not by ``j``
    """

    inst: Instance
    J: tuple[tuple[int, ...], ...]
    I: tuple[frozenset[int], ...]
    N: tuple[frozenset[int], ...]
    rank: tuple[dict[int, int], ...]
    weaker: dict[tuple[int, int], tuple[int, ...]]
    stronger: dict[tuple[int, int], tuple[int, ...]]
    n_cs: dict[tuple[int, int], frozenset[int]]
    n_sf: dict[tuple[int, int], frozenset[int]]

    @property
    def num_tps(self) -> int:
        return len(self.J)

    @property
    def num_css(self) -> int:
        return len(self.I)

    def rate(self, i: int, j: int) -> int:
        return self.inst.rates[(i, j)]

    def covered_by(self, sites: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for j in sites:
            out |= self.I[j]
        return frozenset(out)

    def is_cover(self, sites: Iterable[int]) -> bool:
        return len(self.covered_by(sites)) == self.num_tps


def build_topology(inst: Instance) -> Topology:
    J = inst.signal_order
    I = tuple(frozenset(c) for c in inst.covers)
    N = []
    for i, Ji in enumerate(J):
        nb: set[int] = set()
        for j in Ji:
            nb |= I[j]
        N.append(frozenset(nb))
    rank = tuple({j: r for r, j in enumerate(Ji)} for Ji in J)
    weaker, stronger, n_cs, n_sf = {}, {}, {}, {}
    for i, Ji in enumerate(J):
        for r, j in enumerate(Ji):
            weaker[i, j] = Ji[r + 1:]
            stronger[i, j] = Ji[:r]
            n_cs[i, j] = I[j] - {i}
            reach: set[int] = set()
            for k in Ji[r + 1:]:
                reach |= I[k]
            n_sf[i, j] = frozenset(reach - I[j])
    return Topology(inst, J, I, tuple(N), rank, weaker, stronger, n_cs, n_sf)


@dataclass(frozen=True)
class Association:
    """Forced TP-to-AP association for a cover: ``ap[i]`` is ``a_i``."""

    sites: tuple[int, ...]
    ap: tuple[int, ...]

    def clients(self, j: int) -> list[int]:
        return [i for i, a in enumerate(self.ap) if a == j]


def normalize_sites(sites: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(sites)))


def associate(topo: Topology, sites: Iterable[int]) -> Association:
    S = normalize_sites(sites)
    installed = set(S)
    ap = []
    uncovered = []
    for i, Ji in enumerate(topo.J):
        a = next((j for j in Ji if j in installed), None)
        if a is None:
            uncovered.append(i)
        ap.append(a)
    if uncovered:
        raise NotACover(uncovered)
    return Association(S, tuple(ap))


def interferers(
    topo: Topology, assoc: Association, freq: Mapping[int, int]
) -> list[frozenset[int]]:
    """Per-TP interferer sets for design ``(S, f)``."""
    a = assoc.ap
    out = []
    for i, Ni in enumerate(topo.N):
        ai = a[i]
        out.append(frozenset(
            h for h in Ni
            if h != i and freq[ai] == freq[a[h]]
            and (ai in topo.rank[h] or a[h] in topo.rank[i])
        ))
    return out


def sf_interferers(topo: Topology, assoc: Association) -> list[frozenset[int]]:
    """Interferers when every AP shares one frequency."""
    a = assoc.ap
    return [
        frozenset(h for h in Ni if h != i and (a[i] in topo.rank[h] or a[h] in topo.rank[i]))
        for i, Ni in enumerate(topo.N)
    ]


def cs_interferers(topo: Topology, assoc: Association) -> list[frozenset[int]]:
    """Interferers under complete separation: co-associated TPs only."""
    a = assoc.ap
    return [frozenset(h for h in Ni if h != i and a[h] == a[i]) for i, Ni in enumerate(topo.N)]
