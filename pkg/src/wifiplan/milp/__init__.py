"""0-1 linear models for AP location and frequency assignment, LP-format
I/O and solution checking. No solver is embedded: models are certified by
embedding known designs and by micro-scale enumeration."""

from __future__ import annotations

from typing import Iterable, Mapping, Optional

from ..errors import InconsistentDesign
from ..topology import Topology
from .lpformat import emit_lp, load_lp, parse_lp, to_lp_text
from .model import CheckResult, MilpModel, Row, Variable, check_solution
from .psap import build_psap_enum, build_psap_lin, embed_psap
from .wfap import build_wfap_enum, build_wfap_h, build_wfap_h2, embed_wfap

FORMULATIONS = ("lin-a", "lin-b", "psap-l", "wfap-h", "wfap-h2", "wfap-l")


def embed_design(
    model: MilpModel,
    topo: Topology,
    sites: Iterable[int],
    freq: Optional[Mapping[int, int]] = None,
) -> dict[str, float]:
    """Map a design onto the variables of ``model`` (built by this package).

    PSAP models need only the cover; WFAP models also need ``freq``.
    """
    form = model.meta.get("formulation")
    if form in ("lin-a", "lin-b", "psap-l"):
        return embed_psap(model, topo, sites)
    if form in ("wfap-h", "wfap-h2", "wfap-l"):
        if freq is None:
            raise InconsistentDesign("WFAP models need a frequency map")
        return embed_wfap(model, topo, sites, freq)
    raise InconsistentDesign(f"model has no known formulation (got {form!r})")


def build_model(
    formulation: str,
    topo: Topology,
    alpha: float = 0.0,
    sites: Optional[Iterable[int]] = None,
    num_freqs: int = 3,
) -> MilpModel:
    if formulation in ("lin-a", "lin-b"):
        return build_psap_lin(topo, alpha, formulation)
    if formulation == "psap-l":
        return build_psap_enum(topo, alpha)
    if sites is None:
        raise ValueError(f"{formulation} needs a fixed set of sites")
    if formulation == "wfap-h":
        return build_wfap_h(topo, sites, num_freqs)
    if formulation == "wfap-h2":
        return build_wfap_h2(topo, sites, num_freqs)
    if formulation == "wfap-l":
        return build_wfap_enum(topo, sites, num_freqs)
    raise ValueError(f"unknown formulation {formulation!r}")


__all__ = [
    "FORMULATIONS", "CheckResult", "MilpModel", "Row", "Variable",
    "build_model", "build_psap_enum", "build_psap_lin", "build_wfap_enum",
    "build_wfap_h", "build_wfap_h2", "check_solution", "embed_design",
    "emit_lp", "load_lp", "parse_lp", "to_lp_text",
]
