"""Problem instances: data model, random 2D generators and JSON file I/O.

An instance is propagation-free once built: coverage lists, the per-TP
signal order and the data rates are stored explicitly, so nothing
downstream needs positions.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Union

import numpy as np

from .errors import InvalidConfig, InvalidInstance, ParseError, UncoverableInstance

# 802.11g rate set, Mbps.
RATE_SET = (6, 9, 12, 18, 24, 36, 48, 54)

# (fraction of coverage radius, rate) -- first matching entry wins.
DEFAULT_RATE_THRESHOLDS = (
    (0.25, 54),
    (0.4, 48),
    (0.5, 36),
    (0.65, 24),
    (0.75, 18),
    (0.85, 12),
    (0.95, 9),
    (1.0, 6),
)

Point = tuple[float, float]


@dataclass(frozen=True)
class TestPoint:
    __test__ = False  # keep pytest from collecting this class

    id: int
    pos: Point


@dataclass(frozen=True)
class CandidateSite:
    id: int
    pos: Point


@dataclass(frozen=True, eq=True)
class Instance:
    tps: tuple[TestPoint, ...]
    css: tuple[CandidateSite, ...]
    num_frequencies: int
    covers: tuple[tuple[int, ...], ...]
    signal_order: tuple[tuple[int, ...], ...]
    rates: dict[tuple[int, int], int]
    meta: dict[str, Any] = field(default_factory=dict, compare=True)

    def __post_init__(self) -> None:
        # normalise containers so equality is structural
        object.__setattr__(self, "tps", tuple(self.tps))
        object.__setattr__(self, "css", tuple(self.css))
        object.__setattr__(self, "covers", tuple(tuple(c) for c in self.covers))
        object.__setattr__(
            self, "signal_order", tuple(tuple(o) for o in self.signal_order)
        )
        object.__setattr__(self, "rates", dict(self.rates))
        _validate(self)

    __hash__ = None  # type: ignore[assignment]

    @property
    def num_tps(self) -> int:
        return len(self.tps)

    @property
    def num_css(self) -> int:
        return len(self.css)

    def rate(self, i: int, j: int) -> int:
        return self.rates[(i, j)]


def _validate(inst: Instance) -> None:
    for k, tp in enumerate(inst.tps):
        if tp.id != k:
            raise InvalidInstance(f"expected id {k}, got {tp.id}", f"tps[{k}]")
    for k, cs in enumerate(inst.css):
        if cs.id != k:
            raise InvalidInstance(f"expected id {k}, got {cs.id}", f"css[{k}]")
    if not isinstance(inst.num_frequencies, int) or inst.num_frequencies < 1:
        raise InvalidInstance("must be an integer >= 1", "num_frequencies")
    n, m = len(inst.tps), len(inst.css)
    if len(inst.covers) != m:
        raise InvalidInstance(f"expected {m} lists, got {len(inst.covers)}", "covers")
    if len(inst.signal_order) != n:
        raise InvalidInstance(
            f"expected {n} lists, got {len(inst.signal_order)}", "signal_order"
        )
    for j, cov in enumerate(inst.covers):
        if any(not 0 <= i < n for i in cov):
            raise InvalidInstance("unknown TP id", f"covers[{j}]")
        if any(a >= b for a, b in zip(cov, cov[1:])):
            raise InvalidInstance("must be strictly increasing", f"covers[{j}]")
    covered_by = [set() for _ in range(n)]
    for j, cov in enumerate(inst.covers):
        for i in cov:
            covered_by[i].add(j)
    for i, order in enumerate(inst.signal_order):
        where = f"signal_order[{i}]"
        if any(not 0 <= j < m for j in order):
            raise InvalidInstance("unknown CS id", where)
        if len(set(order)) != len(order):
            raise InvalidInstance("order not strict (duplicate CS id)", where)
        if not order:
            raise InvalidInstance("TP is not coverable", where)
        if set(order) != covered_by[i]:
            raise InvalidInstance(
                f"coverage asymmetry: order {sorted(order)} vs covers {sorted(covered_by[i])}",
                where,
            )
    expected = {(i, j) for i, order in enumerate(inst.signal_order) for j in order}
    if set(inst.rates) != expected:
        missing = sorted(expected - set(inst.rates))
        extra = sorted(set(inst.rates) - expected)
        raise InvalidInstance(f"missing {missing[:3]} extra {extra[:3]}", "rates")
    for key, r in inst.rates.items():
        if r not in RATE_SET:
            raise InvalidInstance(f"rate {r} not in {RATE_SET}", f"rates[{key}]")


# --------------------------------------------------------------------------
# generator


@dataclass(frozen=True)
class Isotropic:
    radius: float


@dataclass(frozen=True)
class Anisotropic:
    radius_min: float
    radius_max: float
    num_sectors: int = 16


@dataclass(frozen=True)
class GeneratorConfig:
    num_tps: int
    num_css: int
    area_side: float
    propagation: Union[Isotropic, Anisotropic]
    rng_seed: int = 0
    rate_thresholds: tuple[tuple[float, int], ...] = DEFAULT_RATE_THRESHOLDS
    num_frequencies: int = 3
    max_retries: int = 1000

    def validate(self) -> None:
        if self.num_tps < 0 or self.num_css < 0:
            raise InvalidConfig("num_tps and num_css must be non-negative")
        if self.num_tps > 0 and self.num_css == 0:
            raise InvalidConfig("TPs cannot be covered without candidate sites")
        if not self.area_side > 0:
            raise InvalidConfig("area_side must be positive")
        prop = self.propagation
        if isinstance(prop, Isotropic):
            if not prop.radius > 0:
                raise InvalidConfig("radius must be positive")
        elif isinstance(prop, Anisotropic):
            if not 0 < prop.radius_min <= prop.radius_max:
                raise InvalidConfig("need 0 < radius_min <= radius_max")
            if prop.num_sectors < 1:
                raise InvalidConfig("num_sectors must be >= 1")
        else:
            raise InvalidConfig(f"unknown propagation model {prop!r}")
        th = self.rate_thresholds
        if not th:
            raise InvalidConfig("rate_thresholds must be non-empty")
        fracs = [f for f, _ in th]
        rates = [r for _, r in th]
        if any(a >= b for a, b in zip(fracs, fracs[1:])):
            raise InvalidConfig("rate_thresholds must have increasing fractions")
        if any(a <= b for a, b in zip(rates, rates[1:])):
            raise InvalidConfig("rate_thresholds must have strictly decreasing rates")
        if fracs[-1] < 1.0:
            raise InvalidConfig("last rate threshold must reach the coverage edge (1.0)")
        if any(r not in RATE_SET for r in rates):
            raise InvalidConfig(f"rates must come from {RATE_SET}")
        if not 0 <= self.rng_seed < 2**64:
            raise InvalidConfig("rng_seed must be a 64-bit unsigned integer")
        if self.num_frequencies < 1 or self.max_retries < 0:
            raise InvalidConfig("num_frequencies >= 1 and max_retries >= 0 required")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        model = "isotropic" if isinstance(self.propagation, Isotropic) else "anisotropic"
        d["propagation"] = {"model": model, **asdict(self.propagation)}
        d["rate_thresholds"] = [list(t) for t in self.rate_thresholds]
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GeneratorConfig":
        d = dict(d)
        prop = dict(d.pop("propagation"))
        model = prop.pop("model")
        d["propagation"] = Isotropic(**prop) if model == "isotropic" else Anisotropic(**prop)
        d["rate_thresholds"] = tuple(tuple(t) for t in d["rate_thresholds"])
        return cls(**d)


def _effective_radius(prop, sector_radii: np.ndarray | None, dx: float, dy: float) -> float:
    if isinstance(prop, Isotropic):
        return prop.radius
    n = prop.num_sectors
    width = 2 * math.pi / n
    theta = math.atan2(dy, dx) % (2 * math.pi)
    # radii are anchored at sector centres; interpolate linearly between them
    u = theta / width - 0.5
    k0 = math.floor(u)
    t = u - k0
    r0 = sector_radii[k0 % n]
    r1 = sector_radii[(k0 + 1) % n]
    return float((1 - t) * r0 + t * r1)


def generate(cfg: GeneratorConfig) -> Instance:
    """Draw a random instance; a pure function of ``cfg``."""
    cfg.validate()
    rng = np.random.default_rng(cfg.rng_seed)
    prop = cfg.propagation
    side = cfg.area_side

    cs_pos = [tuple(float(v) for v in rng.uniform(0.0, side, size=2)) for _ in range(cfg.num_css)]
    if isinstance(prop, Anisotropic):
        radii = rng.uniform(prop.radius_min, prop.radius_max, size=(cfg.num_css, prop.num_sectors))
    else:
        radii = None

    tp_pos: list[Point] = []
    links: list[list[tuple[float, int, int]]] = []  # per TP: (dist, cs, rate)
    for i in range(cfg.num_tps):
        for _ in range(cfg.max_retries + 1):
            p = (float(rng.uniform(0.0, side)), float(rng.uniform(0.0, side)))
            found = []
            for j, q in enumerate(cs_pos):
                dx, dy = p[0] - q[0], p[1] - q[1]
                d = math.hypot(dx, dy)
                r = _effective_radius(prop, None if radii is None else radii[j], dx, dy)
                if d <= r:
                    rate = next(rt for frac, rt in cfg.rate_thresholds if frac * r >= d)
                    found.append((d, j, rate))
            if found:
                break
        else:
            raise UncoverableInstance(
                f"TP {i} still uncovered after {cfg.max_retries} re-samples"
            )
        tp_pos.append(p)
        links.append(sorted(found))

    covers: list[list[int]] = [[] for _ in range(cfg.num_css)]
    signal_order = []
    rates = {}
    for i, found in enumerate(links):
        signal_order.append([j for _, j, _ in found])
        for _, j, rate in found:
            covers[j].append(i)
            rates[(i, j)] = rate
    return Instance(
        tps=tuple(TestPoint(i, p) for i, p in enumerate(tp_pos)),
        css=tuple(CandidateSite(j, p) for j, p in enumerate(cs_pos)),
        num_frequencies=cfg.num_frequencies,
        covers=covers,
        signal_order=signal_order,
        rates=rates,
        meta={"generator": cfg.to_dict(), "seed": cfg.rng_seed},
    )


# --------------------------------------------------------------------------
# file I/O


def to_json(inst: Instance) -> str:
    payload = {
        "tps": [{"id": t.id, "pos": list(t.pos)} for t in inst.tps],
        "css": [{"id": c.id, "pos": list(c.pos)} for c in inst.css],
        "num_frequencies": inst.num_frequencies,
        "covers": [list(c) for c in inst.covers],
        "signal_order": [list(o) for o in inst.signal_order],
        "rates": {f"{i},{j}": inst.rates[(i, j)] for i, j in sorted(inst.rates)},
        "meta": inst.meta,
    }
    return json.dumps(payload, indent=2) + "\n"


def from_json(text: str) -> Instance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} col {exc.colno}") from exc
    if not isinstance(d, dict):
        raise ParseError("top level must be an object")
    keys = ("tps", "css", "num_frequencies", "covers", "signal_order", "rates")
    for key in keys:
        if key not in d:
            raise ParseError("missing key", key)
    try:
        tps = tuple(TestPoint(int(t["id"]), (float(t["pos"][0]), float(t["pos"][1]))) for t in d["tps"])
        css = tuple(CandidateSite(int(c["id"]), (float(c["pos"][0]), float(c["pos"][1]))) for c in d["css"])
        rates = {}
        for key, r in d["rates"].items():
            i, j = key.split(",")
            rates[(int(i), int(j))] = int(r) if float(r).is_integer() else r
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed entry ({exc})", "tps/css/rates") from exc
    try:
        return Instance(
            tps=tps,
            css=css,
            num_frequencies=d["num_frequencies"],
            covers=d["covers"],
            signal_order=d["signal_order"],
            rates=rates,
            meta=d.get("meta", {}),
        )
    except InvalidInstance as exc:
        raise ParseError(str(exc).split(": ", 1)[1], exc.field) from exc
    except TypeError as exc:
        raise ParseError(str(exc)) from exc


def save(inst: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(to_json(inst), encoding="utf-8")


def load(path: Union[str, Path]) -> Instance:
    return from_json(Path(path).read_text(encoding="utf-8"))
