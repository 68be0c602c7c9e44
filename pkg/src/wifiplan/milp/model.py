"""Solver-agnostic 0-1 linear model container and solution checker."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from ..errors import UnknownVariable

SENSES = ("<=", "=", ">=")
FEAS_TOL = 1e-6

# Variable families, in emission order. The family is the name prefix up to
# the first underscore; the remaining integers are the family index.
VAR_CLASSES = {
    "x": "x_j: AP installed at site j",
    "xf": "x_jf: AP j operates on frequency f",
    "l": "l_ij: TP i associates to AP j",
    "y": "y_ih: TPs i and h interfere",
    "v": "v_jk: APs j and k share a frequency",
    "p": "AND of x_jf and x_kf",
    "w": "w_is: TP i realises interference scenario s",
    "wa": "w_iA: TP i shares its frequency exactly with the APs in subset A",
    "c": "c_ij / c_i: efficiency term of TP i",
    "zy": "z = c_ij * y_ih",
    "zl": "z = c_ij * l_hj",
    "zu": "z = c_ij * (h associated to an AP weaker than j at i)",
    "z": "z = c_i * (i and h share a frequency)",
}
_CLASS_RANK = {k: r for r, k in enumerate(VAR_CLASSES)}
_INT = re.compile(r"\d+")


def var_class(name: str) -> str:
    return name.split("_", 1)[0]


def var_sort_key(name: str):
    prefix, _, rest = name.partition("_")
    return (
        _CLASS_RANK.get(prefix, len(_CLASS_RANK)),
        prefix,
        tuple(int(t) for t in _INT.findall(rest)),
        name,
    )


@dataclass
class Variable:
    name: str
    kind: str = "binary"  # "binary" | "continuous"
    lower: float = 0.0
    upper: float = 1.0


@dataclass
class Row:
    name: str
    terms: dict[str, float]
    sense: str
    rhs: float

    def activity(self, values: Mapping[str, float]) -> float:
        return math.fsum(c * values.get(v, 0.0) for v, c in self.terms.items())

    def violation(self, values: Mapping[str, float]) -> float:
        lhs = self.activity(values)
        if self.sense == "<=":
            return max(0.0, lhs - self.rhs)
        if self.sense == ">=":
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


@dataclass
class MilpModel:
    """Maximisation model: variables, linear objective and rows."""

    name: str = ""
    variables: dict[str, Variable] = field(default_factory=dict)
    objective: dict[str, float] = field(default_factory=dict)
    rows: list[Row] = field(default_factory=list)
    meta: dict = field(default_factory=dict, compare=False, repr=False)
    sense: str = "max"

    def binary(self, name: str) -> str:
        return self._declare(Variable(name, "binary", 0.0, 1.0))

    def continuous(self, name: str, lower: float = 0.0, upper: float = math.inf) -> str:
        return self._declare(Variable(name, "continuous", float(lower), float(upper)))

    def _declare(self, var: Variable) -> str:
        if var.name in self.variables:
            raise ValueError(f"duplicate variable {var.name}")
        if len(var.name) > 255:
            raise ValueError(f"variable name too long: {var.name[:40]}...")
        self.variables[var.name] = var
        return var.name

    def add_objective(self, name: str, coef: float) -> None:
        if name not in self.variables:
            raise UnknownVariable(name)
        c = self.objective.get(name, 0.0) + coef
        if c == 0:
            self.objective.pop(name, None)
        else:
            self.objective[name] = c

    def add_row(self, name: str, terms: Iterable[tuple[str, float]], sense: str, rhs: float) -> None:
        if sense not in SENSES:
            raise ValueError(f"bad sense {sense!r}")
        acc: dict[str, float] = {}
        for var, coef in terms:
            if var not in self.variables:
                raise UnknownVariable(var)
            acc[var] = acc.get(var, 0.0) + coef
        acc = {v: float(c) for v, c in acc.items() if c != 0}
        if not acc:
            if Row(name, {}, sense, float(rhs)).violation({}) > 0:
                raise ValueError(f"row {name} is infeasible with no terms")
            return
        self.rows.append(Row(name, acc, sense, float(rhs)))

    @property
    def annotations(self) -> dict[str, str]:
        return {n: VAR_CLASSES.get(var_class(n), "") for n in self.variables}

    def binaries(self) -> list[str]:
        return sorted((n for n, v in self.variables.items() if v.kind == "binary"), key=var_sort_key)

    def continuous_vars(self) -> list[str]:
        return sorted((n for n, v in self.variables.items() if v.kind != "binary"), key=var_sort_key)

    def validate(self) -> None:
        names = set()
        for row in self.rows:
            if row.name in names:
                raise ValueError(f"duplicate row {row.name}")
            names.add(row.name)
            for v in row.terms:
                if v not in self.variables:
                    raise UnknownVariable(v)
        for v in self.objective:
            if v not in self.variables:
                raise UnknownVariable(v)
        for var in self.variables.values():
            if var.kind == "binary" and (var.lower, var.upper) != (0.0, 1.0):
                raise ValueError(f"binary {var.name} must have bounds [0, 1]")


@dataclass(frozen=True)
class CheckResult:
    feasible: bool
    violated_rows: list[str]
    objective: float


def check_solution(model: MilpModel, sol: Mapping[str, float], tol: float = FEAS_TOL) -> CheckResult:
    """Evaluate every row, bound and integrality requirement; missing
    variables count as zero."""
    for name in sol:
        if name not in model.variables:
            raise UnknownVariable(name)
    values = {n: float(sol.get(n, 0.0)) for n in model.variables}
    violated = [row.name for row in model.rows if row.violation(values) > tol]
    for name, var in model.variables.items():
        x = values[name]
        if x < var.lower - tol or x > var.upper + tol:
            violated.append(f"bound:{name}")
        if var.kind == "binary" and min(abs(x), abs(x - 1)) > tol:
            violated.append(f"integrality:{name}")
    obj = math.fsum(c * values[v] for v, c in model.objective.items())
    return CheckResult(not violated, violated, obj)


def add_products(model: MilpModel, products: list[tuple[str, str, str, list, float]]) -> None:
    """Linearise ``z = c * b`` for each ``(tag, z, c, b, cap)``.

    ``c`` lies in ``[0, cap]`` and ``b`` is a 0/1-valued linear expression
    given as ``[(var, coef), ...]``. Rows: ``z <= cap*b``, ``z <= c`` and
    ``z >= c - cap*(1 - b)``; ``z >= 0`` is the variable's lower bound.
    Rows are grouped by tag, then by kind, then in product order.
    """
    tags = list(dict.fromkeys(p[0] for p in products))
    for tag in tags:
        group = [p for p in products if p[0] == tag]
        for _, z, c, b, cap in group:
            idx = z.split("_", 1)[1]
            model.add_row(f"{tag}ub_{idx}", [(z, 1)] + [(v, -cap * k) for v, k in b], "<=", 0)
        for _, z, c, b, cap in group:
            idx = z.split("_", 1)[1]
            model.add_row(f"{tag}c_{idx}", [(z, 1), (c, -1)], "<=", 0)
        for _, z, c, b, cap in group:
            idx = z.split("_", 1)[1]
            model.add_row(f"{tag}lb_{idx}", [(z, 1), (c, -1)] + [(v, -cap * k) for v, k in b], ">=", -cap)
