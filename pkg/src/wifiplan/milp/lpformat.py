"""LP-format text output and a reader for the same dialect.

Emitted files use the ``Maximize / Subject To / Bounds / Binary / End``
layout. Variables are listed by family then index; rows keep build order.
Coefficients use the shortest round-tripping float repr, so
emit -> parse -> emit is byte-identical.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Union

from ..errors import ParseError
from .model import MilpModel, Variable, var_sort_key

_WRAP = 200
_SECTIONS = {
    "maximize": "max", "maximise": "max", "max": "max",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st",
    "bounds": "bounds", "bound": "bounds",
    "binary": "bin", "binaries": "bin", "bin": "bin",
    "end": "end",
}
_RELOPS = {"<=": "<=", "=<": "<=", "<": "<=", ">=": ">=", "=>": ">=", ">": ">=", "=": "="}


def fmt_num(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _expr(terms: dict[str, float]) -> list[str]:
    parts = []
    for k, (name, c) in enumerate(terms.items()):
        body = name if abs(c) == 1 else f"{fmt_num(abs(c))} {name}"
        if k == 0:
            parts.append(f"- {body}" if c < 0 else body)
        else:
            parts.append(f"{'-' if c < 0 else '+'} {body}")
    return parts


def _wrapped(head: str, parts: list[str]) -> list[str]:
    lines, cur = [], f" {head}"
    for p in parts:
        if len(cur) + 1 + len(p) > _WRAP and cur.strip() != head:
            lines.append(cur)
            cur = "   " + p
        else:
            cur += " " + p
    lines.append(cur)
    return lines


def _bound_line(var: Variable) -> str:
    lo, hi = var.lower, var.upper
    if math.isinf(lo) and lo < 0 and math.isinf(hi):
        return f" {var.name} free"
    if math.isinf(hi):
        return f" {var.name} >= {fmt_num(lo)}"
    return f" {fmt_num(lo)} <= {var.name} <= {fmt_num(hi)}"


def to_lp_text(model: MilpModel) -> str:
    model.validate()
    out = []
    if model.name:
        out.append(f"\\ Problem: {model.name}")
    out.append("Maximize")
    out.extend(_wrapped("obj:", _expr(model.objective)))
    out.append("Subject To")
    for row in model.rows:
        out.extend(_wrapped(f"{row.name}:", _expr(row.terms) + [row.sense, fmt_num(row.rhs)]))
    cont = model.continuous_vars()
    if cont:
        out.append("Bounds")
        out.extend(_bound_line(model.variables[n]) for n in cont)
    bins = model.binaries()
    if bins:
        out.append("Binary")
        out.extend(f" {n}" for n in bins)
    out.append("End")
    return "\n".join(out) + "\n"


def emit_lp(model: MilpModel, path: Union[str, Path]) -> None:
    Path(path).write_text(to_lp_text(model), encoding="utf-8")


# --------------------------------------------------------------------------
# reader


def _number(tok: str) -> float | None:
    try:
        return float(tok)
    except ValueError:
        return None


def _terms(tokens: list[str], where: str) -> dict[str, float]:
    terms: dict[str, float] = {}
    sign, coef = 1.0, None
    for tok in tokens:
        if tok in ("+", "-"):
            sign = -sign if tok == "-" else sign
            continue
        num = _number(tok)
        if num is not None and not tok[0].isalpha():
            if coef is not None:
                raise ParseError(f"two numbers in a row near {tok!r}", where)
            coef = num
            continue
        terms[tok] = terms.get(tok, 0.0) + sign * (1.0 if coef is None else coef)
        sign, coef = 1.0, None
    if coef is not None:
        raise ParseError("dangling coefficient", where)
    return terms


def parse_lp(text: str) -> MilpModel:
    model = MilpModel()
    section = None
    obj_tokens: list[str] = []
    st_tokens: list[tuple[str, int]] = []
    bounds: list[tuple[list[str], int]] = []
    binaries: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if raw.startswith("\\ Problem:"):
            model.name = raw.split(":", 1)[1].strip()
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = _SECTIONS.get(line.lower())
        if key is not None:
            if key == "max":
                section = "obj"
            else:
                section = key
            if key == "end":
                break
            continue
        if line.lower() in ("minimize", "minimise", "min"):
            raise ParseError("only maximisation models are supported", f"line {lineno}")
        toks = line.split()
        if section == "obj":
            obj_tokens.extend(toks)
        elif section == "st":
            st_tokens.extend((t, lineno) for t in toks)
        elif section == "bounds":
            bounds.append((toks, lineno))
        elif section == "bin":
            binaries.extend(toks)
        else:
            raise ParseError(f"text outside any section: {line!r}", f"line {lineno}")

    if obj_tokens and obj_tokens[0].endswith(":"):
        obj_tokens = obj_tokens[1:]
    objective = _terms(obj_tokens, "objective")

    rows = []
    k = 0
    while k < len(st_tokens):
        tok, lineno = st_tokens[k]
        if not tok.endswith(":"):
            raise ParseError(f"expected row label, got {tok!r}", f"line {lineno}")
        name = tok[:-1]
        k += 1
        start = k
        while k < len(st_tokens) and st_tokens[k][0] not in _RELOPS:
            k += 1
        if k + 1 >= len(st_tokens):
            raise ParseError(f"row {name} has no relation/rhs", f"line {lineno}")
        terms = _terms([t for t, _ in st_tokens[start:k]], f"row {name}")
        sense = _RELOPS[st_tokens[k][0]]
        rhs = _number(st_tokens[k + 1][0])
        if rhs is None:
            raise ParseError(f"bad rhs {st_tokens[k + 1][0]!r}", f"line {st_tokens[k + 1][1]}")
        rows.append((name, terms, sense, rhs))
        k += 2

    declared: dict[str, Variable] = {}
    for toks, lineno in bounds:
        where = f"line {lineno}"
        if len(toks) == 2 and toks[1].lower() == "free":
            declared[toks[0]] = Variable(toks[0], "continuous", -math.inf, math.inf)
        elif len(toks) == 3 and toks[1] == ">=":
            declared[toks[0]] = Variable(toks[0], "continuous", _bound(toks[2], where), math.inf)
        elif len(toks) == 3 and toks[1] == "<=":
            declared[toks[0]] = Variable(toks[0], "continuous", 0.0, _bound(toks[2], where))
        elif len(toks) == 5 and toks[1] == toks[3] == "<=":
            declared[toks[2]] = Variable(
                toks[2], "continuous", _bound(toks[0], where), _bound(toks[4], where)
            )
        else:
            raise ParseError(f"unsupported bound {' '.join(toks)!r}", where)
    for name in binaries:
        declared[name] = Variable(name, "binary", 0.0, 1.0)
    referenced = set(objective)
    for _, terms, _, _ in rows:
        referenced |= set(terms)
    for name in referenced - set(declared):
        declared[name] = Variable(name, "continuous", 0.0, math.inf)

    for name in sorted(declared, key=var_sort_key):
        model.variables[name] = declared[name]
    model.objective = objective
    for name, terms, sense, rhs in rows:
        model.add_row(name, terms.items(), sense, rhs)
    model.validate()
    return model


def _bound(tok: str, where: str) -> float:
    v = _number(tok)
    if v is None:
        raise ParseError(f"bad bound value {tok!r}", where)
    return v


def load_lp(path: Union[str, Path]) -> MilpModel:
    return parse_lp(Path(path).read_text(encoding="utf-8"))
