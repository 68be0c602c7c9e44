"""Command-line front end: ``wifiplan {generate,evaluate,emit,solve,pipeline}``.

Exit status: 0 on success, 1 for infeasible or oversized inputs, 2 for
unreadable/unwritable files.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import instance as inst_mod
from .aploc import Budget, solve_exact, solve_local_search
from .efficiency import eval_cs, eval_design, eval_pcs, eval_sf
from .errors import BudgetExceeded, ParseError, WifiPlanError
from .freqassign import FaBudget, prune_unused_aps, solve_exact_fa
from .milp import FORMULATIONS, build_model, emit_lp
from .pipeline import DEFAULT_ALPHAS, DEFAULT_FREQS, run_pipeline
from .topology import build_topology

log = logging.getLogger("wifiplan")


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _freq_map(text: str) -> dict[int, int]:
    out = {}
    for item in text.split(","):
        j, f = item.split(":")
        out[int(j)] = int(f)
    return out


def _num(v: float) -> str:
    return format(v, ".10g")


def _gen_config(args) -> inst_mod.GeneratorConfig:
    if args.propagation == "isotropic":
        prop = inst_mod.Isotropic(args.radius)
    else:
        prop = inst_mod.Anisotropic(args.radius_min, args.radius_max, args.sectors)
    return inst_mod.GeneratorConfig(
        num_tps=args.tps,
        num_css=args.css,
        area_side=args.area,
        propagation=prop,
        rng_seed=args.seed,
        num_frequencies=max(args.freqs),
    )


def _load_or_generate(args):
    if args.instance:
        inst = inst_mod.load(args.instance)
        return inst, Path(args.instance).stem
    return inst_mod.generate(_gen_config(args)), f"seed{args.seed}"


def cmd_generate(args) -> None:
    inst = inst_mod.generate(_gen_config(args))
    if args.out:
        inst_mod.save(inst, args.out)
    else:
        sys.stdout.write(inst_mod.to_json(inst))


def cmd_evaluate(args) -> None:
    topo = build_topology(inst_mod.load(args.instance))
    sites = _ints(args.sites)
    if args.freq_map:
        print(_num(eval_design(topo, sites, _freq_map(args.freq_map)).total))
    elif args.alpha is not None:
        print(_num(eval_pcs(topo, sites, args.alpha).total))
    else:
        print(f"e_sf={_num(eval_sf(topo, sites).total)} e_cs={_num(eval_cs(topo, sites).total)}")


def cmd_emit(args) -> None:
    topo = build_topology(inst_mod.load(args.instance))
    sites = _ints(args.sites) if args.sites else None
    model = build_model(args.formulation, topo, alpha=args.alpha, sites=sites, num_freqs=args.freqs[0])
    emit_lp(model, args.out)
    log.info("wrote %s (%d variables, %d rows)", args.out, len(model.variables), len(model.rows))


def cmd_solve(args) -> None:
    topo = build_topology(inst_mod.load(args.instance))
    if args.solver == "local":
        res = solve_local_search(topo, args.alpha, seed=args.seed)
    else:
        res = solve_exact(topo, args.alpha, Budget(max_sites_exact=args.budget_sites))
    pruned = prune_unused_aps(topo, res.sites)
    out = {
        "alpha": res.alpha,
        "sites": list(res.sites),
        "objective": res.objective,
        "proof_status": res.proof_status,
        "nodes_explored": res.nodes_explored,
        "wfap": {},
    }
    for F in args.freqs:
        try:
            f, val = solve_exact_fa(topo, pruned, F, FaBudget())
            status = "exact"
        except BudgetExceeded as exc:
            (f, val), status = exc.incumbent, "heuristic"
        out["wfap"][str(F)] = {"freq": {str(j): c for j, c in f.items()}, "objective": val.total, "status": status}
    text = json.dumps(out, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_pipeline(args) -> None:
    inst, name = _load_or_generate(args)
    topo = build_topology(inst)
    report = run_pipeline(
        topo,
        alphas=args.alphas,
        freqs=args.freqs,
        solver=args.solver,
        budget_sites=args.budget_sites,
        seed=args.seed,
        timings=not args.no_timings,
        instance_name=name,
    )
    if args.out:
        out = Path(args.out)
        out.write_text(report.to_csv(), encoding="utf-8")
        out.with_suffix(".runs.json").write_text(report.runs_json(), encoding="utf-8")
        if not args.instance and args.save_instance:
            inst_mod.save(inst, args.save_instance)
    else:
        sys.stdout.write(report.to_csv())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wifiplan", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def gen_flags(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tps", type=int, default=100)
        sp.add_argument("--css", type=int, default=50)
        sp.add_argument("--area", type=float, default=100.0)
        sp.add_argument("--propagation", choices=("isotropic", "anisotropic"), default="anisotropic")
        sp.add_argument("--radius", type=float, default=22.0)
        sp.add_argument("--radius-min", type=float, default=15.0)
        sp.add_argument("--radius-max", type=float, default=30.0)
        sp.add_argument("--sectors", type=int, default=16)

    sp = sub.add_parser("generate", help="draw a random instance")
    gen_flags(sp)
    sp.add_argument("--freqs", type=_ints, default=[3])
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("evaluate", help="evaluate a design")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--sites", required=True, help="comma-separated site ids")
    sp.add_argument("--freq-map", help="site:frequency pairs, e.g. 0:0,1:1")
    sp.add_argument("--alpha", type=float)
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("emit", help="write a MILP model in LP format")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--formulation", choices=FORMULATIONS, required=True)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--sites", help="fixed sites (frequency-assignment models)")
    sp.add_argument("--freqs", type=_ints, default=[3])
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_emit)

    sp = sub.add_parser("solve", help="solve AP location then frequency assignment")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--solver", choices=("exact", "local"), default="exact")
    sp.add_argument("--budget-sites", type=int, default=20)
    sp.add_argument("--freqs", type=_ints, default=list(DEFAULT_FREQS))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("pipeline", help="alpha sweep with CSV report")
    gen_flags(sp)
    sp.add_argument("--instance")
    sp.add_argument("--alphas", type=_floats, default=list(DEFAULT_ALPHAS))
    sp.add_argument("--freqs", type=_ints, default=list(DEFAULT_FREQS))
    sp.add_argument("--solver", choices=("auto", "exact", "local"), default="auto")
    sp.add_argument("--budget-sites", type=int, default=20)
    sp.add_argument("--no-timings", action="store_true", help="leave wall-clock columns empty")
    sp.add_argument("--save-instance", help="also save the generated instance here")
    sp.add_argument("--out", help="CSV path; run artifacts go to <stem>.runs.json")
    sp.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WifiPlanError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
