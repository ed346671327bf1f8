"""Command line front end.

Exit status of ``solve``: 0 for YES, 1 for NO, 2 for errors and exhausted
budgets.  Structured output goes to stdout, prose to stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from . import cluster, cotw, oracle, twdp
from .errors import BudgetExhausted, CapacityError, SelcolError
from .generators import ComposeInput, compose, gen_random
from .instance import (
    Instance, complement, parse_graph, parse_instance, serialize_instance, verdict_from_json,
    verdict_to_json, verify_solution,
)
from .partitions import bell
from .treedecomp import heuristic_decompose, make_nice, parse_td, serialize_td, validate_td, width

ALGORITHMS = ("auto", "tw", "cluster", "cotw", "brute")
DEFAULT_CEILING = 1e9


@dataclass
class SolveConfig:
    algorithm: str = "auto"
    td_path: str | None = None
    cotd_path: str | None = None
    max_parts: int = twdp.DEFAULT_MAX_PARTS
    d_max: int = cluster.DEFAULT_DMAX
    max_nodes: int = oracle.OracleLimits.max_nodes
    time_budget: float = oracle.OracleLimits.time_budget
    ceiling: float = DEFAULT_CEILING
    force: bool = False
    threads: int = 1
    labeled: bool = False
    dump_flow: str | None = None
    output: str = "structured"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        for name in ("max_parts", "max_nodes", "time_budget", "ceiling", "threads"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name.replace('_', '-')} must be positive")
        if self.d_max < 0:
            raise ValueError("dmax must be non-negative")
        if self.output not in ("human", "structured"):
            raise ValueError("output must be 'human' or 'structured'")


# ------------------------------------------------------------ cost envelopes

def estimate_tw(p, w, n):
    """Pairs of 2^p masks at a join times B_{w+2} bag colorings over O(w n) nodes."""
    return 4 ** p * bell(w + 2) * (w + 1) * n


def estimate_cluster(u, n):
    return 2 ** u * bell(u) * n * n


def estimate_cotw(p, wbar, k, n):
    return 3 ** (wbar + p) * k * k * (wbar + 1) ** 2 * n


def estimate_brute(selections, p):
    return selections * p * p


@dataclass
class Dispatch:
    algorithm: str
    estimates: dict
    params: dict
    rationale: str = ""


def gather_params(inst: Instance, ntd=None, cntd=None, d_max=cluster.DEFAULT_DMAX):
    ntd = ntd or make_nice(heuristic_decompose(inst.graph))
    cntd = cntd or make_nice(heuristic_decompose(complement(inst.graph)))
    try:
        cs = cluster.find_cluster_modulator(inst.graph, d_max)
        u = len(cs.modulator)
    except CapacityError:
        cs, u = None, None
    params = {
        "n": inst.n, "p": inst.p, "k": inst.k, "width": ntd.width, "complement_width": cntd.width,
        "modulator_size": u, "selections": inst.selection_count(),
    }
    return params, ntd, cntd, cs


def dispatch_auto(inst: Instance, ntd=None, cntd=None, d_max=cluster.DEFAULT_DMAX,
                  ceiling=DEFAULT_CEILING, force=False) -> Dispatch:
    """Choose the algorithm with the smallest cost estimate.

    Raises :class:`CapacityError` listing every estimate when all of them
    exceed ``ceiling`` and ``force`` is off.
    """
    params, _, _, _ = gather_params(inst, ntd, cntd, d_max)
    n, p, k = params["n"], params["p"], params["k"]
    est = {
        "tw": float(estimate_tw(p, params["width"], n)),
        "cluster": math.inf if params["modulator_size"] is None
        else float(estimate_cluster(params["modulator_size"], n)),
        "cotw": float(estimate_cotw(p, params["complement_width"], k, n)),
        "brute": float(estimate_brute(params["selections"], p)),
    }
    if inst.k >= params["width"] + 2:
        est["tw"] = float(n)
    if cotw.early_reject(p, k, params["complement_width"]):
        est["cotw"] = float(n * n)
    best = min(est, key=lambda a: (est[a], ALGORITHMS.index(a)))
    shown = ", ".join(f"{a}={est[a]:.3g}" for a in est)
    if est[best] > ceiling and not force:
        raise CapacityError(
            f"no tractable strategy: every estimate exceeds the ceiling {ceiling:.3g} ({shown}); "
            f"parameters {params}; pass --force to run anyway"
        )
    return Dispatch(best, est, params, f"{best} has the smallest estimate ({shown})")


# ------------------------------------------------------------------ commands

def _read(path):
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_ntd(path, g):
    td, _ = parse_td(_read(path))
    problems = validate_td(g, td)
    if problems:
        raise SelcolError(f"decomposition {path} is invalid: " + "; ".join(problems))
    return make_nice(td)


def _env(name, cast, default):
    raw = os.environ.get(name)
    return default if raw is None else cast(raw)


def solve(inst: Instance, cfg: SolveConfig):
    ntd = _load_ntd(cfg.td_path, inst.graph) if cfg.td_path and cfg.algorithm != "cotw" else None
    cpath = cfg.cotd_path or (cfg.td_path if cfg.algorithm == "cotw" else None)
    cntd = _load_ntd(cpath, complement(inst.graph)) if cpath else None
    algo = cfg.algorithm
    extra = {}
    if algo == "auto":
        d = dispatch_auto(inst, ntd, cntd, cfg.d_max, cfg.ceiling, cfg.force)
        algo = d.algorithm
        extra = {
            "dispatch": algo,
            "estimates": {a: (None if math.isinf(e) else e) for a, e in d.estimates.items()},
        }
    if algo == "tw":
        verdict = twdp.solve_tw(inst, ntd, threads=cfg.threads, max_parts=cfg.max_parts)
    elif algo == "cotw":
        verdict = cotw.solve_cotw(inst, cntd, threads=cfg.threads, max_parts=cfg.max_parts)
    elif algo == "cluster":
        verdict = cluster.solve_cluster(
            inst, cfg.d_max, labeled=cfg.labeled, threads=cfg.threads, dump_flow=cfg.dump_flow
        )
    else:
        verdict = oracle.brute_force(inst, oracle.OracleLimits(cfg.max_nodes, cfg.time_budget))
    verdict.stats.update(extra)
    if verdict.witness is not None:
        problems = verify_solution(inst, verdict.witness)
        if problems:
            raise SelcolError(f"internal error: {algo} produced an invalid witness: {problems}")
    return verdict


def cmd_solve(args):
    cfg = SolveConfig(
        algorithm=args.algo, td_path=args.td, cotd_path=args.cotd, max_parts=args.max_parts,
        d_max=args.dmax, max_nodes=args.max_nodes, time_budget=args.time_budget,
        ceiling=args.ceiling, force=args.force, threads=args.threads, labeled=args.labeled,
        dump_flow=args.dump_flow, output=args.output,
    )
    inst = parse_instance(_read(args.instance))
    verdict = solve(inst, cfg)
    summary = (
        f"{'YES' if verdict.answer else 'NO'} by {verdict.stats.get('solver')} "
        f"in {verdict.stats.get('elapsed', 0.0):.3f}s"
    )
    if cfg.output == "structured":
        sys.stdout.write(verdict_to_json(verdict))
        print(summary, file=sys.stderr)
    else:
        print(summary)
        if verdict.witness is not None:
            print("selected:", " ".join(map(str, sorted(verdict.witness.selected))))
            print("coloring:", " ".join(f"{v}:{c}" for v, c in sorted(verdict.witness.coloring.items())))
    return 0 if verdict.answer else 1


def cmd_verify(args):
    inst = parse_instance(_read(args.instance))
    verdict = verdict_from_json(_read(args.solution))
    if verdict.witness is None:
        problems = ["document carries no witness"]
    else:
        problems = verify_solution(inst, verdict.witness)
    if problems:
        for line in problems:
            print(line)
        return 2
    print("ok")
    return 0


def cmd_gen_random(args):
    inst = gen_random(args.n, args.prob, args.parts, args.k, args.seed)
    sys.stdout.write(serialize_instance(inst))
    return 0


def cmd_gen_compose(args):
    graphs = []
    for path in args.graphs:
        g = parse_graph(_read(path))
        if g.n != args.ground_n:
            raise SelcolError(f"{path}: graph has {g.n} vertices, ground set has {args.ground_n}")
        graphs.append(g.edges)
    inst = compose(ComposeInput(args.ground_n, tuple(graphs), args.k), enforce_regular=args.regular)
    sys.stdout.write(serialize_instance(inst))
    return 0


def cmd_td(args):
    inst = parse_instance(_read(args.instance))
    g = complement(inst.graph) if args.complement else inst.graph
    if args.action == "emit":
        sys.stdout.write(serialize_td(heuristic_decompose(g), g.n))
        return 0
    if not args.td:
        raise SelcolError("td validate needs a decomposition file")
    td, n = parse_td(_read(args.td))
    problems = validate_td(g, td)
    if n != g.n:
        problems.insert(0, f"decomposition declares n = {n}, graph has {g.n}")
    if problems:
        for line in problems:
            print(line)
        return 2
    print(f"ok width {width(td)}")
    return 0


def cmd_stats(args):
    inst = parse_instance(_read(args.instance))
    params, _, _, _ = gather_params(inst, d_max=args.dmax)
    sys.stdout.write(json.dumps(params, sort_keys=True, indent=2) + "\n")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="selcol", description="Exact Selective Coloring toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide an instance")
    s.add_argument("instance", nargs="?", default="-")
    s.add_argument("--algo", default="auto", choices=ALGORITHMS)
    s.add_argument("--td", help="PACE .td decomposition (of the complement for --algo cotw)")
    s.add_argument("--cotd", help="PACE .td decomposition of the complement graph")
    s.add_argument("--dmax", type=int, default=_env("SELCOL_DMAX", int, cluster.DEFAULT_DMAX))
    s.add_argument("--max-parts", type=int, default=_env("SELCOL_MAX_PARTS", int, twdp.DEFAULT_MAX_PARTS))
    s.add_argument("--max-nodes", type=int, default=_env("SELCOL_MAX_NODES", int, oracle.OracleLimits.max_nodes))
    s.add_argument("--time-budget", type=float,
                   default=_env("SELCOL_TIME_BUDGET", float, oracle.OracleLimits.time_budget))
    s.add_argument("--ceiling", type=float, default=_env("SELCOL_CEILING", float, DEFAULT_CEILING))
    s.add_argument("--force", action="store_true", help="let auto exceed the cost ceiling")
    s.add_argument("--threads", type=int, default=_env("SELCOL_THREADS", int, 1))
    s.add_argument("--labeled", action="store_true", help="cluster: enumerate labeled precolorings")
    s.add_argument("--dump-flow", metavar="DIR", help="cluster: write every flow network to DIR")
    s.add_argument("--output", choices=("structured", "human"), default="structured")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solution document against an instance")
    v.add_argument("instance")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate instances")
    gsub = g.add_subparsers(dest="generator", required=True)
    r = gsub.add_parser("random")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--prob", type=float, required=True)
    r.add_argument("--parts", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--seed", type=int, required=True)
    r.set_defaults(func=cmd_gen_random)
    c = gsub.add_parser("compose")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--ground-n", type=int, required=True)
    c.add_argument("--regular", type=int, default=None, help="reject graphs that are not d-regular")
    c.add_argument("graphs", nargs="+")
    c.set_defaults(func=cmd_gen_compose)

    t = sub.add_parser("td", help="emit or validate tree decompositions")
    t.add_argument("action", choices=("emit", "validate"))
    t.add_argument("instance")
    t.add_argument("td", nargs="?")
    t.add_argument("--complement", action="store_true", help="work on the complement graph")
    t.set_defaults(func=cmd_td)

    st = sub.add_parser("stats", help="report structural parameters")
    st.add_argument("instance", nargs="?", default="-")
    st.add_argument("--dmax", type=int, default=_env("SELCOL_DMAX", int, cluster.DEFAULT_DMAX))
    st.set_defaults(func=cmd_stats)
    return ap


def run(argv=None) -> int:
    try:
        parser = build_parser()
    except ValueError as exc:
        print(f"error: bad environment override: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
    except (SelcolError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
