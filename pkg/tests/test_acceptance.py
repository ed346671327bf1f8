"""Acceptance criteria 1-8.

Each test appends one ``PASS``/``FAIL`` line to the report printed in the
terminal summary, then asserts, so a failing criterion also fails the run.
"""
import functools
import itertools
import json
import random
import subprocess
import sys
import time

from selcol import (
    ComposeInput, brute_force, build_flow_network, compose, extend_precoloring,
    find_cluster_modulator, gen_random, max_flow, named_graph, restricted_brute_force, solve_cluster,
    solve_cotw, solve_tw, verify_solution,
)
from selcol.cluster import ClusterStructure, candidate_subsets, precolorings
from selcol.cotw import complement_decomposition, early_reject
from selcol.generators import compose_size
from selcol.instance import serialize_instance
from selcol.treedecomp import heuristic_decompose, make_nice

from strategies import FIG1_TEXT, random_cluster_instance

SUITE_SIZE = 540


def _report(lines, num, ok, detail):
    lines.append(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")


@functools.lru_cache(maxsize=None)
def oracle_suite():
    """Seeded random instances with n <= 10, p <= 5, k in {1,2,3}, edge_prob in {0.2,0.5,0.8}."""
    suite = []
    for seed in range(SUITE_SIZE):
        rng = random.Random(seed)
        k = (1, 2, 3)[seed % 3]
        prob = (0.2, 0.5, 0.8)[seed // 3 % 3]
        n = rng.randint(2, 10)
        p = rng.randint(1, min(5, n))
        inst = gen_random(n, prob, p, k, seed)
        suite.append((inst, brute_force(inst).answer))
    return tuple(suite)


def test_criterion_1_oracle_equivalence(acceptance_report):
    t0 = time.perf_counter()
    mismatches, bad_witness, errors = [], [], []
    for idx, (inst, expected) in enumerate(oracle_suite()):
        for solver in (solve_tw, solve_cluster, solve_cotw):
            try:
                v = solver(inst)
            except Exception as exc:        # any exception counts against the criterion
                errors.append((idx, solver.__name__, repr(exc)))
                continue
            if v.answer != expected:
                mismatches.append((idx, solver.__name__))
            elif v.answer and verify_solution(inst, v.witness):
                bad_witness.append((idx, solver.__name__))
    yes = sum(ans for _, ans in oracle_suite())
    elapsed = time.perf_counter() - t0
    ok = not mismatches and not bad_witness and not errors and elapsed < 300
    _report(acceptance_report, 1, ok,
            f"{SUITE_SIZE} instances ({yes} YES), mismatches={len(mismatches)}, "
            f"bad witnesses={len(bad_witness)}, exceptions={len(errors)}, {elapsed:.1f}s")
    assert ok, (mismatches[:5], bad_witness[:5], errors[:5])


def test_criterion_2_flow_extension(acceptance_report):
    t0 = time.perf_counter()
    rng = random.Random(2)
    instances = pairs = feasible = 0
    failures = []
    while instances < 150:
        n = rng.randint(3, 9)
        u = rng.randint(0, min(4, n - 1))
        inst = random_cluster_instance(rng, n, u, rng.randint(1, 3), rng.randint(1, n))
        cs = find_cluster_modulator(inst.graph)
        assert len(cs.modulator) <= 4
        instances += 1
        for X in candidate_subsets(inst, cs.modulator):
            for phi in precolorings(inst, X, labeled=True):
                pairs += 1
                sol = extend_precoloring(inst, cs, X, phi)
                oracle = restricted_brute_force(inst, phi, exclude=cs.modulator - set(X)).answer
                if (sol is not None) != oracle:
                    failures.append((instances, X, phi, "feasibility"))
                if sol is not None:
                    feasible += 1
                    value = max_flow(build_flow_network(inst, cs, X, phi)).value
                    need = inst.p - len({inst.part_of[x] for x in X})
                    if value != need or verify_solution(inst, sol):
                        failures.append((instances, X, phi, "value or witness"))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 180
    _report(acceptance_report, 2, ok,
            f"{instances} instances, {pairs} (X, phi') pairs ({feasible} feasible), "
            f"failures={len(failures)}, {elapsed:.1f}s")
    assert ok, failures[:5]


def test_criterion_3_example_network(acceptance_report, fig1):
    cs = ClusterStructure(frozenset({1, 2, 7}), ((3, 4), (5, 6)))
    net = build_flow_network(fig1, cs, {1, 2}, {1: 1, 2: 2})
    r_arcs = set(net.arcs_of("R"))
    t_arcs = set(net.arcs_of("T"))
    unhit = {j for j in range(1, fig1.p + 1) if fig1.part_of[1] != j and fig1.part_of[2] != j}
    value = max_flow(net).value
    sol = extend_precoloring(fig1, cs, {1, 2}, {1: 1, 2: 2})
    ok = (
        r_arcs == {(("w", 2, 1), ("v", 3)), (("w", 1, 1), ("v", 4)),
                   (("w", 2, 2), ("v", 5)), (("w", 1, 2), ("v", 6))}
        and t_arcs == {(("rho", j), "t") for j in unhit} and len(unhit) == 2
        and value == 2
        and sol is not None and verify_solution(fig1, sol) == []
    )
    _report(acceptance_report, 3, ok,
            f"R arcs exact={len(r_arcs) == 4}, T arcs for parts {sorted(unhit)}, flow value {value}, "
            f"solution {sorted(sol.selected) if sol else None}")
    assert ok


def test_criterion_4_composition_sizes(acceptance_report):
    rng = random.Random(4)
    wrong = []
    cases = 0
    for n, k, t in itertools.product(range(1, 11), range(1, 5), range(1, 5)):
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        graphs = tuple([e for e in pairs if rng.random() < 0.5] for _ in range(t))
        inst = compose(ComposeInput(n, graphs, k))
        cases += 1
        nv, np_ = 4 * n * n + 4 * n * (k - 2) + t, n * n + n * (4 * k - 5) + 1
        if (inst.n, inst.p) != (nv, np_) or compose_size(n, k, t) != (nv, np_):
            wrong.append((n, k, t, inst.n, inst.p))
    ok = not wrong
    _report(acceptance_report, 4, ok, f"{cases} (n, k, t) triples, mismatches={len(wrong)}")
    assert ok, wrong[:5]


def test_criterion_5_composition_semantics(acceptance_report):
    t0 = time.perf_counter()
    k4, c4 = named_graph("K", 4), named_graph("C", 4)
    no = brute_force(compose(ComposeInput(4, (k4.edges,), 1)))
    yes_inst = compose(ComposeInput(4, (k4.edges, c4.edges), 1))
    yes = brute_force(yes_inst)
    elapsed = time.perf_counter() - t0
    ok = (not no.answer and yes.answer and verify_solution(yes_inst, yes.witness) == []
          and elapsed < 120)
    _report(acceptance_report, 5, ok,
            f"compose([K4]) -> {'YES' if no.answer else 'NO'} ({no.stats['nodes']} nodes), "
            f"compose([K4, C4]) -> {'YES' if yes.answer else 'NO'} ({yes.stats['nodes']} nodes), "
            f"{elapsed:.2f}s")
    assert ok


def test_criterion_6_trivial_positive(acceptance_report):
    rng = random.Random(6)
    count = 0
    failures = []
    shortcut = 0
    while count < 100:
        n = rng.randint(2, 10)
        p = rng.randint(1, min(5, n))
        inst = gen_random(n, rng.choice((0.1, 0.2, 0.3)), p, 1, rng.randrange(10**9))
        w = make_nice(heuristic_decompose(inst.graph)).width
        inst = inst.with_k(w + 2 + rng.randint(0, 1))
        count += 1
        verdicts = {
            "brute": brute_force(inst), "tw": solve_tw(inst),
            "cluster": solve_cluster(inst), "cotw": solve_cotw(inst),
        }
        shortcut += verdicts["tw"].stats["shortcut"]
        for name, v in verdicts.items():
            if not v.answer or verify_solution(inst, v.witness):
                failures.append((count, name))
    ok = not failures and shortcut == count
    _report(acceptance_report, 6, ok,
            f"{count} instances with k >= width+2, all solvers YES={not failures}, "
            f"tw shortcut taken {shortcut}/{count}")
    assert ok, failures[:5]


def test_criterion_7_early_reject(acceptance_report):
    violations = []
    fired = []
    yes_count = 0
    for idx, (inst, expected) in enumerate(oracle_suite()):
        if not expected:
            continue
        yes_count += 1
        wbar = complement_decomposition(inst).width
        if inst.p > inst.k * (wbar + 1):
            violations.append(idx)
        v = solve_cotw(inst)
        if early_reject(inst.p, inst.k, wbar) or v.stats["early_reject"]:
            fired.append(idx)
    ok = yes_count > 0 and not violations and not fired
    _report(acceptance_report, 7, ok,
            f"{yes_count} oracle-verified YES instances, p > k(w+1) violations={len(violations)}, "
            f"early rejections={len(fired)}")
    assert ok


def _cli(*args, stdin=None):
    proc = subprocess.run([sys.executable, "-m", "selcol", *map(str, args)],
                          input=stdin, capture_output=True, text=True)
    return proc.returncode, proc.stdout


def test_criterion_8_determinism(acceptance_report, tmp_path):
    fig = tmp_path / "fig1.selcol"
    fig.write_text(FIG1_TEXT)
    files = [fig]
    for seed in (1, 2, 3):
        path = tmp_path / f"r{seed}.selcol"
        path.write_text(serialize_instance(gen_random(9, 0.4, 4, 2, seed)))
        files.append(path)
    h = tmp_path / "h.edges"
    h.write_text("p edges 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n")
    commands = [("gen", "random", "--n", 10, "--prob", 0.3, "--parts", 4, "--k", 2, "--seed", s)
                for s in (7, 8)]
    commands.append(("gen", "compose", "--k", 2, "--ground-n", 4, h, h))
    for f in files:
        commands.append(("stats", f))
        commands.append(("td", "emit", f))
        for algo in ("auto", "tw", "cluster", "cotw", "brute"):
            commands.append(("solve", "--algo", algo, "--threads", 1, f))
    unstable = [c for c in commands if _cli(*c) != _cli(*c)]

    disagree = []
    for f in files:
        for algo in ("tw", "cluster", "cotw", "auto"):
            code1, out1 = _cli("solve", "--algo", algo, "--threads", 1, f)
            code4, out4 = _cli("solve", "--algo", algo, "--threads", 4, f)
            a, b = json.loads(out1), json.loads(out4)
            if code1 != code4 or a["answer"] != b["answer"] or a["stats"] != b["stats"]:
                disagree.append((f.name, algo))
    ok = not unstable and not disagree
    _report(acceptance_report, 8, ok,
            f"{len(commands)} single-threaded invocations byte-identical={not unstable}, "
            f"{4 * len(files)} threaded runs agree={not disagree}")
    assert ok, (unstable[:3], disagree[:3])
