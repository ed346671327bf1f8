"""Selective Coloring parameterized by distance to cluster.

A cluster modulator ``U`` is found by branching on induced P3s.  For every
subset ``X`` of ``U`` and every proper coloring of ``X``, a flow network
decides whether the precoloring extends into the cliques of ``G - U``.
"""
from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import CapacityError, PreconditionError
from .flow import FlowNetwork, max_flow
from .instance import Graph, Instance, Solution, Verdict
from .partitions import set_partitions

DEFAULT_DMAX = 16


@dataclass(frozen=True)
class ClusterStructure:
    modulator: frozenset
    clusters: tuple        # tuple of sorted vertex tuples, ordered by minimum


def _find_p3(adj, alive):
    """Some induced path u - v - w in the graph restricted to ``alive``."""
    for v in sorted(alive):
        nb = sorted(u for u in adj[v] if u in alive)
        for i, u in enumerate(nb):
            au = adj[u]
            for w in nb[i + 1:]:
                if w not in au:
                    return u, v, w
    return None


def _p3_packing(adj, alive):
    """Size of a greedy vertex-disjoint induced-P3 packing (a lower bound)."""
    alive = set(alive)
    count = 0
    while True:
        p3 = _find_p3(adj, alive)
        if p3 is None:
            return count
        count += 1
        alive.difference_update(p3)


def clusters_of(g: Graph, modulator) -> tuple:
    alive = set(g.vertices) - set(modulator)
    comps = []
    while alive:
        start = min(alive)
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y in alive and y not in comp:
                    comp.add(y)
                    stack.append(y)
        alive -= comp
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


def is_cluster_structure(g: Graph, cs: ClusterStructure) -> bool:
    if clusters_of(g, cs.modulator) != cs.clusters:
        return False
    return all(g.has_edge(u, v) for c in cs.clusters for u, v in itertools.combinations(c, 2))


def find_cluster_modulator(g: Graph, d_max: int = DEFAULT_DMAX) -> ClusterStructure:
    """Minimum cluster modulator of size at most ``d_max``.

    Iterative deepening over the budget; each level branches three ways on an
    induced P3.  Raises :class:`CapacityError` (with ``lower_bound``) when the
    minimum exceeds ``d_max``.
    """
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    adj = g.adj
    everyone = frozenset(g.vertices)

    def branch(deleted, budget, memo):
        alive = everyone - deleted
        p3 = _find_p3(adj, alive)
        if p3 is None:
            return deleted
        if budget == 0 or deleted in memo:
            return None
        memo.add(deleted)
        if _p3_packing(adj, alive) > budget:
            return None
        u, v, w = p3
        # the middle vertex first: it is the one most likely to sit on other P3s
        for x in (v, u, w):
            found = branch(deleted | {x}, budget - 1, memo)
            if found is not None:
                return found
        return None

    for d in range(d_max + 1):
        found = branch(frozenset(), d, set())
        if found is not None:
            return ClusterStructure(found, clusters_of(g, found))
    err = CapacityError(f"distance to cluster exceeds d_max = {d_max}")
    err.lower_bound = d_max + 1
    raise err


def _check_precoloring(inst, cs, X, phi):
    X = set(X)
    if not X <= cs.modulator:
        raise PreconditionError("X must be a subset of the modulator")
    if set(phi) != X:
        raise PreconditionError("the precoloring must color exactly the vertices of X")
    parts = {}
    for v in sorted(X):
        j = inst.part_of[v]
        if j in parts:
            raise PreconditionError(f"X hits part {j} twice (vertices {parts[j]} and {v})")
        parts[j] = v
        if not 1 <= phi[v] <= inst.k:
            raise PreconditionError(f"color {phi[v]} of vertex {v} outside 1..{inst.k}")
        for u in inst.graph.adj[v]:
            if u in X and phi[u] == phi[v]:
                raise PreconditionError(f"precoloring is improper on edge v{min(u, v)}v{max(u, v)}")


def build_flow_network(inst: Instance, cs: ClusterStructure, X, phi) -> FlowNetwork:
    """The auxiliary network for modulator vertices ``X`` precolored by ``phi``.

    Node labels: ``"s"``, ``("a", i)``, ``("w", i, j)``, ``("v", v)``,
    ``("rho", j)``, ``"t"``.  Arc families are tagged S, F, R, L and T.
    """
    _check_precoloring(inst, cs, X, phi)
    k, p = inst.k, inst.p
    adj = inst.graph.adj
    net = FlowNetwork()
    net.add_node("s")
    net.add_node("t")
    net.source, net.sink = net.index["s"], net.index["t"]
    by_color = {i: {x for x in X if phi[x] == i} for i in range(1, k + 1)}
    hit = {inst.part_of[x] for x in X}

    for i in range(1, k + 1):
        net.add_node(("a", i))
    for i in range(1, k + 1):
        for j in range(1, len(cs.clusters) + 1):
            net.add_node(("w", i, j))
    for c in cs.clusters:
        for v in c:
            net.add_node(("v", v))
    for j in range(1, p + 1):
        net.add_node(("rho", j))

    for i in range(1, k + 1):
        net.add_arc("s", ("a", i), p, "S")
    for i in range(1, k + 1):
        for j in range(1, len(cs.clusters) + 1):
            net.add_arc(("a", i), ("w", i, j), 1, "F")
    for i in range(1, k + 1):
        for j, c in enumerate(cs.clusters, 1):
            for v in c:
                if adj[v].isdisjoint(by_color[i]):
                    net.add_arc(("w", i, j), ("v", v), 1, "R")
    for c in cs.clusters:
        for v in c:
            net.add_arc(("v", v), ("rho", inst.part_of[v]), 1, "L")
    for j in range(1, p + 1):
        if j not in hit:
            net.add_arc(("rho", j), "t", 1, "T")
    return net


def _extend(inst, cs, X, phi):
    net = build_flow_network(inst, cs, X, phi)
    res = max_flow(net)
    need = inst.p - len({inst.part_of[x] for x in X})
    if res.value != need:
        return None, net, res
    color = dict(phi)
    for arc, f in zip(net.arcs, res.flow):
        # each unit reaching t crosses exactly one R arc (w_ij, v): v joins with color i
        if f and arc.family == "R":
            _, i, _ = net.labels[arc.tail]
            color[net.labels[arc.head][1]] = i
    return Solution(frozenset(color), color), net, res


def extend_precoloring(inst: Instance, cs: ClusterStructure, X, phi) -> Solution | None:
    """Extend the precolored ``X`` into the clusters, or return None if impossible."""
    return _extend(inst, cs, X, phi)[0]


def precolorings(inst: Instance, X, labeled: bool = False):
    """Proper colorings of ``X``.

    By default one representative per color permutation class: blocks of a
    canonical partition get colors 1, 2, ... in order.  ``labeled=True``
    enumerates every map into ``1..k``.
    """
    X = sorted(X)
    adj = inst.graph.adj
    if labeled:
        for colors in itertools.product(range(1, inst.k + 1), repeat=len(X)):
            phi = dict(zip(X, colors))
            if all(phi.get(u) != c for v, c in phi.items() for u in adj[v]):
                yield phi
        return
    for blocks in set_partitions(X, inst.k):
        if all(adj[u].isdisjoint(b) for b in blocks for u in b):
            yield {v: i for i, b in enumerate(blocks, 1) for v in b}


def candidate_subsets(inst: Instance, modulator):
    """Subsets of the modulator hitting each part at most once, smallest first."""
    U = sorted(modulator)
    for size in range(len(U) + 1):
        for X in itertools.combinations(U, size):
            if len({inst.part_of[x] for x in X}) == size:
                yield X


def _format_label(label):
    if isinstance(label, str):
        return label
    return label[0] + "_".join(str(x) for x in label[1:])


def dump_network(net: FlowNetwork, res, path):
    with open(path, "w") as fh:
        for arc, f in zip(net.arcs, res.flow):
            fh.write(f"{_format_label(net.labels[arc.tail])} {_format_label(net.labels[arc.head])} {arc.cap} {f}\n")


def solve_cluster(
    inst: Instance,
    d_max: int = DEFAULT_DMAX,
    labeled: bool = False,
    threads: int = 1,
    dump_flow: str | None = None,
    structure: ClusterStructure | None = None,
) -> Verdict:
    t0 = time.perf_counter()
    cs = structure or find_cluster_modulator(inst.graph, d_max)
    stats = {
        "solver": "cluster", "modulator_size": len(cs.modulator), "clusters": len(cs.clusters),
        "p": inst.p, "k": inst.k,
    }
    jobs = ((X, phi) for X in candidate_subsets(inst, cs.modulator) for phi in precolorings(inst, X, labeled))
    if dump_flow:
        os.makedirs(dump_flow, exist_ok=True)

    tried = 0
    found = None

    def run(job):
        return _extend(inst, cs, *job)

    def consider(result):
        nonlocal tried
        tried += 1
        sol, net, res = result
        if dump_flow:
            dump_network(net, res, os.path.join(dump_flow, f"flow_{tried:05d}.txt"))
        return sol

    if threads <= 1:
        for job in jobs:
            found = consider(run(job))
            if found is not None:
                break
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            while found is None:
                batch = list(itertools.islice(jobs, 4 * threads))
                if not batch:
                    break
                # results are scanned in enumeration order, so the first success is schedule independent
                for result in pool.map(run, batch):
                    found = consider(result)
                    if found is not None:
                        break
    stats.update(precolorings_tried=tried, elapsed=time.perf_counter() - t0)
    return Verdict(found is not None, found, stats)
