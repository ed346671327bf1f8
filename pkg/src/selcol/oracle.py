"""Exhaustive reference solver used as ground truth by the tests.

The search picks one vertex per part (smallest parts first) and abandons a
prefix as soon as the vertices picked so far cannot be k-colored.  Running
out of budget raises :class:`BudgetExhausted`; it is never reported as NO.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import BudgetExhausted, PreconditionError
from .instance import Graph, Instance, Solution, Verdict


@dataclass(frozen=True)
class OracleLimits:
    max_nodes: int = 20_000_000
    time_budget: float = 120.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.time_budget <= 0:
            raise ValueError("oracle limits must be positive")


def _color(adj, verts, k, fixed=None):
    """Backtracking DSATUR coloring of ``verts`` with at most ``k`` colors.

    ``fixed`` pins some vertices to given colors.  Colors not yet in use are
    interchangeable, so only the smallest unused one is ever tried.  Returns
    a vertex -> color dict or None.
    """
    color = dict(fixed or {})
    vset = set(verts) | set(color)
    for v, c in color.items():
        if not 1 <= c <= k:
            return None
        if any(color.get(u) == c for u in adj[v]):
            return None
    uncolored = [v for v in sorted(vset) if v not in color]
    use = {}
    for c in color.values():
        use[c] = use.get(c, 0) + 1
    deg = {v: sum(1 for u in adj[v] if u in vset) for v in uncolored}

    def rec():
        if not uncolored:
            return True
        best, best_key, best_forb = None, None, None
        for v in uncolored:
            forb = {color[u] for u in adj[v] if u in color}
            key = (len(forb), deg[v], -v)
            if best_key is None or key > best_key:
                best, best_key, best_forb = v, key, forb
        if len(best_forb) >= k:
            return False
        uncolored.remove(best)
        tried_new = False
        for c in range(1, k + 1):
            if c in best_forb:
                continue
            if c not in use:
                if tried_new:
                    continue
                tried_new = True
            color[best] = c
            use[c] = use.get(c, 0) + 1
            if rec():
                return True
            use[c] -= 1
            if not use[c]:
                del use[c]
            del color[best]
        uncolored.append(best)
        return False

    return color if rec() else None


def is_k_colorable(g: Graph, k: int, vertices: Iterable[int] | None = None):
    """Exact k-colorability of ``g`` (or of ``g`` induced on ``vertices``).

    Returns a proper coloring ``{v: c}`` with colors in ``1..k``, or None.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    verts = list(g.vertices) if vertices is None else list(vertices)
    return _color(g.adj, verts, k)


def _search(inst: Instance, limits: OracleLimits, forced=None, exclude=(), prune=True):
    adj = inst.graph.adj
    k = inst.k
    forced = dict(forced or {})
    exclude = set(exclude)
    fixed_parts = {inst.part_of[v] for v in forced}
    order = sorted(
        (j for j in range(1, inst.p + 1) if j not in fixed_parts),
        key=lambda j: (len(inst.parts[j - 1]), j),
    )
    choices = [sorted(v for v in inst.parts[j - 1] if v not in exclude) for j in order]

    start = time.monotonic()
    nodes = 0
    chosen = list(forced)
    base = _color(adj, chosen, k, forced)
    if base is None:
        return None, nodes

    def rec(depth, coloring):
        nonlocal nodes
        if depth == len(order):
            if prune:
                return coloring
            return _color(adj, chosen, k, forced)
        for v in choices[depth]:
            nodes += 1
            if nodes > limits.max_nodes:
                raise BudgetExhausted(f"node budget {limits.max_nodes} exhausted")
            if nodes & 1023 == 0 and time.monotonic() - start > limits.time_budget:
                raise BudgetExhausted(f"time budget {limits.time_budget}s exhausted")
            chosen.append(v)
            nxt = coloring
            if prune:
                taken = {coloring[u] for u in adj[v] if u in coloring}
                free = next((c for c in range(1, k + 1) if c not in taken), None)
                if free is not None:
                    nxt = dict(coloring)
                    nxt[v] = free
                else:
                    nxt = _color(adj, chosen, k, forced)
            if nxt is not None:
                found = rec(depth + 1, nxt)
                if found is not None:
                    return found
            chosen.pop()
        return None

    return rec(0, base), nodes


def _verdict(inst, found, nodes, name, elapsed):
    stats = {"solver": name, "p": inst.p, "k": inst.k, "nodes": nodes, "elapsed": elapsed}
    if found is None:
        return Verdict(False, None, stats)
    return Verdict(True, Solution(frozenset(found), found), stats)


def brute_force(inst: Instance, limits: OracleLimits = OracleLimits(), prune: bool = True) -> Verdict:
    t0 = time.perf_counter()
    found, nodes = _search(inst, limits, prune=prune)
    return _verdict(inst, found, nodes, "brute", time.perf_counter() - t0)


def restricted_brute_force(
    inst: Instance,
    forced: Mapping[int, int],
    limits: OracleLimits = OracleLimits(),
    exclude: Iterable[int] = (),
) -> Verdict:
    """Decide whether a solution exists that contains ``forced`` with exactly those colors.

    Vertices in ``exclude`` may not be selected.
    """
    seen = {}
    for v, c in forced.items():
        j = inst.part_of[v]
        if j in seen:
            raise PreconditionError(f"forced vertices {seen[j]} and {v} share part {j}")
        seen[j] = v
        if not 1 <= c <= inst.k:
            raise PreconditionError(f"forced color {c} of vertex {v} outside 1..{inst.k}")
        for u in inst.graph.adj[v]:
            if forced.get(u) == c:
                raise PreconditionError(f"forced coloring is improper on edge v{min(u, v)}v{max(u, v)}")
    clash = set(forced) & set(exclude)
    if clash:
        raise PreconditionError(f"vertex {min(clash)} is both forced and excluded")
    t0 = time.perf_counter()
    found, nodes = _search(inst, limits, forced=forced, exclude=exclude)
    return _verdict(inst, found, nodes, "brute-restricted", time.perf_counter() - t0)
