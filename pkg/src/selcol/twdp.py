"""Selective Coloring by dynamic programming over a nice tree decomposition.

Tables are indexed by ``(S, phi)`` where ``S`` is a bit mask of parts already
hit strictly below the bag and ``phi`` is an unlabeled coloring of the
selected bag vertices: a canonical tuple of blocks (see
:mod:`selcol.partitions`).  Bag vertices missing from ``phi`` are unselected.

Only 1-entries are stored.  Each table maps a key to its back-pointer:
the child key (introduce/forget) or the pair of child keys (join).
"""
from __future__ import annotations

import time

from .errors import CapacityError, InvalidDecomposition
from .instance import Instance, Solution, Verdict, verify_solution
from .partitions import bell, canonical
from .treedecomp import (
    FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, check_nice, evaluate_bottom_up,
    heuristic_decompose, make_nice, validate_td,
)

DEFAULT_MAX_PARTS = 24


def zero_check(inst: Instance, bag, S: int, phi) -> bool:
    """True when the entry ``(S, phi)`` is forced to 0.

    That happens if a colored vertex lies in a part of ``S``, if two colored
    vertices share a part, or if a block contains an edge.
    """
    adj = inst.graph.adj
    seen = set()
    for block in phi:
        for i, u in enumerate(block):
            j = inst.part_of[u]
            if S >> (j - 1) & 1 or j in seen:
                return True
            seen.add(j)
            if not adj[u].isdisjoint(block[i + 1:]):
                return True
    return False


def lookup(table: dict, bag, S: int, phi) -> int:
    """Value (0 or 1) of a table entry; rejects colorings that do not fit the bag."""
    flat = [v for b in phi for v in b]
    if len(flat) != len(set(flat)) or not set(flat) <= set(bag) or any(not b for b in phi):
        raise ValueError(f"malformed key: {phi!r} is not a partial partition of bag {sorted(bag)}")
    return 1 if (S, canonical(phi)) in table else 0


def table_leaf() -> dict:
    return {(0, ()): None}


def table_introduce(inst: Instance, v: int, child: dict) -> dict:
    """Table of a node introducing ``v``.

    Every child entry survives with ``v`` unselected; it is also extended by
    placing ``v`` in an existing block or a new one, unless that placement
    fails :func:`zero_check`.
    """
    k = inst.k
    pv = inst.part_of[v]
    bit = 1 << (pv - 1)
    nbrs = inst.graph.adj[v]
    part_of = inst.part_of
    out = {}
    for key in child:
        S, phi = key
        out.setdefault(key, key)
        if S & bit or any(part_of[u] == pv for b in phi for u in b):
            continue
        for i, b in enumerate(phi):
            if nbrs.isdisjoint(b):
                blocks = list(phi)
                blocks[i] = b + (v,)
                out.setdefault((S, canonical(blocks)), key)
        if len(phi) < k:
            out.setdefault((S, canonical(phi + ((v,),))), key)
    return out


def table_forget(inst: Instance, v: int, child: dict, allow_select: bool = True) -> dict:
    """Table of a node forgetting ``v``.

    A child entry with ``v`` unselected keeps its key.  One with ``v``
    colored records ``v``'s part as hit in ``S``; ``allow_select=False``
    drops this second branch (used to test monotonicity).
    """
    bit = 1 << (inst.part_of[v] - 1)
    out = {}
    for key in child:
        S, phi = key
        idx = next((i for i, b in enumerate(phi) if v in b), None)
        if idx is None:
            out.setdefault(key, key)
        elif allow_select:
            blocks = list(phi)
            blocks[idx] = tuple(u for u in phi[idx] if u != v)
            out.setdefault((S | bit, canonical(blocks)), key)
    return out


def table_join(inst: Instance, left: dict, right: dict) -> dict:
    """Combine two children: ``S`` splits into disjoint halves under a shared coloring."""
    by_phi = {}
    for S, phi in right:
        by_phi.setdefault(phi, []).append(S)
    out = {}
    for lkey in left:
        S1, phi = lkey
        for S2 in by_phi.get(phi, ()):
            if not S1 & S2:
                out.setdefault((S1 | S2, phi), (lkey, (S2, phi)))
    return out


def compute_tables(inst: Instance, ntd: NiceTreeDecomposition, threads: int = 1, allow_select: bool = True):
    def compute(x, kids):
        kind = ntd.kind[x]
        if kind == LEAF:
            return table_leaf()
        if kind == INTRODUCE:
            return table_introduce(inst, ntd.vertex[x], kids[0])
        if kind == FORGET:
            return table_forget(inst, ntd.vertex[x], kids[0], allow_select)
        return table_join(inst, kids[0], kids[1])

    return evaluate_bottom_up(ntd, compute, threads)


def reconstruct(inst: Instance, ntd: NiceTreeDecomposition, tables, root_key) -> Solution:
    """Walk back-pointers from the root and label blocks with concrete colors."""
    color = {}
    stack = [(ntd.root, root_key)]
    while stack:
        x, key = stack.pop()
        bp = tables[x][key]
        kind = ntd.kind[x]
        if kind == JOIN:
            stack.append((ntd.children[x][0], bp[0]))
            stack.append((ntd.children[x][1], bp[1]))
        elif kind == INTRODUCE:
            stack.append((ntd.children[x][0], bp))
        elif kind == FORGET:
            v = ntd.vertex[x]
            _, phi = bp
            for block in phi:
                if v in block:
                    mates = [u for u in block if u != v]
                    if mates:
                        color[v] = color[mates[0]]
                    else:
                        used = {color[b[0]] for b in phi if b is not block}
                        color[v] = min(c for c in range(1, inst.k + 1) if c not in used)
            stack.append((ntd.children[x][0], bp))
    return Solution(frozenset(color), color)


def _forget_order(ntd):
    order = []
    stack = [ntd.root]
    while stack:
        x = stack.pop()
        if ntd.kind[x] == FORGET:
            order.append(ntd.vertex[x])
        stack.extend(reversed(ntd.children[x]))
    return order


def greedy_witness(inst: Instance, ntd: NiceTreeDecomposition) -> Solution:
    """Pick the smallest vertex of every part and color greedily top-down.

    Each vertex sees at most ``width`` already colored neighbours when it is
    colored, so ``width + 1`` colors always suffice.
    """
    selected = {min(part) for part in inst.parts}
    color = {}
    adj = inst.graph.adj
    for v in _forget_order(ntd):
        if v in selected:
            taken = {color[u] for u in adj[v] if u in color}
            color[v] = next(c for c in range(1, len(taken) + 2) if c not in taken)
    return Solution(frozenset(selected), color)


def prepare_decomposition(inst: Instance, ntd: NiceTreeDecomposition | None) -> NiceTreeDecomposition:
    if ntd is None:
        return make_nice(heuristic_decompose(inst.graph))
    problems = check_nice(ntd) + validate_td(inst.graph, ntd.as_plain())
    if problems:
        raise InvalidDecomposition("; ".join(problems))
    return ntd


def solve_tw(
    inst: Instance,
    ntd: NiceTreeDecomposition | None = None,
    threads: int = 1,
    max_parts: int = DEFAULT_MAX_PARTS,
) -> Verdict:
    t0 = time.perf_counter()
    ntd = prepare_decomposition(inst, ntd)
    w = ntd.width
    stats = {"solver": "tw", "width": w, "p": inst.p, "k": inst.k, "td_nodes": len(ntd)}
    if inst.k >= w + 2:
        sol = greedy_witness(inst, ntd)
        assert not verify_solution(inst, sol), verify_solution(inst, sol)
        stats.update(shortcut=True, elapsed=time.perf_counter() - t0)
        return Verdict(True, sol, stats)
    if inst.p > max_parts:
        raise CapacityError(
            f"p = {inst.p} exceeds the treewidth solver limit of {max_parts} parts; "
            "raise the limit or use another algorithm"
        )
    tables = compute_tables(inst, ntd, threads)
    root_key = ((1 << inst.p) - 1, ())
    stats.update(
        shortcut=False,
        table_entries=sum(len(t) for t in tables),
        max_table=max(len(t) for t in tables),
        # keys are (S, partial partition of a bag of <= w+1 vertices): B(w+2) of the latter
        entry_bound=(1 << inst.p) * bell(w + 2),
    )
    found = root_key in tables[ntd.root]
    witness = reconstruct(inst, ntd, tables, root_key) if found else None
    stats["elapsed"] = time.perf_counter() - t0
    return Verdict(found, witness, stats)
