"""Selective Coloring through Selective Clique Partition on the complement.

A selection is k-colorable in G exactly when it can be covered by at most k
cliques of the complement.  The dynamic program runs over a nice tree
decomposition of the complement with tables indexed by ``(S, Q, l)``:

* ``S`` bit mask of parts hit by vertices already forgotten,
* ``Q`` bag vertices that are selected and already covered by a clique,
* ``l`` number of cliques used so far.

A clique is paid for at the introduce node of one of its members, where the
whole clique sits in the bag.  As in :mod:`selcol.twdp` only 1-entries are
stored, each with a back-pointer.
"""
from __future__ import annotations

import itertools
import time

from .errors import CapacityError
from .instance import Instance, Solution, Verdict, coloring_from_classes, complement
from .treedecomp import (
    FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition, evaluate_bottom_up,
    heuristic_decompose, make_nice,
)
from .twdp import DEFAULT_MAX_PARTS, prepare_decomposition

DEFAULT_MAX_BAG = 20


def early_reject(p: int, k: int, w: int) -> bool:
    """True when ``p > k * (w + 1)``: no k cliques, each inside a bag, can hit p parts."""
    return p > k * (w + 1)


def _bad_q(part_of, S, Q):
    seen = set()
    for u in Q:
        j = part_of[u]
        if S >> (j - 1) & 1 or j in seen:
            return True
        seen.add(j)
    return False


def zero_entry(inst: Instance, S: int, Q, l: int) -> bool:
    """True when ``(S, Q, l)`` is forced to 0 regardless of the subtree."""
    return l < 0 or l > inst.k or _bad_q(inst.part_of, S, Q)


def scp_leaf() -> dict:
    return {(0, frozenset(), 0): None}


def scp_introduce(cinst: Instance, v: int, bag, child: dict) -> dict:
    """Introduce ``v``: keep it uncovered, or cover it now with a new clique R.

    R contains ``v`` plus child-bag vertices that are still uncovered, and
    must be a clique of the (complement) graph ``cinst.graph``.
    """
    adj = cinst.graph.adj
    part_of = cinst.part_of
    pv = part_of[v]
    cand = sorted(u for u in bag if u != v and u in adj[v])
    out = {}
    for key in child:
        S, Q, l = key
        out.setdefault(key, key)
        if l >= cinst.k or S >> (pv - 1) & 1:
            continue
        free = [u for u in cand if u not in Q]
        for size in range(len(free) + 1):
            for rest in itertools.combinations(free, size):
                if any(b not in adj[a] for a, b in itertools.combinations(rest, 2)):
                    continue
                R = frozenset(rest) | {v}
                newq = Q | R
                if _bad_q(part_of, S, newq):
                    continue
                out.setdefault((S, newq, l + 1), (key, R))
    return out


def scp_forget(cinst: Instance, v: int, child: dict) -> dict:
    """Forget ``v``: if it was covered its part becomes hit."""
    bit = 1 << (cinst.part_of[v] - 1)
    out = {}
    for key in child:
        S, Q, l = key
        if v in Q:
            out.setdefault((S | bit, Q - {v}, l), key)
        else:
            out.setdefault(key, key)
    return out


def scp_join(cinst: Instance, left: dict, right: dict) -> dict:
    """Merge children with disjoint hit parts and disjoint covered bag vertices."""
    k = cinst.k
    part_of = cinst.part_of
    out = {}
    for lkey in left:
        S1, Q1, l1 = lkey
        for rkey in right:
            S2, Q2, l2 = rkey
            if S1 & S2 or Q1 & Q2 or l1 + l2 > k:
                continue
            S, Q = S1 | S2, Q1 | Q2
            if _bad_q(part_of, S, Q):
                continue
            out.setdefault((S, Q, l1 + l2), (lkey, rkey))
    return out


def compute_tables(cinst: Instance, ntd: NiceTreeDecomposition, threads: int = 1):
    def compute(x, kids):
        kind = ntd.kind[x]
        if kind == LEAF:
            return scp_leaf()
        if kind == INTRODUCE:
            return scp_introduce(cinst, ntd.vertex[x], ntd.bag[x], kids[0])
        if kind == FORGET:
            return scp_forget(cinst, ntd.vertex[x], kids[0])
        return scp_join(cinst, kids[0], kids[1])

    return evaluate_bottom_up(ntd, compute, threads)


def reconstruct(ntd: NiceTreeDecomposition, tables, root_key) -> list:
    """The cliques chosen along the back-pointers from ``root_key``."""
    cliques = []
    stack = [(ntd.root, root_key)]
    while stack:
        x, key = stack.pop()
        bp = tables[x][key]
        kind = ntd.kind[x]
        if kind == JOIN:
            stack.append((ntd.children[x][0], bp[0]))
            stack.append((ntd.children[x][1], bp[1]))
        elif kind == INTRODUCE:
            if isinstance(bp[0], tuple):
                child_key, R = bp
                cliques.append(tuple(sorted(R)))
            else:
                child_key = bp
            stack.append((ntd.children[x][0], child_key))
        elif kind == FORGET:
            stack.append((ntd.children[x][0], bp))
    return sorted(cliques)


def solve_cotw(
    inst: Instance,
    ntd: NiceTreeDecomposition | None = None,
    threads: int = 1,
    max_parts: int = DEFAULT_MAX_PARTS,
    max_bag: int = DEFAULT_MAX_BAG,
) -> Verdict:
    """Decide via the complement; ``ntd`` (if given) decomposes the complement graph."""
    t0 = time.perf_counter()
    cinst = Instance(complement(inst.graph), inst.parts, inst.k)
    ntd = prepare_decomposition(cinst, ntd)
    w = ntd.width
    stats = {"solver": "cotw", "complement_width": w, "p": inst.p, "k": inst.k, "td_nodes": len(ntd)}
    if early_reject(inst.p, inst.k, w):
        stats.update(early_reject=True, elapsed=time.perf_counter() - t0)
        return Verdict(False, None, stats)
    if inst.p > max_parts or w + 1 > max_bag:
        raise CapacityError(
            f"p = {inst.p} and complement bag size {w + 1} exceed the limits "
            f"({max_parts} parts, bags of {max_bag})"
        )
    tables = compute_tables(cinst, ntd, threads)
    full = (1 << inst.p) - 1
    root = tables[ntd.root]
    root_key = next(((full, frozenset(), l) for l in range(inst.k + 1) if (full, frozenset(), l) in root), None)
    stats.update(early_reject=False, table_entries=sum(len(t) for t in tables), max_table=max(len(t) for t in tables))
    witness = None
    if root_key is not None:
        cliques = reconstruct(ntd, tables, root_key)
        coloring = coloring_from_classes(cliques)
        witness = Solution(frozenset(coloring), coloring)
        stats["cliques_used"] = root_key[2]
        stats["complement_cliques"] = [list(c) for c in cliques]
    stats["elapsed"] = time.perf_counter() - t0
    return Verdict(root_key is not None, witness, stats)


def complement_decomposition(inst: Instance) -> NiceTreeDecomposition:
    return make_nice(heuristic_decompose(complement(inst.graph)))
