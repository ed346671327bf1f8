import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selcol import (
    CapacityError, Graph, Instance, brute_force, complement, early_reject, solve_cotw,
    verify_solution,
)
from selcol.cotw import (
    complement_decomposition, compute_tables, scp_forget, scp_introduce, scp_join, scp_leaf,
    zero_entry,
)
from selcol.generators import complete
from selcol.treedecomp import heuristic_decompose, make_nice

from brute_tables import scp_table
from strategies import instances, p3_instance


def test_early_reject_examples():
    assert early_reject(5, 1, 0)
    assert not early_reject(6, 2, 2)       # p = k(w+1) exactly
    assert early_reject(7, 2, 2)


def test_zero_entries():
    inst = Instance(Graph(3), [[1, 2], [3]], 2)
    assert zero_entry(inst, 0, {1, 2}, 1)         # two vertices of one part
    assert zero_entry(inst, 0b01, {1}, 1)         # Q vertex whose part is hit
    assert zero_entry(inst, 0, set(), -1)
    assert zero_entry(inst, 0, set(), 3)
    assert not zero_entry(inst, 0b10, {1}, 1)


def test_introduce_and_forget_examples():
    # complement side: a single edge 1-2, both in their own part
    cinst = Instance(Graph(2, [(1, 2)]), [[1], [2]], 2)
    t = scp_introduce(cinst, 1, {1}, scp_leaf())
    assert (0, frozenset(), 0) in t                       # v left uncovered
    assert t[(0, frozenset({1}), 1)] == ((0, frozenset(), 0), frozenset({1}))
    t2 = scp_introduce(cinst, 2, {1, 2}, t)
    assert (0, frozenset({1, 2}), 1) in t2                # one clique {1, 2}
    assert (0, frozenset({1, 2}), 2) in t2                # two singletons
    f = scp_forget(cinst, 2, t2)
    assert (0b10, frozenset({1}), 1) in f
    # with no colors left nothing can be covered
    none_left = Instance(Graph(1), [[1]], 1)
    t = scp_introduce(none_left, 1, {1}, {(0, frozenset(), 1): None})
    assert set(t) == {(0, frozenset(), 1)}


def test_single_vertex_chain():
    inst = Instance(Graph(1), [[1]], 1)
    v = solve_cotw(inst)
    assert v.answer and v.stats["cliques_used"] == 1


def test_forget_keeps_part_hit_below_without_v():
    # vertices 1, 2 share part 1; after forgetting 2 uncovered, the hit by 1 survives
    cinst = Instance(Graph(2), [[1, 2]], 1)
    child = {(0b1, frozenset(), 1): None, (0, frozenset(), 0): None}
    assert (0b1, frozenset(), 1) in scp_forget(cinst, 2, child)


def test_join_examples():
    cinst = Instance(Graph(2), [[1], [2]], 2)
    left = {(0b01, frozenset(), 1): None, (0, frozenset(), 0): None}
    right = {(0b10, frozenset(), 1): None, (0, frozenset(), 0): None}
    out = scp_join(cinst, left, right)
    assert out[(0b11, frozenset(), 2)] == ((0b01, frozenset(), 1), (0b10, frozenset(), 1))
    assert (0, frozenset(), 0) in out
    assert not scp_join(cinst, {(0b01, frozenset(), 1): None}, {(0b01, frozenset(), 1): None})


def test_solve_examples(fig1):
    v = solve_cotw(Instance(Graph(3), [[1], [2], [3]], 1))
    assert v.answer and v.stats["complement_cliques"] == [[1, 2, 3]]
    k5 = solve_cotw(Instance(complete(5), [[i] for i in range(1, 6)], 1))
    assert not k5.answer and k5.stats["early_reject"]
    v = solve_cotw(fig1)
    assert v.answer and verify_solution(fig1, v.witness) == []
    assert not solve_cotw(p3_instance(1)).answer


@given(instances(max_n=10))
@settings(max_examples=200, deadline=None)
def test_matches_oracle(inst):
    v = solve_cotw(inst)
    assert v.answer == brute_force(inst).answer
    if v.answer:
        assert verify_solution(inst, v.witness) == []


@given(instances(max_n=9))
@settings(max_examples=80, deadline=None)
def test_witness_cliques_fit_in_bags(inst):
    ntd = complement_decomposition(inst)
    v = solve_cotw(inst, ntd)
    if not v.answer:
        return
    cg = complement(inst.graph)
    for c in v.stats["complement_cliques"]:
        assert any(set(c) <= b for b in ntd.bag)
        assert all(cg.has_edge(a, b) for i, a in enumerate(c) for b in c[i + 1:])
    # the clique cover and the returned coloring describe the same classes
    classes = {}
    for u, col in v.witness.coloring.items():
        classes.setdefault(col, []).append(u)
    assert sorted(sorted(c) for c in classes.values()) == sorted(v.stats["complement_cliques"])


@given(instances(max_n=6, max_p=4), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_tables_are_exact(inst, seed):
    cinst = Instance(complement(inst.graph), inst.parts, inst.k)
    ntd = make_nice(heuristic_decompose(cinst.graph))
    tables = compute_tables(cinst, ntd)
    rng = random.Random(seed)
    for x in rng.sample(range(len(ntd)), min(4, len(ntd))):
        assert set(tables[x]) == scp_table(cinst, ntd, x)
        assert not any(zero_entry(cinst, *key) for key in tables[x])


@given(instances(max_n=9))
@settings(max_examples=30, deadline=None)
def test_threads_agree(inst):
    a, b = solve_cotw(inst, threads=1), solve_cotw(inst, threads=4)
    assert a.answer == b.answer and a.witness == b.witness


def test_capacity_limit():
    inst = Instance(Graph(6), [[i] for i in range(1, 7)], 3)
    with pytest.raises(CapacityError):
        solve_cotw(inst, max_parts=4)


def test_width_based_bound_would_reject_a_yes_instance():
    # K2 with singleton parts and two colors: complement edgeless, width 0
    inst = Instance(complete(2), [[1], [2]], 2)
    assert inst.p > inst.k * 0          # the bound without the +1 would fire
    assert not early_reject(inst.p, inst.k, 0)
    v = solve_cotw(inst)
    assert v.answer and brute_force(inst).answer
