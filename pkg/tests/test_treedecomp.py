import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selcol import Graph, InvalidDecomposition, ParseError, TreeDecomposition, width
from selcol.generators import complete, cycle, path
from selcol.treedecomp import (
    FORGET, INTRODUCE, JOIN, LEAF, check_nice, elimination_order, evaluate_bottom_up,
    heuristic_decompose, make_nice, parse_td, serialize_td, validate_td,
)


@st.composite
def graphs(draw, max_n=30):
    n = draw(st.integers(1, max_n))
    prob = draw(st.sampled_from([0.05, 0.15, 0.3, 0.6, 0.9]))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    return Graph(n, [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < prob])


P3 = path(3)
P3_TD = TreeDecomposition({1: {1, 2}, 2: {2, 3}}, [(1, 2)])


def test_validate_examples():
    k4 = complete(4)
    one_bag = TreeDecomposition({1: {1, 2, 3, 4}})
    assert validate_td(k4, one_bag) == [] and width(one_bag) == 3
    assert validate_td(P3, P3_TD) == [] and width(P3_TD) == 1
    broken = TreeDecomposition({1: {1, 2}, 2: {3}}, [(1, 2)])
    assert validate_td(P3, broken) == ["edge v2v3 in no bag"]


def test_validate_reports_each_axiom():
    g = path(3)
    assert "vertex 3 in no bag" in validate_td(g, TreeDecomposition({1: {1, 2}}))
    # vertex 2 appears in bags 1 and 3 but not in the bag 2 between them
    gap = TreeDecomposition({1: {1, 2}, 2: {1}, 3: {2, 3}}, [(1, 2), (2, 3)])
    assert any(msg.startswith("vertex 2:") for msg in validate_td(g, gap))
    cyc = TreeDecomposition({1: {1, 2}, 2: {2, 3}, 3: {2}}, [(1, 2), (2, 3), (1, 3)])
    assert any("not a tree" in msg for msg in validate_td(g, cyc))
    split = TreeDecomposition({1: {1, 2}, 2: {2, 3}})
    assert any("disconnected" in msg for msg in validate_td(g, split))


def test_empty_graph_width_floor():
    td = heuristic_decompose(Graph(0))
    assert width(td) == 0


@pytest.mark.parametrize("g,expected", [
    (Graph(7, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (6, 7)]), 1),
    (complete(5), 4),
    (cycle(6), 2),
    (path(10), 1),
])
def test_heuristic_width_examples(g, expected):
    td = heuristic_decompose(g)
    assert validate_td(g, td) == []
    assert width(td) == expected


def test_min_fill_prefers_zero_fill_then_low_degree():
    # on a star the leaves have zero fill and degree 1, the centre has fill
    star = Graph(5, [(1, v) for v in range(2, 6)])
    order = elimination_order(star)
    assert order[:3] == [2, 3, 4]


@given(graphs(max_n=50))
@settings(max_examples=60, deadline=None)
def test_heuristic_always_valid(g):
    assert validate_td(g, heuristic_decompose(g)) == []


@given(graphs(max_n=12))
@settings(max_examples=40, deadline=None)
def test_width_at_least_clique_number_minus_one(g):
    omega = 1
    for size in range(2, g.n + 1):
        if any(all(g.has_edge(u, v) for u, v in itertools.combinations(c, 2))
               for c in itertools.combinations(g.vertices, size)):
            omega = size
        else:
            break
    assert width(heuristic_decompose(g)) >= omega - 1


def test_make_nice_single_bag():
    ntd = make_nice(TreeDecomposition({1: {1}}))
    assert ntd.kind == (LEAF, INTRODUCE, FORGET)
    assert ntd.root == 2 and ntd.bag[ntd.root] == frozenset()
    assert check_nice(ntd) == []


def test_make_nice_p3_chain():
    ntd = make_nice(P3_TD)
    assert JOIN not in ntd.kind
    assert ntd.width == 1
    assert len(ntd) <= 4 * 2 * 3
    assert validate_td(P3, ntd.as_plain()) == []
    # leaf, introduce 2, introduce 3, forget 3, introduce 1, forget 1, forget 2
    assert ntd.kind == (LEAF, INTRODUCE, INTRODUCE, FORGET, INTRODUCE, FORGET, FORGET)


def test_make_nice_rejects_non_tree():
    with pytest.raises(InvalidDecomposition):
        make_nice(TreeDecomposition({1: {1}, 2: {2}}))


@given(graphs(max_n=30))
@settings(max_examples=60, deadline=None)
def test_make_nice_properties(g):
    td = heuristic_decompose(g)
    ntd = make_nice(td)
    assert check_nice(ntd) == []
    assert ntd.width == width(td)
    assert validate_td(g, ntd.as_plain()) == []
    assert len(ntd) <= 4 * (ntd.width + 1) * max(g.n, 1) + 2
    # every vertex forgotten exactly once
    forgotten = sorted(ntd.vertex[x] for x in range(len(ntd)) if ntd.kind[x] == FORGET)
    assert forgotten == list(g.vertices)


@given(graphs(max_n=15))
@settings(max_examples=30, deadline=None)
def test_each_vertex_introduced_once_below_its_forget_on_every_path(g):
    ntd = make_nice(heuristic_decompose(g))
    par = ntd.parents()
    for leaf in (x for x in range(len(ntd)) if ntd.kind[x] == LEAF):
        intro, forg = {}, {}
        x = leaf
        while x is not None:
            v = ntd.vertex[x]
            if ntd.kind[x] == INTRODUCE:
                intro[v] = intro.get(v, 0) + 1
                assert v not in forg
            elif ntd.kind[x] == FORGET:
                forg[v] = forg.get(v, 0) + 1
            x = par[x]
        assert all(c == 1 for c in intro.values())
        assert all(c == 1 for c in forg.values())
        assert set(intro) <= set(forg)


def test_pace_roundtrip():
    g = cycle(6)
    td = heuristic_decompose(g)
    text = serialize_td(td, g.n)
    assert text.startswith(f"s td {len(td.bags)} 3 6\n")
    back, n = parse_td(text)
    assert n == 6 and validate_td(g, back) == []
    assert serialize_td(back, n) == text


@pytest.mark.parametrize("text,fragment", [
    ("b 1 1 2\n", "must come first"),
    ("s td 1 2 2\nb 1 1 x\n", "bad integer"),
    ("s td 2 2 2\nb 1 1 2\n", "declares 2 bags"),
    ("s td 1 1 2\nb 1 1 2\n", "exceeds"),
    ("s td 1 2 2\nb 1 1 2\nb 1 1\n", "declared twice"),
])
def test_parse_td_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_td(text)


def test_evaluate_bottom_up_threads_agree():
    g = Graph(12, [(i, j) for i in range(1, 13) for j in range(i + 1, 13) if (i * j) % 5 == 1])
    ntd = make_nice(heuristic_decompose(g))

    def count(x, kids):
        return 1 + sum(kids)

    assert evaluate_bottom_up(ntd, count, 1) == evaluate_bottom_up(ntd, count, 4)
    assert evaluate_bottom_up(ntd, count, 1)[ntd.root] == len(ntd)
