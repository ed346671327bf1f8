"""Instance generators: random partitioned graphs, named graphs, and the
composition gadget that packs several 3-coloring instances into one
Selective k-Coloring instance."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .instance import Graph, Instance


def gen_random(n: int, edge_prob: float, p: int, k: int, seed: int) -> Instance:
    """G(n, edge_prob) with vertices dealt round-robin into p parts after a shuffle.

    Uses :class:`random.Random` (Mersenne Twister) seeded with ``seed``, so
    equal arguments give an identical instance.
    """
    if not 1 <= p <= n:
        raise ValueError(f"need 1 <= p <= n, got p={p}, n={n}")
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError("edge_prob must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if rng.random() < edge_prob
    ]
    order = list(range(1, n + 1))
    rng.shuffle(order)
    parts = [order[j::p] for j in range(p)]
    return Instance(Graph(n, edges), parts, k)


def complete(n):
    return Graph(n, itertools.combinations(range(1, n + 1), 2))


def cycle(n):
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path(n):
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def complete_bipartite(a, b):
    return Graph(a + b, [(u, v) for u in range(1, a + 1) for v in range(a + 1, a + b + 1)])


def petersen():
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


_NAMED = {
    "K": complete,
    "C": cycle,
    "P": path,
    "Kab": complete_bipartite,
    "petersen": petersen,
}


def named_graph(name: str, *params) -> Graph:
    """``named_graph("K", 4)``, ``("C", 5)``, ``("P", 3)``, ``("Kab", 4, 4)``, ``("petersen",)``."""
    try:
        build = _NAMED[name]
    except KeyError:
        raise ValueError(f"unknown graph {name!r}; known: {', '.join(sorted(_NAMED))}") from None
    return build(*params)


# ---------------------------------------------------------------- composition


@dataclass(frozen=True)
class ComposeInput:
    ground_n: int
    graphs: tuple          # each a collection of edges over 1..ground_n
    k: int

    def __post_init__(self):
        if self.ground_n < 1 or self.k < 1 or not self.graphs:
            raise ValueError("need ground_n >= 1, k >= 1 and at least one graph")
        norm = []
        for j, edges in enumerate(self.graphs, 1):
            es = set()
            for u, v in edges:
                if not (1 <= u <= self.ground_n and 1 <= v <= self.ground_n) or u == v:
                    raise ValueError(f"graph {j}: edge {u}-{v} outside the ground set 1..{self.ground_n}")
                es.add((min(u, v), max(u, v)))
            norm.append(frozenset(es))
        object.__setattr__(self, "graphs", tuple(norm))


GADGET_CLASSES = ("1", "2", "3", "e")
Q_CLASSES = ("12", "13", "23", "e")


@dataclass(frozen=True)
class ComposeLayout:
    """Where each gadget vertex landed in the composed instance."""

    a: dict        # (v, cls, u) -> vertex id of v_cls(u) in gadget G_v
    q: dict        # (v, qcls) -> tuple of vertex ids of Q_qcls(v)
    y: tuple       # vertex ids of y_1..y_t


def compose_layout(ground_n: int, k: int, t: int) -> ComposeLayout:
    """Vertex numbering: gadgets in ground-set order; inside G_v the sets
    A_1, A_2, A_3, A_e (each over u != v ascending), then Q_12, Q_13, Q_23,
    Q_e; the vertices y_1..y_t come last."""
    a, q = {}, {}
    nxt = 1
    for v in range(1, ground_n + 1):
        others = [u for u in range(1, ground_n + 1) if u != v]
        for cls in GADGET_CLASSES:
            for u in others:
                a[(v, cls, u)] = nxt
                nxt += 1
        for qc in Q_CLASSES:
            q[(v, qc)] = tuple(range(nxt, nxt + k - 1))
            nxt += k - 1
    y = tuple(range(nxt, nxt + t))
    return ComposeLayout(a, q, y)


def compose(inp: ComposeInput, enforce_regular: int | None = None) -> Instance:
    """Build the composed instance; it is YES iff some input graph is 3-colorable.

    ``enforce_regular=d`` rejects input graphs that are not d-regular.
    """
    n, k, graphs = inp.ground_n, inp.k, inp.graphs
    if enforce_regular is not None:
        for j, es in enumerate(graphs, 1):
            deg = [0] * (n + 1)
            for u, v in es:
                deg[u] += 1
                deg[v] += 1
            if any(deg[v] != enforce_regular for v in range(1, n + 1)):
                raise ValueError(f"graph {j} is not {enforce_regular}-regular")
    lay = compose_layout(n, k, len(graphs))
    edges = set()

    def add(u, v):
        edges.add((min(u, v), max(u, v)))

    ground = range(1, n + 1)
    for v in ground:
        others = [u for u in ground if u != v]
        # A_1, A_2, A_3 form a complete tripartite graph
        for c1, c2 in (("1", "2"), ("1", "3"), ("2", "3")):
            for u1 in others:
                for u2 in others:
                    add(lay.a[(v, c1, u1)], lay.a[(v, c2, u2)])
        for qc in Q_CLASSES:
            clique = lay.q[(v, qc)]
            for x, z in itertools.combinations(clique, 2):
                add(x, z)
            # Q_ij(v) sees all of A_i(v) and A_j(v); Q_e(v) sees A_e(v)
            for cls in qc:
                for u in others:
                    for x in clique:
                        add(x, lay.a[(v, cls, u)])

    all_q = [x for qs in lay.q.values() for x in qs]
    for j, es in enumerate(graphs):
        yj = lay.y[j]
        for x in all_q:
            add(yj, x)
        for v in ground:
            for u in ground:
                if u == v:
                    continue
                if (min(u, v), max(u, v)) in es:
                    add(yj, lay.a[(v, "e", u)])
                else:
                    for cls in ("1", "2", "3"):
                        add(yj, lay.a[(v, cls, u)])

    union = set().union(*graphs)
    for u, v in union:
        for cls in ("1", "2", "3"):
            add(lay.a[(v, cls, u)], lay.a[(u, cls, v)])

    parts = []
    for v in ground:
        for u in ground:
            if u != v:
                parts.append([lay.a[(v, cls, u)] for cls in GADGET_CLASSES])
        for qc in Q_CLASSES:
            parts.extend([x] for x in lay.q[(v, qc)])
    parts.append(list(lay.y))
    total = lay.y[-1]
    return Instance(Graph(total, edges), parts, k)


def compose_size(n: int, k: int, t: int) -> tuple[int, int]:
    """Closed forms: (vertex count, part count) of the composed instance."""
    return 4 * n * n + 4 * n * (k - 2) + t, n * n + n * (4 * k - 5) + 1
