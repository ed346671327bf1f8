"""Tree decompositions: validation, min-fill construction, nice form, PACE I/O."""
from __future__ import annotations

from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import InvalidDecomposition, ParseError
from .instance import Graph

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


class TreeDecomposition:
    """Bags keyed by node id plus the undirected tree edges between nodes."""

    __slots__ = ("bags", "tree_edges")

    def __init__(self, bags: Mapping[int, frozenset], tree_edges=()):
        object.__setattr__(self, "bags", {i: frozenset(b) for i, b in bags.items()})
        object.__setattr__(
            self, "tree_edges", frozenset((min(a, b), max(a, b)) for a, b in tree_edges)
        )

    def __setattr__(self, name, value):
        raise AttributeError("TreeDecomposition is immutable")

    def __repr__(self):
        return f"TreeDecomposition(nodes={len(self.bags)}, width={width(self)})"

    def neighbors(self) -> dict[int, list[int]]:
        nb = {i: [] for i in self.bags}
        for a, b in sorted(self.tree_edges):
            nb[a].append(b)
            nb[b].append(a)
        return nb


def width(td) -> int:
    """Largest bag size minus one.

    A decomposition whose bags are all empty (the empty graph) has width -1
    in the usual convention; it is reported as 0 so cost formulas stay sane.
    """
    bags = td.bags.values() if isinstance(td, TreeDecomposition) else td.bag
    return max(max((len(b) for b in bags), default=0) - 1, 0)


def _tree_problems(td):
    nodes = set(td.bags)
    problems = []
    for a, b in sorted(td.tree_edges):
        if a not in nodes or b not in nodes:
            problems.append(f"tree edge {a}-{b} names an unknown node")
    if problems:
        return problems
    if not nodes:
        return ["decomposition has no nodes"]
    if len(td.tree_edges) != len(nodes) - 1:
        problems.append(f"{len(td.tree_edges)} tree edges for {len(nodes)} nodes is not a tree")
    nb = td.neighbors()
    start = min(nodes)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in nb[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if seen != nodes:
        problems.append(f"tree is disconnected: node {min(nodes - seen)} unreachable from node {start}")
    return problems


def validate_td(g: Graph, td: TreeDecomposition) -> list[str]:
    """Check the three decomposition axioms; return violations (empty if valid)."""
    problems = _tree_problems(td)
    if problems:
        return problems
    holders = {v: [] for v in g.vertices}
    for i in sorted(td.bags):
        for v in td.bags[i]:
            if v not in holders:
                problems.append(f"bag {i} holds vertex {v} outside 1..{g.n}")
            else:
                holders[v].append(i)
    for v in g.vertices:
        if not holders[v]:
            problems.append(f"vertex {v} in no bag")
    for u, v in sorted(g.edges):
        if not any(u in td.bags[i] for i in holders[v]):
            problems.append(f"edge v{u}v{v} in no bag")
    nb = td.neighbors()
    for v in g.vertices:
        nodes = set(holders[v])
        if len(nodes) < 2:
            continue
        start = min(nodes)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y in nodes and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != nodes:
            problems.append(
                f"vertex {v}: bags {start} and {min(nodes - seen)} are not connected through bags holding it"
            )
    return problems


def elimination_order(g: Graph) -> list[int]:
    """Min-fill elimination ordering, ties broken by min degree then vertex id."""
    adj = {v: set(g.adj[v]) for v in g.vertices}

    def fill(v):
        nb = sorted(adj[v])
        missing = 0
        for i, a in enumerate(nb):
            na = adj[a]
            for b in nb[i + 1:]:
                if b not in na:
                    missing += 1
        return missing

    fills = {v: fill(v) for v in adj}
    order = []
    while adj:
        v = min(adj, key=lambda x: (fills[x], len(adj[x]), x))
        order.append(v)
        nb = adj.pop(v)
        del fills[v]
        for a in nb:
            adj[a].discard(v)
            adj[a] |= nb - {a}
        touched = set(nb)
        for a in nb:
            touched |= adj[a]
        for a in touched:
            fills[a] = fill(a)
    return order


def decomposition_from_order(g: Graph, order) -> TreeDecomposition:
    """Build the decomposition induced by eliminating vertices in ``order``.

    Node ``i`` (1-based) is the bag created when eliminating ``order[i-1]``.
    """
    if g.n == 0:
        return TreeDecomposition({1: frozenset()})
    pos = {v: i for i, v in enumerate(order, 1)}
    adj = {v: set(g.adj[v]) for v in g.vertices}
    bags = {}
    edges = []
    roots = []
    for i, v in enumerate(order, 1):
        later = adj[v]
        bags[i] = frozenset(later | {v})
        if later:
            edges.append((i, min(pos[u] for u in later)))
        else:
            roots.append(i)
        for a in later:
            adj[a].discard(v)
            adj[a] |= later - {a}
        del adj[v]
    # stitch components together below the last bag
    top = roots[-1]
    edges.extend((r, top) for r in roots[:-1])
    return TreeDecomposition(bags, edges)


def heuristic_decompose(g: Graph) -> TreeDecomposition:
    return decomposition_from_order(g, elimination_order(g))


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """A rooted nice decomposition stored as parallel per-node arrays.

    Node ids are topologically ordered: every child id is smaller than its
    parent id, so iterating ``range(len(kind))`` visits nodes bottom-up.
    """

    kind: tuple
    vertex: tuple          # introduced/forgotten vertex, None for leaf/join
    bag: tuple             # frozenset per node
    children: tuple        # tuple of child ids per node
    root: int

    def __len__(self):
        return len(self.kind)

    @property
    def width(self) -> int:
        return width(self)

    def parents(self) -> list:
        par = [None] * len(self.kind)
        for x, ch in enumerate(self.children):
            for c in ch:
                par[c] = x
        return par

    def as_plain(self) -> TreeDecomposition:
        edges = [(x, c) for x, ch in enumerate(self.children) for c in ch]
        return TreeDecomposition(dict(enumerate(self.bag)), edges)

    def subtree_vertices(self, x) -> frozenset:
        """Vertices of the graph G_x below (and including) node ``x``."""
        out = set()
        stack = [x]
        while stack:
            y = stack.pop()
            out |= self.bag[y]
            stack.extend(self.children[y])
        return frozenset(out)


def _contract_subset_bags(td):
    bags = dict(td.bags)
    nb = {i: set() for i in bags}
    for a, b in td.tree_edges:
        nb[a].add(b)
        nb[b].add(a)
    changed = True
    while changed:
        changed = False
        for a in sorted(bags):
            for b in sorted(nb[a]):
                if bags[a] <= bags[b]:
                    # fold a into its superset neighbour b
                    for c in nb[a]:
                        if c != b:
                            nb[c].discard(a)
                            nb[c].add(b)
                            nb[b].add(c)
                    nb[b].discard(a)
                    del nb[a], bags[a]
                    changed = True
                    break
            if changed:
                break
    return bags, nb


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Convert ``td`` into a nice decomposition of the same width.

    Subset bags are contracted first. Between a child bag B and its parent
    bag B', the vertices of B minus B' are forgotten (ascending) before those
    of B' minus B are introduced (ascending). Several children are combined
    by left-leaning binary joins, and forgets above the top bag make the root
    a forget node with an empty bag.
    """
    if _tree_problems(td):
        raise InvalidDecomposition("; ".join(_tree_problems(td)))
    bags, nb = _contract_subset_bags(td)
    kind, vertex, bag, children = [], [], [], []

    def new(k, v, b, ch):
        kind.append(k)
        vertex.append(v)
        bag.append(frozenset(b))
        children.append(tuple(ch))
        return len(kind) - 1

    def transition(top, src, dst):
        cur = set(src)
        for v in sorted(src - dst):
            cur.discard(v)
            top = new(FORGET, v, cur, [top])
        for v in sorted(dst - src):
            cur.add(v)
            top = new(INTRODUCE, v, cur, [top])
        return top

    root_orig = min(bags)
    parent = {root_orig: None}
    order = [root_orig]
    for x in order:
        for y in sorted(nb[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
    kids = {x: [] for x in bags}
    for x in order[1:]:
        kids[parent[x]].append(x)

    top_of = {}
    for x in reversed(order):
        tops = [transition(top_of.pop(c), bags[c], bags[x]) for c in sorted(kids[x])]
        if not tops:
            tops = [transition(new(LEAF, None, (), ()), frozenset(), bags[x])]
        cur = tops[0]
        for other in tops[1:]:
            cur = new(JOIN, None, bags[x], [cur, other])
        top_of[x] = cur
    root = transition(top_of[root_orig], bags[root_orig], frozenset())
    return NiceTreeDecomposition(tuple(kind), tuple(vertex), tuple(bag), tuple(children), root)


def evaluate_bottom_up(ntd: NiceTreeDecomposition, compute: Callable, threads: int = 1) -> list:
    """Compute ``tables[x] = compute(x, [tables[c] for c in children])`` for all nodes.

    With ``threads > 1`` sibling subtrees are evaluated concurrently; each
    table is a pure function of its children, so the result is identical.
    """
    n = len(ntd.kind)
    tables = [None] * n
    if threads <= 1:
        for x in range(n):
            tables[x] = compute(x, [tables[c] for c in ntd.children[x]])
        return tables
    par = ntd.parents()
    waiting = [len(ch) for ch in ntd.children]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        running = {}
        for x in range(n):
            if waiting[x] == 0:
                running[pool.submit(compute, x, [])] = x
        while running:
            done, _ = wait(running, return_when=FIRST_COMPLETED)
            for fut in done:
                x = running.pop(fut)
                tables[x] = fut.result()
                p = par[x]
                if p is not None:
                    waiting[p] -= 1
                    if waiting[p] == 0:
                        args = [tables[c] for c in ntd.children[p]]
                        running[pool.submit(compute, p, args)] = p
    return tables


# ------------------------------------------------------------------ PACE .td

def parse_td(text: str) -> tuple[TreeDecomposition, int]:
    """Read a PACE-2017 ``.td`` file; returns the decomposition and ``n``."""
    header = None
    bags = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        try:
            if tok[0] == "s":
                if header is not None:
                    raise ParseError("repeated 's td' line", lineno)
                if len(tok) != 5 or tok[1] != "td":
                    raise ParseError("expected 's td <bags> <max_bag> <n>'", lineno)
                header = tuple(int(t) for t in tok[2:])
            elif header is None:
                raise ParseError("'s td' line must come first", lineno)
            elif tok[0] == "b":
                i = int(tok[1])
                if i in bags:
                    raise ParseError(f"bag {i} declared twice", lineno)
                bags[i] = frozenset(int(t) for t in tok[2:])
            else:
                if len(tok) != 2:
                    raise ParseError("tree edge line must be '<id> <id>'", lineno)
                edges.append((int(tok[0]), int(tok[1])))
        except ValueError:
            raise ParseError(f"bad integer in {line!r}", lineno) from None
    if header is None:
        raise ParseError("missing 's td' line")
    num_bags, max_bag, n = header
    if len(bags) != num_bags:
        raise ParseError(f"header declares {num_bags} bags, found {len(bags)}")
    if any(len(b) > max_bag for b in bags.values()):
        raise ParseError(f"a bag exceeds the declared maximum size {max_bag}")
    return TreeDecomposition(bags, edges), n


def serialize_td(td: TreeDecomposition, n: int) -> str:
    """Write PACE-2017 ``.td`` text with bags renumbered ``1..N`` in id order."""
    ids = {old: i for i, old in enumerate(sorted(td.bags), 1)}
    max_bag = max((len(b) for b in td.bags.values()), default=0)
    out = [f"s td {len(ids)} {max_bag} {n}"]
    for old, i in ids.items():
        out.append(" ".join(["b", str(i)] + [str(v) for v in sorted(td.bags[old])]))
    for a, b in sorted((min(ids[a], ids[b]), max(ids[a], ids[b])) for a, b in td.tree_edges):
        out.append(f"{a} {b}")
    return "\n".join(out) + "\n"


def check_nice(ntd: NiceTreeDecomposition) -> list[str]:
    """Structural problems of a nice decomposition (empty list if none)."""
    problems = []
    for x, k in enumerate(ntd.kind):
        ch = ntd.children[x]
        if any(c >= x for c in ch):
            problems.append(f"node {x} has a child with a larger id")
            continue
        b = ntd.bag[x]
        v = ntd.vertex[x]
        if k == LEAF:
            if ch or b:
                problems.append(f"leaf {x} must have no children and an empty bag")
        elif k == INTRODUCE:
            if len(ch) != 1 or v not in b or ntd.bag[ch[0]] != b - {v}:
                problems.append(f"introduce node {x} does not add exactly vertex {v}")
        elif k == FORGET:
            if len(ch) != 1 or v in b or ntd.bag[ch[0]] != b | {v}:
                problems.append(f"forget node {x} does not drop exactly vertex {v}")
        elif k == JOIN:
            if len(ch) != 2 or any(ntd.bag[c] != b for c in ch):
                problems.append(f"join node {x} needs two children with equal bags")
        else:
            problems.append(f"node {x} has unknown kind {k!r}")
    if ntd.bag[ntd.root]:
        problems.append("root bag is not empty")
    if len(ntd.kind) > 1 and ntd.kind[ntd.root] != FORGET:
        problems.append("root is not a forget node")
    return problems
