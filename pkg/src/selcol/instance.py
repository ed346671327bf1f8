"""Graphs, partitioned instances, witnesses and their text formats.

Vertices are the integers ``1..n`` and parts are numbered ``1..p``.  The
instance format is line oriented::

    c optional comment
    p selcol <n> <m> <p> <k>
    e <u> <v>            (m lines)
    v <j> <u1> <u2> ...  (p lines)

Witnesses and verdicts are exchanged as JSON documents (see
:func:`verdict_to_json`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ParseError


class Graph:
    """An immutable simple undirected graph on vertices ``1..n``."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        adj = [set() for _ in range(n + 1)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge {u}{v} has a vertex outside 1..{n}")
            e = (u, v) if u < v else (v, u)
            if e in norm:
                raise ValueError(f"duplicate edge {e[0]}{e[1]}")
            norm.add(e)
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "adj", tuple(frozenset(a) for a in adj))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def complement(g: Graph) -> Graph:
    """Return the complement graph on the same vertex numbering."""
    return Graph(
        g.n,
        ((u, v) for u in g.vertices for v in range(u + 1, g.n + 1) if v not in g.adj[u]),
    )


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Induce ``g`` on ``s``.

    The vertices of ``s`` are renumbered ``1..|s|`` in increasing order; the
    returned map sends each new id back to the original vertex.
    """
    verts = sorted(set(s))
    for v in verts:
        if not 1 <= v <= g.n:
            raise ValueError(f"vertex {v} outside 1..{g.n}")
    new_id = {v: i for i, v in enumerate(verts, 1)}
    edges = [(new_id[u], new_id[v]) for u, v in g.edges if u in new_id and v in new_id]
    return Graph(len(verts), edges), {i: v for v, i in new_id.items()}


class Instance:
    """A Selective Coloring instance ``(G, parts, k)``."""

    __slots__ = ("graph", "parts", "part_of", "k")

    def __init__(self, graph: Graph, parts: Sequence[Iterable[int]], k: int):
        if k < 1:
            raise ValueError("color budget k must be at least 1")
        parts = tuple(frozenset(p) for p in parts)
        if not parts:
            raise ValueError("an instance needs at least one part")
        part_of = [0] * (graph.n + 1)
        for j, part in enumerate(parts, 1):
            if not part:
                raise ValueError(f"part {j} is empty")
            for v in part:
                if not 1 <= v <= graph.n:
                    raise ValueError(f"vertex {v} outside 1..{graph.n}")
                if part_of[v]:
                    raise ValueError(f"vertex {v} assigned twice")
                part_of[v] = j
        for v in graph.vertices:
            if not part_of[v]:
                raise ValueError(f"vertex {v} is in no part")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "part_of", tuple(part_of))
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("Instance is immutable")

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.graph, self.parts, self.k) == (other.graph, other.parts, other.k)

    def __hash__(self):
        return hash((self.graph, self.parts, self.k))

    def __repr__(self):
        return f"Instance(n={self.n}, m={self.graph.m}, p={self.p}, k={self.k})"

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def p(self) -> int:
        return len(self.parts)

    def parts_hit(self, xs: Iterable[int]) -> set[int]:
        return {self.part_of[v] for v in xs}

    def selection_count(self) -> int:
        """Number of one-vertex-per-part selections."""
        total = 1
        for part in self.parts:
            total *= len(part)
        return total

    def with_k(self, k: int) -> "Instance":
        return Instance(self.graph, self.parts, k)


@dataclass(frozen=True)
class Solution:
    selected: frozenset
    coloring: Mapping[int, int] | None = None
    cliques: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "selected", frozenset(self.selected))
        if self.coloring is not None:
            object.__setattr__(self, "coloring", dict(sorted(self.coloring.items())))
        if self.cliques is not None:
            object.__setattr__(self, "cliques", tuple(tuple(sorted(c)) for c in self.cliques))


@dataclass
class Verdict:
    answer: bool
    witness: Solution | None = None
    stats: dict = field(default_factory=dict)


def verify_solution(inst: Instance, sol: Solution) -> list[str]:
    """Check a witness without trusting whichever solver produced it.

    Returns the list of violations; an empty list means the witness is valid.
    """
    g = inst.graph
    problems = []
    bad = sorted(v for v in sol.selected if not 1 <= v <= g.n)
    for v in bad:
        problems.append(f"vertex {v} out of range")
    selected = {v for v in sol.selected if 1 <= v <= g.n}

    hits = [0] * (inst.p + 1)
    for v in selected:
        hits[inst.part_of[v]] += 1
    for j in range(1, inst.p + 1):
        if hits[j] == 0:
            problems.append(f"part {j} not hit")
        elif hits[j] > 1:
            problems.append(f"part {j} hit {hits[j]} times")

    if sol.coloring is None and sol.cliques is None:
        problems.append("witness has neither a coloring nor a clique partition")

    if sol.coloring is not None:
        col = sol.coloring
        for v in sorted(selected):
            if v not in col:
                problems.append(f"vertex {v} selected but uncolored")
            elif not 1 <= col[v] <= inst.k:
                problems.append(f"vertex {v} has color {col[v]} outside 1..{inst.k}")
        for v in sorted(set(col) - selected):
            problems.append(f"vertex {v} colored but not selected")
        for u, v in sorted(g.edges):
            if u in selected and v in selected and col.get(u) is not None and col.get(u) == col.get(v):
                problems.append(f"edge v{u}v{v} monochromatic")

    if sol.cliques is not None:
        if len(sol.cliques) > inst.k:
            problems.append(f"{len(sol.cliques)} cliques exceed budget {inst.k}")
        seen = []
        for c in sol.cliques:
            seen.extend(c)
            for i, u in enumerate(c):
                for v in c[i + 1:]:
                    if 1 <= u <= g.n and not g.has_edge(u, v):
                        problems.append(f"clique {list(c)} misses edge v{u}v{v}")
        if len(seen) != len(set(seen)) or set(seen) != set(sol.selected):
            problems.append("cliques do not partition the selected set")
    return problems


def coloring_from_classes(classes: Iterable[Iterable[int]]) -> dict[int, int]:
    """Label color classes 1, 2, ... by first use (ordered by minimum vertex)."""
    nonempty = sorted((sorted(c) for c in classes if c), key=lambda c: c[0])
    return {v: i for i, c in enumerate(nonempty, 1) for v in c}


# ---------------------------------------------------------------- text formats

def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield lineno, line.split()


def _read_edges(tok, lineno, n, seen, edges):
    if len(tok) != 3:
        raise ParseError("edge line must be 'e <u> <v>'", lineno)
    u, v = _ints(tok[1:], lineno)
    for x in (u, v):
        if not 1 <= x <= n:
            raise ParseError(f"vertex {x} out of range 1..{n}", lineno)
    if u == v:
        raise ParseError(f"self-loop at vertex {u}", lineno)
    e = (min(u, v), max(u, v))
    if e in seen:
        raise ParseError(f"duplicate edge {e[0]} {e[1]}", lineno)
    seen.add(e)
    edges.append(e)


def parse_instance(text: str) -> Instance:
    """Parse the ``p selcol`` format; every defect is reported with its line."""
    header = None
    edges, seen = [], set()
    parts: dict[int, list[int]] = {}
    owner: dict[int, int] = {}
    last = 0
    for lineno, tok in _lines(text):
        last = lineno
        if header is None:
            if tok[0] != "p" or len(tok) != 6 or tok[1] != "selcol":
                raise ParseError("expected header 'p selcol <n> <m> <p> <k>'", lineno)
            n, m, p, k = _ints(tok[2:], lineno)
            if n < 1 or m < 0 or p < 1 or k < 1:
                raise ParseError("header needs n >= 1, m >= 0, p >= 1, k >= 1", lineno)
            header = (n, m, p, k)
            continue
        n, m, p, k = header
        if tok[0] == "p":
            raise ParseError("repeated header", lineno)
        elif tok[0] == "e":
            _read_edges(tok, lineno, n, seen, edges)
        elif tok[0] == "v":
            if len(tok) < 3:
                raise ParseError("part line must be 'v <j> <u1> ...'", lineno)
            j, *verts = _ints(tok[1:], lineno)
            if not 1 <= j <= p:
                raise ParseError(f"part index {j} out of range 1..{p}", lineno)
            if j in parts:
                raise ParseError(f"part {j} declared twice", lineno)
            for v in verts:
                if not 1 <= v <= n:
                    raise ParseError(f"vertex {v} out of range 1..{n}", lineno)
                if v in owner:
                    raise ParseError(f"vertex {v} assigned twice", lineno)
                owner[v] = j
            parts[j] = verts
        else:
            raise ParseError(f"unknown line type {tok[0]!r}", lineno)
    if header is None:
        raise ParseError("missing header 'p selcol <n> <m> <p> <k>'", last or None)
    n, m, p, k = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}", last)
    missing = [j for j in range(1, p + 1) if j not in parts]
    if missing:
        raise ParseError(f"part {missing[0]} is missing", last)
    unassigned = [v for v in range(1, n + 1) if v not in owner]
    if unassigned:
        raise ParseError(f"vertex {unassigned[0]} assigned to no part", last)
    return Instance(Graph(n, edges), [parts[j] for j in range(1, p + 1)], k)


def parse_graph(text: str) -> Graph:
    """Read a bare graph from a ``p edges <n> <m>`` or ``p selcol`` file.

    Part lines of a ``p selcol`` file are ignored.
    """
    header = None
    edges, seen = [], set()
    last = 0
    for lineno, tok in _lines(text):
        last = lineno
        if header is None:
            if tok[0] == "p" and len(tok) == 4 and tok[1] == "edges":
                header = tuple(_ints(tok[2:], lineno))
            elif tok[0] == "p" and len(tok) == 6 and tok[1] == "selcol":
                header = tuple(_ints(tok[2:4], lineno))
            else:
                raise ParseError("expected 'p edges <n> <m>' or 'p selcol ...' header", lineno)
            continue
        if tok[0] == "e":
            _read_edges(tok, lineno, header[0], seen, edges)
        elif tok[0] != "v":
            raise ParseError(f"unknown line type {tok[0]!r}", lineno)
    if header is None:
        raise ParseError("missing header", last or None)
    if len(edges) != header[1]:
        raise ParseError(f"header declares {header[1]} edges, found {len(edges)}", last)
    return Graph(header[0], edges)


def serialize_instance(inst: Instance) -> str:
    g = inst.graph
    out = [f"p selcol {g.n} {g.m} {inst.p} {inst.k}"]
    out += [f"e {u} {v}" for u, v in g.sorted_edges()]
    for j, part in enumerate(inst.parts, 1):
        out.append(f"v {j} " + " ".join(map(str, sorted(part))))
    return "\n".join(out) + "\n"


def serialize_graph(g: Graph) -> str:
    out = [f"p edges {g.n} {g.m}"]
    out += [f"e {u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(out) + "\n"


TIMING_KEYS = frozenset({"elapsed", "elapsed_seconds"})


def verdict_to_dict(verdict: Verdict, include_timing: bool = False) -> dict:
    doc = {"answer": "YES" if verdict.answer else "NO"}
    w = verdict.witness
    if w is not None:
        doc["selected"] = sorted(w.selected)
        if w.coloring is not None:
            doc["coloring"] = [[v, c] for v, c in sorted(w.coloring.items())]
        if w.cliques is not None:
            doc["cliques"] = [list(c) for c in w.cliques]
    doc["stats"] = {
        key: val for key, val in verdict.stats.items()
        if include_timing or key not in TIMING_KEYS
    }
    return doc


def verdict_to_json(verdict: Verdict, include_timing: bool = False) -> str:
    """Serialize deterministically: sorted keys, fixed indentation."""
    return json.dumps(verdict_to_dict(verdict, include_timing), sort_keys=True, indent=2) + "\n"


def verdict_from_json(text: str) -> Verdict:
    doc = json.loads(text)
    if doc.get("answer") not in ("YES", "NO"):
        raise ParseError("solution document needs answer YES or NO")
    witness = None
    if "selected" in doc:
        coloring = None
        if "coloring" in doc:
            coloring = {int(v): int(c) for v, c in doc["coloring"]}
        cliques = None
        if "cliques" in doc:
            cliques = tuple(tuple(int(v) for v in c) for c in doc["cliques"])
        witness = Solution(frozenset(int(v) for v in doc["selected"]), coloring, cliques)
    return Verdict(doc["answer"] == "YES", witness, dict(doc.get("stats", {})))
