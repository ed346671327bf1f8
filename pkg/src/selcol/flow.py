"""Integer maximum flow (Dinic's blocking-flow algorithm)."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    cap: int
    family: str = ""


@dataclass
class FlowNetwork:
    """A digraph with integer arc capacities and labelled nodes.

    ``labels[i]`` names node ``i``; ``arcs`` keeps insertion order, which
    fixes the order in which augmenting paths are found.
    """

    labels: list = field(default_factory=list)
    arcs: list = field(default_factory=list)
    source: int = 0
    sink: int = 1
    index: dict = field(default_factory=dict, repr=False)

    def add_node(self, label) -> int:
        if label in self.index:
            raise ValueError(f"duplicate node {label!r}")
        self.index[label] = len(self.labels)
        self.labels.append(label)
        return self.index[label]

    def add_arc(self, tail, head, cap, family=""):
        if cap < 0:
            raise ValueError("capacities must be non-negative")
        self.arcs.append(Arc(self.index[tail], self.index[head], int(cap), family))

    def arcs_of(self, family):
        return [(self.labels[a.tail], self.labels[a.head]) for a in self.arcs if a.family == family]


@dataclass
class FlowResult:
    value: int
    flow: list          # flow on arcs[i]

    def on(self, net: FlowNetwork, tail, head) -> int:
        t, h = net.index[tail], net.index[head]
        return sum(f for a, f in zip(net.arcs, self.flow) if a.tail == t and a.head == h)


def max_flow(net: FlowNetwork) -> FlowResult:
    n = len(net.labels)
    s, t = net.source, net.sink
    # residual edges stored in pairs: 2i forward, 2i+1 backward
    head, cap, out = [], [], [[] for _ in range(n)]
    for a in net.arcs:
        out[a.tail].append(len(head))
        head.append(a.head)
        cap.append(a.cap)
        out[a.head].append(len(head))
        head.append(a.tail)
        cap.append(0)
    if s == t:
        return FlowResult(0, [0] * len(net.arcs))

    value = 0
    while True:
        level = [-1] * n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in out[u]:
                if cap[e] > 0 and level[head[e]] < 0:
                    level[head[e]] = level[u] + 1
                    q.append(head[e])
        if level[t] < 0:
            break
        it = [0] * n

        def push(u, limit):
            if u == t:
                return limit
            edges = out[u]
            while it[u] < len(edges):
                e = edges[it[u]]
                v = head[e]
                if cap[e] > 0 and level[v] == level[u] + 1:
                    got = push(v, min(limit, cap[e]))
                    if got:
                        cap[e] -= got
                        cap[e ^ 1] += got
                        return got
                it[u] += 1
            return 0

        while True:
            got = push(s, float("inf"))
            if not got:
                break
            value += got
    flow = [cap[2 * i + 1] for i in range(len(net.arcs))]
    return FlowResult(int(value), flow)
