"""The flow network behind the distance-to-cluster solver.

Removing U = {1, 2, 7} leaves the two cliques {3, 4} and {5, 6}.  Fix
X = {1, 2} with colors 1 and 2 and ask whether the uncovered parts can be
hit by cluster vertices without clashing with those colors.
"""
from pathlib import Path

from selcol import build_flow_network, extend_precoloring, find_cluster_modulator, max_flow, parse_instance
from selcol.cluster import ClusterStructure

inst = parse_instance((Path(__file__).parent / "fig1.selcol").read_text())

cs = ClusterStructure(frozenset({1, 2, 7}), ((3, 4), (5, 6)))
net = build_flow_network(inst, cs, {1, 2}, {1: 1, 2: 2})

# arcs by family: S from the source, F to the guards, R into the clusters,
# L to the part nodes, T into the sink (only for parts X misses)
for fam in "SFRLT":
    print(fam, net.arcs_of(fam))

res = max_flow(net)
print("flow value", res.value, "needed", inst.p - 2)

sol = extend_precoloring(inst, cs, {1, 2}, {1: 1, 2: 2})
print("extension", sorted(sol.coloring.items()))

# a smaller modulator exists: {1, 2} already leaves only cliques behind
best = find_cluster_modulator(inst.graph)
print("minimum modulator", sorted(best.modulator), "clusters", best.clusters)

# swapping the two colors only mirrors the R arcs; colors are interchangeable,
# which is why the solver tries one coloring per partition of X
net2 = build_flow_network(inst, cs, {1, 2}, {1: 2, 2: 1})
print("swapped colors: R arcs", net2.arcs_of("R"), "value", max_flow(net2).value)
