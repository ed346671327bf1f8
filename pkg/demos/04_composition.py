"""Packing several 3-coloring questions into one Selective Coloring instance.

The composed instance is YES exactly when one of the input graphs is
3-colorable.  K4 is not, C4 is.
"""
from selcol import ComposeInput, brute_force, compose, named_graph
from selcol.generators import compose_layout, compose_size

k4, c4 = named_graph("K", 4), named_graph("C", 4)

only_k4 = compose(ComposeInput(4, (k4.edges,), 1))
print("K4 alone:", only_k4, "->", "YES" if brute_force(only_k4).answer else "NO")

both = compose(ComposeInput(4, (k4.edges, c4.edges), 1))
v = brute_force(both)
print("K4 and C4:", both, "->", "YES" if v.answer else "NO", "search nodes", v.stats["nodes"])

# which y was picked tells us which input graph was colored
lay = compose_layout(4, 1, 2)
print("y vertices", lay.y, "picked", sorted(v.witness.selected & set(lay.y)))

# sizes grow as 4n^2 + 4n(k-2) + t vertices and n^2 + n(4k-5) + 1 parts
for n, k, t in [(4, 1, 2), (8, 3, 2), (10, 4, 4)]:
    print((n, k, t), compose_size(n, k, t))
