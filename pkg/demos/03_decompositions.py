"""Tree decompositions and the tables built on them."""
from selcol import gen_random, heuristic_decompose, make_nice, serialize_td, validate_td, width
from selcol.generators import cycle
from selcol.partitions import bell
from selcol.treedecomp import check_nice
from selcol.twdp import compute_tables

# a 6-cycle: min-fill eliminates a vertex, adds one chord, and so on
g = cycle(6)
td = heuristic_decompose(g)
print(serialize_td(td, g.n))
print("width", width(td), "problems", validate_td(g, td))

ntd = make_nice(td)
print("nice nodes", len(ntd), "problems", check_nice(ntd))
for x in range(len(ntd)):
    print(x, ntd.kind[x], ntd.vertex[x], sorted(ntd.bag[x]), ntd.children[x])

# table sizes against the envelope 2^p * B(w+2)
inst = gen_random(10, 0.3, 4, 2, seed=3)
ntd = make_nice(heuristic_decompose(inst.graph))
tables = compute_tables(inst, ntd)
print("width", ntd.width, "largest table", max(map(len, tables)),
      "envelope", 2 ** inst.p * bell(ntd.width + 2))

# the root table holds (S, ()) for every reachable S; the full mask means YES
full = (1 << inst.p) - 1
print("root", sorted(tables[ntd.root]), "YES" if (full, ()) in tables[ntd.root] else "NO")
