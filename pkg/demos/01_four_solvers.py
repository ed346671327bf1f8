"""A small instance decided four ways.

Seven vertices, four parts, two colors.  Every solver should say YES and
hand back a witness that verify_solution accepts.
"""
from selcol import brute_force, parse_instance, solve_cluster, solve_cotw, solve_tw, verify_solution

text = """\
p selcol 7 9 4 2
e 1 2
e 1 3
e 1 5
e 1 7
e 2 4
e 2 6
e 2 7
e 3 4
e 5 6
v 1 1 5 7
v 2 2 4
v 3 3
v 4 6
"""
inst = parse_instance(text)
print(inst, "parts:", [sorted(p) for p in inst.parts])

# only 3 * 2 * 1 * 1 = 6 selections exist, so the oracle is instant here
print("selections:", inst.selection_count())

for solver in (brute_force, solve_tw, solve_cluster, solve_cotw):
    v = solver(inst)
    w = v.witness
    print(f"{v.stats['solver']:8s}", "YES" if v.answer else "NO",
          "selected", sorted(w.selected), "colors", [w.coloring[u] for u in sorted(w.selected)],
          "problems", verify_solution(inst, w))

# with a single color the selection must be independent: 3 and 6 are forced,
# and part 2 only offers 2 (adjacent to 6) or 4 (adjacent to 3)
one = inst.with_k(1)
print("k=1:", "YES" if brute_force(one).answer else "NO")

# the solvers report what they measured
print(solve_tw(inst).stats)
print(solve_cluster(inst).stats)
print(solve_cotw(inst).stats)
