"""
Invasion numbers and the relay walk
===================================

When a boundary equilibrium is unstable, the instability usually points
along one lattice cover: a block of absent variables whose linearized
dynamics can grow. The relay test follows that pointer one cover at a time
and asks whether a stable successor waits on the larger face. Chaining the
answers gives the hand-off graph of the whole model.
"""

from fractions import Fraction

from crnrelay import (builtin_model, closed_form_oracle, invasion_number,
                      relay_graph, relay_test_cover, relay_test_cover_strict)

m = builtin_model("osn_omega0")
p0 = {"Lambda": Fraction(2), "betaw": Fraction(1, 2), "beta1": Fraction(3)}

# strain 1 tries to invade the depleted steady state gOSN
gosn = closed_form_oracle(m, "gOSN", p0)
rep = invasion_number(m, {"S1", "B1"}, gosn, p0)
print("strain-1 invasion block at gOSN:")
for row in rep.block:
    print("   [" + "  ".join(str(x) for x in row) + "]")
print(f"abscissa: {rep.abscissa_sign} (via {rep.abscissa_source}), "
      f"next-generation ratio rho = {rep.rho}, consistent = {rep.consistent}")
print()

# the relay across the cover: gOSN hands off to E1g, which is LAS here
cover = relay_test_cover(m, {"S1", "B1", "S2", "B2", "W"}, {"S2", "B2", "W"}, p0)
print("relay over", sorted(cover.invading), "->", cover.verdict)
for r in cover.residents:
    succ = r.stable_successor.name if r.stable_successor else None
    print(f"  resident {r.resident.name}: {r.verdict}, stable successor {succ}")
print()

# the strict variant refuses irrational data instead of working in the
# extension field; on this cover the leading eigenvalue is irrational
strict = relay_test_cover_strict(m, {"S1", "B1", "S2", "B2", "W"},
                                 {"S2", "B2", "W"}, p0)
print("strict mode verdict:", strict.verdict)
for line in strict.trace:
    print("   ", line)
print()

# the full graph at this point, ready for graphviz
g = relay_graph(m, p0)
inhabited = [n.label for n in g.nodes if n.inhabited]
print(f"relay graph: {len(g.nodes)} faces ({len(inhabited)} inhabited), "
      f"{len(g.edges)} edges")
for e in g.edges:
    print(f"  {g.node(e.source).label:24} -> {g.node(e.target).label:20}"
          f" [{e.kind}] invading {','.join(e.invading)}")
print()
print(g.to_dot())
