"""
Exact equilibria, face by face
==============================

face_equilibria solves the equilibrium system restricted to one invariant
face, in exact rational arithmetic. When elimination ends in a quadratic the
coordinates live in a single square-root extension and are still exact.
"""

from fractions import Fraction

from crnrelay import (all_equilibria, builtin_model, closed_form_oracle,
                      face_equilibria, positivity_check)

m = builtin_model("osn_omega0")
params = {"Lambda": Fraction(3), "betaw": Fraction(1),
          "beta1": Fraction(3), "beta2": Fraction(4)}

# at this point every one of the nine named equilibria has all coordinates
# nonnegative, so the whole catalog is on display at once
print("all equilibria at Lambda=3, betaw=1, beta1=3, beta2=4")
for face, cands in sorted(all_equilibria(m, params).items(),
                          key=lambda kv: (len(kv[0]), sorted(kv[0]))):
    label = "{" + ",".join(m.sort_vars(face)) + "}"
    for e in cands:
        check = positivity_check(e)
        print(f"  {label:22} {e.name or '?':5} exists={check.exists}  "
              f"{e.describe(m.variables)}")
print()

# the solver output matches the closed forms coordinate by coordinate
e1 = [e for e in face_equilibria(m, {"S2", "B2"}, params) if e.name == "E1"][0]
oracle = closed_form_oracle(m, "E1", params)
for v in m.variables:
    assert (e1.coords[v] - oracle.coords[v]).is_zero
print("solver E1 equals its closed form, exactly")
print()

# the release variant ends in a quadratic for the strain-only faces: the
# coordinates carry a shared square root and comparisons stay exact
mp = builtin_model("osn_omega_pos")
for e in face_equilibria(mp, {"S2", "B2"}, {"beta1": Fraction(3)}):
    print(f"omega>0 {e.name}: classification={e.classification}")
    print("   ", e.describe(mp.variables))
    print("    nonnegative:", positivity_check(e).exists)
