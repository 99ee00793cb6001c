"""
Stability verdicts across threshold regions
===========================================

las_test decides local asymptotic stability exactly. Scanning a parameter
across its thresholds reproduces the classification table of the omega=0
variant: which equilibrium exists and which is stable flips exactly at the
rational threshold values, never near them.
"""

from fractions import Fraction

from crnrelay import all_equilibria, builtin_model, las_test, positivity_check

m = builtin_model("osn_omega0")

# with mu = mun = beta = 1 and betaw = 1 the two carrying thresholds sit at
# R0 = Lambda = 1 and at 1 + beta/betaw = 2
NAMES = ("DFE", "gOSN", "E1g", "E2g", "EEg", "RFE", "E1", "E2", "EE")

print(f"{'Lambda':8} " + " ".join(f"{n:>9}" for n in NAMES))
for lam in (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(4)):
    params = {"Lambda": lam, "betaw": Fraction(1),
              "beta1": Fraction(5, 2), "beta2": Fraction(1, 2)}
    by_name = {}
    for cands in all_equilibria(m, params).values():
        for e in cands:
            if e.is_decided and e.name:
                by_name[e.name] = e
    row = []
    for n in NAMES:
        e = by_name.get(n)
        if e is None or not positivity_check(e).exists:
            row.append("-")
        else:
            row.append(las_test(m, e, params).verdict)
    print(f"{str(lam):8} " + " ".join(f"{c:>9}" for c in row))

# reading the table: below Lambda=1 only the colonizer-free state exists and
# it is stable. Between 1 and 2 the depleted branch (gOSN and its strain
# extensions) carries the dynamics; strain 1 invades since beta1 is large.
# Above 2 the wild-type branch takes over and the depleted branch goes
# unstable wholesale. Exactly one equilibrium is LAS per column of the
# parameter regions here, and the identity of that equilibrium is decided by
# exact comparisons, not numerics.
print()
rep = las_test(m, by_name["RFE"], params)
print("RFE at Lambda=4:", rep.verdict)
for blk in rep.blocks:
    print("  block", blk.vars, "->", blk.verdict)
