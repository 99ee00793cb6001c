"""
Bringing your own model
=======================

Everything in the library runs off a Model object, and models can come from
a plain text file instead of the builtins. This script writes a two-species
resource-consumer system to a file, parses it back, and walks it through
siphons, equilibria, and stability without touching the builtin networks.
"""

import tempfile
from pathlib import Path

from crnrelay import (
    all_equilibria,
    las_test,
    minimal_siphons,
    parse_model_file,
    positivity_check,
    print_model,
)

TEXT = """\
model chemostat

variables: n c
parameters: a d

equations:
    n' = a - d*n - n*c
    c' = n*c - c

values:
    a = 3
    d = 1
"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "chemostat.model"
    path.write_text(TEXT)
    m = parse_model_file(path)

print(print_model(m))

print("minimal siphons:", [sorted(s) for s in minimal_siphons(m.network())])
print()

# the consumer-free face {c} and the coexistence interior both carry
# an equilibrium at these values
params = m.point(None)
for face, cands in sorted(all_equilibria(m, params).items(),
                          key=lambda kv: len(kv[0])):
    label = "{" + ",".join(sorted(face)) + "}" if face else "interior"
    for e in cands:
        verdict = positivity_check(e)
        print(f"{label}: {e.describe(m.variables)}  nonnegative: {verdict.exists}")
        if verdict.exists and e.is_decided:
            rep = las_test(m, e, params)
            print("   stability:", rep.verdict)
