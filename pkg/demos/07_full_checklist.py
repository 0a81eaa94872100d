"""
The canonical checklist
=======================

Every run covers the same fixed id set; each id reports pass, fail, or
skipped with a reason, so two reports are always comparable line by line.
"""

import numpy as np

from starint import Algebra, LinMap, run_checklist, transpose_map

# an endomorphism/transfer pair: swap the two blocks of C^2
alg = Algebra((1, 1))
swap = LinMap(alg, np.array([[0.0, 1.0], [1.0, 0.0]]))
report = run_checklist(swap, swap, mode="endo_transfer",
                       alpha=swap, transfer=swap)
for line in report.summary_lines():
    print(line)

print()

# a failing candidate: every id still appears
t = transpose_map(Algebra((2,)))
bad = run_checklist(t, t)
for line in bad.summary_lines():
    parts = line.split()
    if line.startswith("overall") or (len(parts) > 1 and parts[1] == "fail"):
        print(line)
