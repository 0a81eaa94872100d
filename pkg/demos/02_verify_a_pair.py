"""
Verifying a candidate pair of maps
==================================

A pair (V, H) must be positive, star preserving, mutually pseudo-inverse,
and multiplicative against each other's range.  The verifier returns one
residual per law plus a witness for the first failure.
"""

import numpy as np

from starint import Algebra, Interaction, InteractionError, transpose_map, verify_interaction

# the flip on C^2: V reads the second coordinate, H the first
alg = Algebra((1, 1))
from starint import LinMap

v = LinMap(alg, np.array([[0.0, 1.0], [0.0, 1.0]]))
h = LinMap(alg, np.array([[1.0, 0.0], [1.0, 0.0]]))
inter = Interaction.build(v, h)
print("flip accepted, worst residual:",
      max(inter.report.residuals.values()))

# the transpose on M2 is positive but not completely positive, and the
# cross-multiplicativity law catches it on a pair of matrix units
t = transpose_map(Algebra((2,)))
report = verify_interaction(t, t)
print("transpose accepted?", report.passed)
print("residual at the failing law:", report.residuals["3.1.iv"])
print("witness:", report.witnesses["3.1.iv"])

try:
    Interaction.build(t, t)
except InteractionError as err:
    print("builder refuses:", str(err)[:64])
