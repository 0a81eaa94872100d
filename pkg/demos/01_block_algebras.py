"""
Working with block matrix algebras
==================================

Elements live block by block; the norm is the largest block norm and
positivity means every block is positive semidefinite.
"""

import numpy as np

from starint import Algebra, is_positive

# two blocks: a scalar and a 2x2 matrix
alg = Algebra((1, 2))
print("dimension:", alg.dim)

a = alg.from_coords([2.0, 0.0, 1.0, 1.0, 0.0])
print("block shapes:", [m.shape for m in a.mats])
print("norm:", a.norm())

# products and adjoints act blockwise
b = a * a.star()
print("a a* is hermitian:", np.allclose(b.block_diag(), b.block_diag().conj().T))
print("a a* is positive:", is_positive(b))

# the canonical basis is the list of matrix units, row major per block
sums = alg.zero()
for u in alg.basis:
    sums = sums + u * u.star()
print("sum u u* has coords:", np.round(sums.coords().real, 10))
