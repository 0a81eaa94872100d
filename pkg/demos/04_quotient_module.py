"""
The quotient bimodule and its two inner products
================================================

Tensors over the pair carry a right inner product valued in one compressed
algebra and a left one valued in the other.  Null vectors are quotiented
away; the surviving classes form a finite-dimensional bimodule whose norm
can be computed three independent ways.
"""

import numpy as np

from starint import build_bimodule, flip_interaction

x = build_bimodule(flip_interaction())
alg = x.algebra
print("classes surviving the quotient:", x.r)

a = alg.from_coords([3.0, 5.0])
b = alg.from_coords([2.0, 7.0])
t = x.simple(a, b)
print("norm of a (x) b:", x.module_norm(t))      # = |a_1 b_2| for the flip

# a tensor whose class dies in the quotient
dead = x.simple(alg.from_coords([0.0, 9.0]), b)
print("norm of a dead class:", x.module_norm(dead))

# the closed-form norms agree with the quotient Gram norm
rng = np.random.default_rng(0)
pairs = [(alg.random_element(rng), alg.random_element(rng)) for _ in range(3)]
nr, nl = x.norm_two_ways(pairs)
ng = x.module_norm(x.tensor_of_pairs(pairs))
print("right / left / gram:", round(nr, 12), round(nl, 12), round(ng, 12))
