"""
Exact linear algebra over GF(p)
===============================

Rank, determinant, null space and Vandermonde matrices, all computed with
exact modular elimination.
"""

from itertools import combinations

from groupcast.field import FieldMatrix, elementary_symmetric, is_mds, mat_det, mat_rank, right_null_space, vandermonde

# a banded key matrix stacked with a shared key direction, points v = (1, 2, 3)
m = FieldMatrix([[1, 3, 0], [0, 1, 3], [1, 3, 2]], 5)
print("rank", mat_rank(m), "det", mat_det(m))  # det = (3-1)(3-2) = 2

# the same determinant for N = 3: (-1)^N prod (v_e - v_q)
p, ve, Q = 5, 4, [1, 2, 3]
vQ = [elementary_symmetric(Q, n, p) for n in range(4)]
big = FieldMatrix([[1, ve, 0, 0], [0, 1, ve, 0], [0, 0, 1, ve], vQ], p)
print("det", mat_det(big), "expected", (-1) ** 3 * (ve - 1) * (ve - 2) * (ve - 3) % p)

# null space: the precoder orthogonal to a key row
print("null space of [1 2] over F_3:", right_null_space(FieldMatrix([[1, 2]], 3)).tolist())

# every 3x3 minor of a 5x3 Vandermonde matrix over F_5 is invertible
v = vandermonde(5, 3, 5)
print("minors:", [mat_det(v.take_rows(r)) for r in combinations(range(5), 3)])
print("MDS:", is_mds(v))
