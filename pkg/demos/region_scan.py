"""
Storage / bandwidth trade-off
=============================

Tri-state membership of (alpha, beta) points, and a witness scheme for a
point on the time-sharing line between two corner schemes.
"""

from fractions import Fraction

from groupcast import RegionQuery, region_membership, verify_scheme_linear, witness_scheme
from groupcast.region import rational_grid, region_scan, rows_to_csv

for q in [(2, 7, 1.5, 1.5), (3, 5, 1, 2.6), (4, 9, 3, 1), (1, 2, 1, 1)]:
    v = region_membership(RegionQuery(*q))
    print(q, v.status.value, "|", v.witness)

# N = 3, K = 5 along alpha = 1
rows = region_scan(3, 5, [1], rational_grid(Fraction(12, 5), 3, Fraction(1, 10)))
print(rows_to_csv(rows))

v = region_membership(RegionQuery(3, 5, 2, Fraction(39, 20)))
s = witness_scheme(v, 3, 5)
print(v.witness)
print("witness alpha", s.alpha, "beta", s.beta, "verified:", verify_scheme_linear(s).passed)
