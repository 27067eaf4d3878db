"""
Average bandwidth 2.9 at alpha = 1 for N = 3, K = 5
===================================================

One qualified set needs two symbols, the other nine need three.
Running the scheme once per relabeling of the receivers makes every
set cost 2.9 symbols per message symbol.
"""

from collections import Counter

from groupcast import build_n3k5_scheme, symmetrize, verify_scheme, verify_scheme_linear

s = build_n3k5_scheme(3)
print("bandwidth per set:", Counter(s.bandwidth_profile().values()))
print("average:", s.beta_average)
print(verify_scheme(s).summary())

sym = symmetrize(s)
print("symmetrized: L_W =", sym.message_len, "L_X per set =", set(sym.bandwidth_profile().values()))
r = verify_scheme_linear(sym)
print("beta =", r.beta, "passed:", r.passed)
