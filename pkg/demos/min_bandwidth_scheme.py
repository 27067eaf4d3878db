"""
One-symbol broadcast with N-symbol keys
=======================================

N = 2, K = 4 over F_5.  Each receiver holds two key symbols; any two
receivers share exactly one key direction, used as a one-time pad.
"""

from groupcast import SchemeParams, build_min_bandwidth_scheme, verify_scheme
from groupcast.schemes import derive_material, decode, encode, min_bandwidth_combination

s = build_min_bandwidth_scheme(SchemeParams(2, 4, 5))
for k, g in enumerate(s.key_generators, 1):
    print(f"G_{k} =", g.tolist())

# the shared direction for Q = {1, 2} is [1, v1+v2, v1 v2]
print("v_Q =", s.signal_map((1, 2)).keys.tolist()[0])
print("receiver 1 combines its rows with", min_bandwidth_combination(s, (1, 2), 1))

m = derive_material(s, [1, 4, 2])
x = encode(s, m, (1, 2), 3)
print("X =", x.symbols, "decoded by 1:", decode(s, 1, m.key(1), x), "by 2:", decode(s, 2, m.key(2), x))

r = verify_scheme(s)
print(r.summary())
