"""
One-symbol keys with null-space precoding
=========================================

N = 3, K = 4 over F_3.  Keys are s1, s2, s1+s2, s1+2 s2; for each
qualified set the message direction is orthogonal to the left-out
receiver's key.
"""

from groupcast import SchemeParams, build_min_storage_scheme, verify_scheme
from groupcast.schemes import decode, derive_material, encode

s = build_min_storage_scheme(SchemeParams(3, 4, 3), points=(0, None, 1, 2))
print("keys:", [g.tolist()[0] for g in s.key_generators])
print("precoders:", s.aux["precoders"])

m = derive_material(s, [2, 1])
x = encode(s, m, (1, 2, 3), 1)
print("X_{1,2,3} =", x.symbols)  # [-2 W + s1, W + s2]
for q in (1, 2, 3):
    print(f"receiver {q} decodes", decode(s, q, m.key(q), x))

print(verify_scheme(s).summary())

# larger K: repeat W + Z_q across the qualified set
r = build_min_storage_scheme(SchemeParams(2, 5, 5))
print(r.encoder_kind.value, "alpha", r.alpha, "beta", r.beta)
