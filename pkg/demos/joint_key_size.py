"""
Joint key size 2.5 for N = 2, K = 4
===================================

Two message symbols, five basis key symbols, two key symbols per receiver.
"""

from groupcast import build_n2k4_joint_scheme, entropy, scheme_system, verify_scheme
from groupcast.entropy import key_name

s = build_n2k4_joint_scheme(3)
system = scheme_system(s)
h = entropy(system, [key_name(k) for k in range(1, 5)])
print("H(Z1..Z4) =", h, " per message symbol:", h / s.message_len)
print(verify_scheme(s).summary())
