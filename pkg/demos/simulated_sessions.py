"""
Seeded key assignment and groupcast sessions
============================================
"""

from groupcast import SchemeParams, build_min_storage_scheme, exhaustive_leakage_audit, run_session, setup
from groupcast.simulator import transcript_jsonl

s = build_min_storage_scheme(SchemeParams(3, 4, 3))
session = setup(s, seed=2024)
for r in session.receivers:
    print(f"receiver {r.index} key {r.key}")

for _ in range(3):
    entry = run_session(session, session.random_qualified(), session.random_message())
    print(entry.qualified, "W", entry.message, "X", entry.signal, "all decoded:", entry.all_decoded)
print(transcript_jsonl(session), end="")

# the joint law of (X_Q, Z_e) is the same for every message
print("leakage audit passed:", exhaustive_leakage_audit(s).passed)
bad = s.with_key_entry(4, 0, 1, 0)  # receiver 4 now holds s1, equal to receiver 1
audit = exhaustive_leakage_audit(bad)
print("after corrupting key 4:", audit.passed, audit.failures()[0])
