from collections import Counter
from fractions import Fraction
from itertools import product as iproduct
from math import log

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupcast.entropy import (
    BudgetExceeded,
    ExactnessError,
    RandomSystem,
    block_rank,
    conditional_entropy,
    entropy,
    entropy_from_counts,
    key_name,
    mutual_information,
    scheme_system,
    signal_name,
    verify_scheme,
    verify_scheme_linear,
)
from groupcast.field import FieldMatrix, mat_rank
from groupcast.schemes import (
    SchemeParams,
    build_independent_keys_scheme,
    build_min_bandwidth_scheme,
    build_min_storage_scheme,
    build_n2k4_joint_scheme,
    build_n3k5_scheme,
    symmetrize,
)

P = SchemeParams


def brute_entropy(system, names):
    """Oracle: plain Python loop over every input, float Shannon entropy in p-ary units."""
    p, n = system.p, system.n_inputs
    counts = Counter()
    for x in iproduct(range(p), repeat=n):
        x = np.array([x])
        out = []
        for name in names:
            v = system.variables[name]
            out += [int(t) for t in ((x @ v.data.T) % p)[0]]
        counts[tuple(out)] += 1
    total = p**n
    return sum(c / total * log(total / c, p) for c in counts.values())


def test_uniform_symbol():
    sys = RandomSystem(3, 1, 0, {"s1": FieldMatrix([[1]], 3)})
    assert entropy(sys, ["s1"]) == 1
    assert entropy(sys, ["s1"], method="rank") == 1


def test_n2k4_joint_key_entropy():
    sys = scheme_system(build_n2k4_joint_scheme(3))
    names = [key_name(k) for k in range(1, 5)]
    assert entropy(sys, names) == 5
    assert entropy(sys, names, method="rank") == 5


@pytest.mark.parametrize(
    "scheme",
    [
        build_min_storage_scheme(P(2, 3, 3), points=(0, None, 1)),
        build_min_storage_scheme(P(3, 4, 3)),
        build_min_storage_scheme(P(2, 5, 5)),
        build_independent_keys_scheme(P(2, 4, 3)),
        build_n3k5_scheme(3),
    ],
    ids=lambda s: s.encoder_kind.value,
)
def test_alpha_one_keys_pairwise_independent(scheme):
    sys = scheme_system(scheme)
    K = scheme.params.K
    for q in range(1, K + 1):
        for e in range(q + 1, K + 1):
            assert entropy(sys, [key_name(q), key_name(e)]) == 2 * scheme.message_len


def test_mutual_information_examples():
    s = build_min_bandwidth_scheme(P(2, 4, 5))
    sys = scheme_system(s)
    keys = [key_name(k) for k in range(1, 5)]
    assert mutual_information(sys, ["W"], keys) == 0
    assert mutual_information(sys, ["W"], [signal_name((1, 2)), key_name(3)]) == 0
    for q in (1, 2):
        assert mutual_information(sys, ["W"], [signal_name((1, 2)), key_name(q)]) == 1


def test_conditional_entropy():
    s = build_min_storage_scheme(P(2, 3, 3), points=(0, None, 1))
    sys = scheme_system(s)
    assert conditional_entropy(sys, [key_name(1)], [key_name(2)]) == 1
    assert conditional_entropy(sys, [key_name(3)], [key_name(1), key_name(2)]) == 0
    assert conditional_entropy(sys, [key_name(1)], []) == 1


@pytest.mark.parametrize(
    "scheme",
    [
        build_min_bandwidth_scheme(P(2, 3, 3)),
        build_min_storage_scheme(P(2, 3, 3), points=(0, None, 1)),
        build_n3k5_scheme(3),
    ],
    ids=lambda s: s.encoder_kind.value,
)
def test_enumeration_matches_brute_force_oracle(scheme):
    sys = scheme_system(scheme)
    for names in (["W"], [key_name(1)], [key_name(1), key_name(2)], [signal_name(scheme.qualified_sets()[0])],
                  ["W", signal_name(scheme.qualified_sets()[-1]), key_name(scheme.params.K)]):
        exact = entropy(sys, names)
        assert float(exact) == pytest.approx(brute_entropy(sys, names), abs=1e-12)
        assert exact == entropy(sys, names, method="rank")


def test_non_power_distribution_approximation():
    # p = 2, max(s1, s2): counts 1 and 3 of 4
    sys = RandomSystem(2, 2, 0, {"m": lambda x: np.maximum(x[:, 0], x[:, 1])})
    h = entropy(sys, ["m"])
    expected = 0.25 * log(4, 2) + 0.75 * log(4 / 3, 2)
    assert abs(float(h) - expected) < 1e-12
    with pytest.raises(ExactnessError):
        entropy_from_counts([1, 3], 4, 2, require_exact=True)


def test_entropy_from_counts_validates_total():
    with pytest.raises(ValueError):
        entropy_from_counts([1, 1], 3, 2)


def test_rank_route_rejects_nonlinear():
    sys = RandomSystem(2, 2, 0, {"m": lambda x: x[:, 0] * x[:, 1]})
    with pytest.raises(TypeError):
        entropy(sys, ["m"], method="rank")


def test_budget_honored():
    sys = scheme_system(build_n2k4_joint_scheme(3))
    with pytest.raises(BudgetExceeded) as exc:
        entropy(sys, ["W"], budget=100)
    assert exc.value.required == 3**7
    with pytest.raises(BudgetExceeded):
        verify_scheme(build_n2k4_joint_scheme(3), budget=100)


def test_chunked_counts_match_single_pass():
    s = build_n2k4_joint_scheme(3)
    sys = scheme_system(s)
    from groupcast.entropy import joint_counts

    names = [signal_name((1, 2)), key_name(3)]
    (a,) = joint_counts(sys, [names], chunk=7)
    (b,) = joint_counts(sys, [names])
    assert a.counts == b.counts and a.total == b.total


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 6), st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_block_rank_matches_rank(p, rows, cols, seed):
    rng = np.random.default_rng(seed)
    data = rng.integers(0, p, size=(rows, cols))
    # sparsify so the matrix splits into several components
    data[rng.random(data.shape) < 0.7] = 0
    m = FieldMatrix(data, p)
    assert block_rank(m) == mat_rank(m)


def test_verify_min_bandwidth_n2k4_all_sets_pass():
    s = build_min_bandwidth_scheme(P(2, 4, 5))
    r = verify_scheme(s)
    assert r.passed and len(s.qualified_sets()) == 6
    assert r.values() == verify_scheme_linear(s).values()


def test_verify_n3k5_profile():
    r = verify_scheme(build_n3k5_scheme(3))
    assert r.passed
    assert sorted(r.bandwidth.values()) == [2] + [3] * 9
    assert r.beta_average == Fraction(29, 10)


def test_verify_detects_corrupted_third_key():
    s = build_min_storage_scheme(P(2, 3, 3), points=(0, None, 1))
    bad = s.with_key_entry(3, 0, 1, 0)  # Z_3 = s_1
    for r in (verify_scheme(bad), verify_scheme_linear(bad)):
        assert not r.security_passed
        leaks = [c for c in r.failures() if c.role == "eavesdropper"]
        assert leaks and all(c.value > 0 for c in leaks)


def test_zero_scheme_correctness_fails():
    # keep the one-time-pad encoder, zero every key generator entry
    s = build_min_bandwidth_scheme(P(1, 2, 2))
    for k in (1, 2):
        for j in range(2):
            s = s.with_key_entry(k, 0, j, 0)
    for r in (verify_scheme(s), verify_scheme_linear(s)):
        assert not r.correctness_passed and r.security_passed
        bad = [c for c in r.failures() if c.role == "qualified"]
        assert len(bad) == 2 and all(c.value == s.message_len for c in bad)
        assert bad[0].quantity == "H(W | X{1}, Z1)"


def test_report_json_has_exact_fractions():
    import json

    r = verify_scheme_linear(build_n3k5_scheme(3))
    doc = json.loads(r.to_json())
    assert doc["beta_average"] == {"num": 29, "den": 10}
    assert doc["passed"] is True


def test_symmetrized_n3k5_linear_verify():
    r = verify_scheme_linear(symmetrize(build_n3k5_scheme(3)))
    assert r.passed
    assert r.beta == Fraction(29, 10) and r.beta_average == Fraction(29, 10)
    assert r.alpha == 1
