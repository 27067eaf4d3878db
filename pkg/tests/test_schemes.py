from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupcast.field import FieldMatrix
from groupcast.schemes import (
    BUILDERS,
    EncoderKind,
    NotQualifiedError,
    Scheme,
    SchemeError,
    SchemeParams,
    build_combinatorial_scheme,
    build_independent_keys_scheme,
    build_min_bandwidth_scheme,
    build_min_storage_scheme,
    build_n2k4_joint_scheme,
    build_n3k5_scheme,
    decode,
    derive_material,
    encode,
    expected_corner,
    min_bandwidth_combination,
    min_bandwidth_encode,
    min_storage_encode,
    space_share,
    symmetrize,
)

P = SchemeParams


def banded_n2k4():
    return build_min_bandwidth_scheme(P(2, 4, 5))


def f3_n3k4():
    return build_min_storage_scheme(P(3, 4, 3), points=(0, None, 1, 2))


def x_of(scheme, Q, basis, W):
    return list(encode(scheme, derive_material(scheme, basis), Q, W).symbols)


def test_params_validation():
    with pytest.raises(ValueError):
        P(0, 3, 3)
    with pytest.raises(ValueError):
        P(3, 3, 3)
    with pytest.raises(ValueError):
        P(1, 3, 4)


def test_min_bandwidth_generators():
    s = banded_n2k4()
    for k, v in enumerate((1, 2, 3, 4), start=1):
        assert s.key_generators[k - 1].tolist() == [[1, v, 0], [0, 1, v]]
    assert (s.alpha, s.beta) == (2, 1)
    assert build_min_bandwidth_scheme(P(1, 2, 2)).key_generators[0].tolist() == [[1, 1]]
    s = build_min_bandwidth_scheme(P(3, 4, 5))
    assert (s.alpha, s.beta) == (3, 1)


def test_min_bandwidth_needs_p_at_least_k():
    with pytest.raises(SchemeError, match="p=3 < K=4"):
        build_min_bandwidth_scheme(P(2, 4, 3))


def test_min_bandwidth_encode_examples():
    s = banded_n2k4()
    assert s.signal_map((1, 2)).keys.tolist() == [[1, 3, 2]]
    assert list(min_bandwidth_encode(s, derive_material(s, [0, 0, 0]), (1, 2), 4).symbols) == [4]
    assert list(min_bandwidth_encode(s, derive_material(s, [1, 1, 1]), (1, 2), 0).symbols) == [1]


def test_min_bandwidth_common_direction_in_both_key_spaces():
    s = banded_n2k4()
    v12 = s.signal_map((1, 2)).keys
    for q in (1, 2):
        G = s.key_generators[q - 1]
        c = FieldMatrix([min_bandwidth_combination(s, (1, 2), q)], 5)
        assert c @ G == v12
    # receiver 1: first row plus v_2 times the second row
    assert min_bandwidth_combination(s, (1, 2), 1) == [1, 2]


def test_f3_keys_and_precoders():
    s = f3_n3k4()
    assert [g.tolist() for g in s.key_generators] == [[[1, 0]], [[0, 1]], [[1, 1]], [[1, 2]]]
    assert s.encoder_kind is EncoderKind.MIN_STORAGE_NULL_SPACE
    assert (s.alpha, s.beta) == (1, 2)
    pre = s.aux["precoders"]
    assert pre["1,2,3"] == [1, 1]  # [-2, 1] mod 3
    assert pre["2,3,4"] == [0, 1]
    # each precoder is orthogonal to the eavesdropper's key row
    for Q in s.qualified_sets():
        (e,) = set(range(1, 5)) - set(Q)
        g = s.key_generators[e - 1]
        assert (g @ FieldMatrix.column(pre[",".join(map(str, Q))], 3)).is_zero()


def test_f3_default_points():
    s = build_min_storage_scheme(P(3, 4, 3))
    assert [g.tolist() for g in s.key_generators] == [g.tolist() for g in f3_n3k4().key_generators]


def test_f3_precoded_signal():
    s = f3_n3k4()
    for basis in ([0, 0], [1, 2], [2, 1]):
        for W in range(3):
            x = x_of(s, (1, 2, 3), basis, W)
            assert x == [(-2 * W + basis[0]) % 3, (W + basis[1]) % 3]
    assert list(min_storage_encode(s, derive_material(s, [0, 0]), (1, 2, 3), 1).symbols) == [1, 1]


def test_min_storage_repeat_case():
    s = build_min_storage_scheme(P(2, 5, 5))
    assert s.encoder_kind is EncoderKind.MIN_STORAGE_REPEAT
    assert (s.alpha, s.beta) == (1, 2)


@pytest.mark.parametrize("K", [3, 4, 5, 6])
def test_min_storage_n_equals_k_minus_one(K):
    p = 7 if K > 5 else 5
    s = build_min_storage_scheme(P(K - 1, K, p))
    assert s.encoder_kind is EncoderKind.MIN_STORAGE_NULL_SPACE
    assert s.beta == 2


def test_min_storage_null_space_fixed_against_later_corruption():
    s = build_min_storage_scheme(P(2, 3, 3), points=(0, None, 1))
    bad = s.with_key_entry(3, 0, 1, 0)
    assert bad.aux["precoders"] == s.aux["precoders"]


def test_baselines():
    c = build_combinatorial_scheme(P(2, 4, 5))
    assert c.alpha == 3 and c.beta == 1
    # receiver 1 holds s_12, s_13, s_14: the first three subset slots
    assert c.key_generators[0].tolist() == [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]
    i = build_independent_keys_scheme(P(3, 4, 5))
    assert (i.alpha, i.beta) == (1, 3)
    c1 = build_combinatorial_scheme(P(1, 3, 3))
    assert (c1.alpha, c1.beta) == (1, 1)


def test_n3k5_signal_shapes():
    s = build_n3k5_scheme(3)
    assert s.key_generators[4].tolist() == [[1, 1, 0, 0]]
    prof = s.bandwidth_profile()
    assert prof[(1, 2, 5)] == 2
    assert sorted(prof.values()).count(3) == 9
    assert s.beta_average == Fraction(29, 10)
    basis = [1, 2, 0, 1]
    W = 2
    assert x_of(s, (1, 2, 5), basis, W) == [(W + 1) % 3, (W + 2) % 3]
    assert x_of(s, (1, 2, 3), basis, W) == [(W + 1) % 3, (-W + 2) % 3, (W + 0) % 3]
    assert x_of(s, (1, 3, 5), basis, W) == [(W + 1) % 3, 2, (W + 0) % 3]


def test_symmetrize_n3k5():
    s = symmetrize(build_n3k5_scheme(3))
    assert s.message_len == 120
    assert set(s.bandwidth_profile().values()) == {348}
    assert s.beta == s.beta_average == Fraction(29, 10)
    assert s.alpha == 1


def test_symmetrize_independent_fixed_point():
    base = build_independent_keys_scheme(P(2, 3, 3))
    s = symmetrize(base)
    assert (s.alpha, s.beta) == (base.alpha, base.beta)


def test_n2k4_signals():
    s = build_n2k4_joint_scheme(3)
    assert (s.alpha, s.beta) == (1, 2)
    basis = [1, 2, 0, 1, 2]
    W = [2, 1]
    assert x_of(s, (1, 2), basis, W) == [(2 + 1) % 3, (1 + 2) % 3, (-2 + 0) % 3, (-1 + 1) % 3]
    x = x_of(s, (3, 4), basis, W)
    assert (W[0] + basis[4]) % 3 in x
    assert (W[0] + basis[0] + basis[1] + basis[4]) % 3 in x


def test_space_share_mixes_corners():
    a = build_min_bandwidth_scheme(P(2, 3, 3))
    b = build_independent_keys_scheme(P(2, 3, 3))
    s = space_share([(a, 1), (b, 1)])
    assert s.message_len == 2
    assert (s.alpha, s.beta) == (Fraction(3, 2), Fraction(3, 2))


def test_unqualified_sets_rejected():
    s = banded_n2k4()
    for bad in [(1,), (1, 5), (1, 1), (0, 2)]:
        with pytest.raises(SchemeError):
            s.check_qualified(bad)
    m = derive_material(s, [0, 0, 0])
    with pytest.raises(NotQualifiedError):
        decode(s, 3, m.key(3), encode(s, m, (1, 2), 0))


def test_f3_receiver3_decodes():
    s = f3_n3k4()
    m = derive_material(s, [2, 1])
    sig = encode(s, m, (1, 2, 3), 1)
    assert decode(s, 3, m.key(3), sig) == (1,)


def all_schemes():
    return [
        build_min_bandwidth_scheme(P(2, 4, 5)),
        build_min_bandwidth_scheme(P(3, 5, 5)),
        build_min_storage_scheme(P(3, 4, 5)),
        build_min_storage_scheme(P(2, 5, 5)),
        f3_n3k4(),
        build_independent_keys_scheme(P(2, 4, 5)),
        build_combinatorial_scheme(P(2, 4, 5)),
        build_n3k5_scheme(3),
        build_n3k5_scheme(7),
        build_n2k4_joint_scheme(3),
        build_n2k4_joint_scheme(5),
        space_share([(build_min_bandwidth_scheme(P(2, 4, 5)), 2), (build_min_storage_scheme(P(2, 4, 5)), 1)]),
    ]


SCHEMES = all_schemes()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, len(SCHEMES) - 1), st.integers(0, 2**32 - 1))
def test_every_qualified_receiver_decodes(i, seed):
    s = SCHEMES[i]
    rng = np.random.default_rng(seed)
    m = derive_material(s, rng.integers(0, s.p, s.basis_count))
    W = tuple(int(x) for x in rng.integers(0, s.p, s.message_len))
    for Q in s.qualified_sets():
        sig = encode(s, m, Q, W)
        assert len(sig.symbols) == s.signal_len(Q)
        for q in Q:
            assert decode(s, q, m.key(q), sig) == W


def test_symmetrized_decodes():
    s = symmetrize(build_n3k5_scheme(3))
    rng = np.random.default_rng(1)
    m = derive_material(s, rng.integers(0, 3, s.basis_count))
    W = tuple(int(x) for x in rng.integers(0, 3, s.message_len))
    for Q in [(1, 2, 5), (2, 3, 4)]:
        sig = encode(s, m, Q, W)
        assert all(decode(s, q, m.key(q), sig) == W for q in Q)


@pytest.mark.parametrize("s", SCHEMES, ids=lambda s: s.encoder_kind.value)
def test_json_round_trip(s):
    t = Scheme.from_json(s.to_json())
    assert t.to_dict() == s.to_dict()
    assert t.bandwidth_profile() == s.bandwidth_profile()


def test_json_round_trip_symmetrized():
    s = symmetrize(build_min_storage_scheme(P(2, 3, 3)))
    t = Scheme.from_json(s.to_json())
    assert t.bandwidth_profile() == s.bandwidth_profile()


def test_builders_and_expected_corners():
    for name in ("min-bandwidth", "min-storage", "independent", "combinatorial"):
        for N, K in [(1, 2), (2, 4), (3, 5)]:
            s = BUILDERS[name](N, K, 5)
            assert (s.alpha, s.beta) == expected_corner(name, N, K)


def test_wrong_message_length():
    s = build_n2k4_joint_scheme(3)
    m = derive_material(s, [0] * 5)
    with pytest.raises(SchemeError):
        encode(s, m, (1, 2), [1])
