from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupcast.field import (
    FieldError,
    FieldMatrix,
    elementary_symmetric,
    inverse,
    is_mds,
    is_prime,
    mat_det,
    mat_rank,
    next_prime,
    product,
    right_null_space,
    solve,
    vandermonde,
)

PRIMES = [2, 3, 5, 7, 11, 13]


def cofactor_det(rows, p):
    """Independent oracle: Leibniz expansion over all permutations."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total % p


def matrices(max_rows=4, max_cols=4):
    @st.composite
    def build(draw):
        p = draw(st.sampled_from(PRIMES))
        r = draw(st.integers(1, max_rows))
        c = draw(st.integers(1, max_cols))
        rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
        return FieldMatrix(rows, p)

    return build()


def square_matrices(max_n=4):
    @st.composite
    def build(draw):
        p = draw(st.sampled_from(PRIMES))
        n = draw(st.integers(1, max_n))
        rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n))
        return FieldMatrix(rows, p)

    return build()


def test_primes():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert next_prime(4) == 5 and next_prime(5) == 5 and next_prime(1) == 2
    with pytest.raises(FieldError):
        FieldMatrix([[1]], 4)


def test_inverse():
    for p in PRIMES:
        for a in range(1, p):
            assert a * inverse(a, p) % p == 1
    with pytest.raises(ZeroDivisionError):
        inverse(0, 5)


def test_entries_reduced_and_immutable():
    m = FieldMatrix([[-1, 7], [3, 5]], 5)
    assert m.tolist() == [[4, 2], [3, 0]]
    with pytest.raises(ValueError):
        m.data[0, 0] = 1


def test_mul_examples():
    s = FieldMatrix([[1], [2]], 3)
    assert (FieldMatrix([[1, 1]], 3) @ s).tolist() == [[0]]
    g1 = FieldMatrix([[1, 1, 0], [0, 1, 1]], 5)
    assert (g1 @ FieldMatrix([[1], [0], [0]], 5)).tolist() == [[1], [0]]
    m = FieldMatrix([[1, 2], [3, 4], [0, 1]], 7)
    assert FieldMatrix.identity(3, 7) @ m == m


def test_mul_rejects_mixed_fields():
    with pytest.raises(FieldError):
        FieldMatrix([[1]], 3) @ FieldMatrix([[1]], 5)


def test_rank_examples():
    assert mat_rank(FieldMatrix.zeros(2, 2, 5)) == 0
    v = FieldMatrix([[1, 3, 0], [0, 1, 3], [1, 3, 2]], 5)
    assert mat_rank(v) == 3
    assert mat_rank(FieldMatrix([[1, 2], [2, 4]], 5)) == 1


def test_det_examples():
    # [V_3; v_12] with v = (1, 2, 3)
    assert mat_det(FieldMatrix([[1, 3, 0], [0, 1, 3], [1, 3, 2]], 5)) == 2
    assert mat_det(FieldMatrix.identity(4, 7)) == 1
    # N = 3: [G_e; v_Q] with v_e = 4 and Q's points (1, 2, 3)
    ve = 4
    g = [[1, ve, 0, 0], [0, 1, ve, 0], [0, 0, 1, ve]]
    vq = [elementary_symmetric([1, 2, 3], n, 5) for n in range(4)]
    m = FieldMatrix(g + [vq], 5)
    assert mat_det(m) == 4
    assert cofactor_det(m.tolist(), 5) == 4


def test_det_non_square():
    with pytest.raises(FieldError):
        mat_det(FieldMatrix([[1, 2]], 5))


def test_null_space_examples():
    ns = right_null_space(FieldMatrix([[1, 2]], 3))
    assert ns.tolist() == [[1], [1]]
    # the same line as [-2, 1]
    assert (FieldMatrix([[-2], [1]], 3).data == ns.data).all()
    assert right_null_space(FieldMatrix.identity(2, 5)).cols == 0
    m = FieldMatrix([[1, 1, 1], [0, 1, 2]], 5)
    ns = right_null_space(m)
    assert ns.cols == 1 and ns.tolist() == [[1], [3], [1]]
    assert (m @ ns).is_zero()


def test_vandermonde_examples():
    assert vandermonde(4, 2, 5).tolist() == [[1, 1], [1, 2], [1, 3], [1, 4]]
    with pytest.raises(FieldError):
        vandermonde(4, 2, 3)
    v = vandermonde(5, 3, 5)
    for idx in combinations(range(5), 3):
        assert mat_det(v.take_rows(idx)) != 0
    assert vandermonde(4, 2, 3, points=[0, None, 1, 2]).tolist() == [[1, 0], [0, 1], [1, 1], [1, 2]]


def test_is_mds_examples():
    assert is_mds(vandermonde(4, 2, 5))
    assert not is_mds(FieldMatrix([[1, 2], [1, 2], [0, 1]], 5))
    assert is_mds(FieldMatrix([[1, 0], [0, 1], [1, 1]], 2))


@pytest.mark.parametrize("p", [p for p in PRIMES if p <= 13])
def test_vandermonde_mds_exhaustive(p):
    # K = p + 1 with the point at infinity, every column count
    pts = [None] + list(range(p))
    for cols in range(1, min(p + 1, 5) + 1):
        assert is_mds(vandermonde(p + 1, cols, p, points=pts))


def test_elementary_symmetric_examples():
    assert elementary_symmetric([1, 2], 1, 5) == 3
    assert elementary_symmetric([1, 2], 2, 5) == 2
    assert elementary_symmetric([3, 4, 1], 0, 5) == 1
    with pytest.raises(FieldError):
        elementary_symmetric([1], 2, 5)


@given(st.sampled_from(PRIMES), st.lists(st.integers(0, 50), min_size=1, max_size=5))
def test_elementary_symmetric_brute_force(p, values):
    for d in range(len(values) + 1):
        expected = sum(product([values[i] for i in idx], p) for idx in combinations(range(len(values)), d)) % p
        assert elementary_symmetric(values, d, p) == expected


@settings(max_examples=150)
@given(square_matrices())
def test_det_matches_cofactor_expansion(m):
    assert mat_det(m) == cofactor_det(m.tolist(), m.p)


@settings(max_examples=150)
@given(square_matrices())
def test_det_nonzero_iff_full_rank(m):
    assert (mat_det(m) != 0) == (mat_rank(m) == m.rows)


@settings(max_examples=150)
@given(matrices())
def test_rank_nullity(m):
    ns = right_null_space(m)
    assert mat_rank(m) + ns.cols == m.cols
    if ns.cols:
        assert (m @ ns).is_zero()
        assert mat_rank(ns) == ns.cols


@settings(max_examples=100)
@given(matrices())
def test_rank_invariant_under_transpose(m):
    assert mat_rank(m) == mat_rank(m.T)


@settings(max_examples=100)
@given(square_matrices(), st.integers(0, 10**6))
def test_solve_recovers_solution(a, seed):
    rng = np.random.default_rng(seed)
    x = FieldMatrix(rng.integers(0, a.p, size=(a.cols, 2)), a.p)
    b = a @ x
    y = solve(a, b)
    assert y is not None and a @ y == b


def test_large_modulus_matmul_no_overflow():
    p = 2_147_483_647
    a = FieldMatrix([[p - 1] * 8], p)
    b = FieldMatrix([[p - 1]] * 8, p)
    assert (a @ b).tolist() == [[8 % p]]
