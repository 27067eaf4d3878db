"""Exact linear algebra over prime fields GF(p).

Field elements are plain Python ints in ``[0, p-1]``; matrices are
:class:`FieldMatrix` objects wrapping a read-only ``int64`` numpy array
together with the modulus.  Every routine here is exact: elimination uses
modular inverses and the first nonzero entry of a column as pivot.
"""

from __future__ import annotations

from functools import reduce
from itertools import combinations
from math import isqrt
from typing import Iterable, Sequence

import numpy as np

# (p - 1)^2 must fit comfortably in int64 for the vectorized row updates.
MAX_MODULUS = 2**31 - 1


class FieldError(ValueError):
    """Raised on malformed field arithmetic (bad modulus, shapes, ranges)."""


def is_prime(n: int) -> bool:
    """Trial division; fine for the desk-scale moduli used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def check_modulus(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise FieldError(f"modulus p={p} is not prime")
    if p > MAX_MODULUS:
        raise FieldError(f"modulus p={p} exceeds supported range (< 2^31)")
    return p


def inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse in GF({p})")
    return pow(a, -1, p)


class FieldMatrix:
    """Dense immutable matrix over GF(p).

    >>> m = FieldMatrix([[1, 2], [3, 4]], 5)
    >>> (m @ m).tolist()
    [[2, 0], [0, 2]]
    """

    __slots__ = ("_data", "p")

    def __init__(self, data, p: int):
        p = check_modulus(p)
        if isinstance(data, np.ndarray) and data.dtype.kind in "iu":
            arr = np.mod(data.astype(np.int64), p)
        else:
            # reduce as Python ints so huge or negative inputs are safe
            obj = np.array(data, dtype=object)
            flat = [int(x) % p for x in obj.ravel()]
            arr = np.array(flat, dtype=np.int64).reshape(obj.shape)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        if arr.ndim != 2:
            raise FieldError(f"expected a 2-d array, got shape {arr.shape}")
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        self._data = arr
        self.p = p

    @classmethod
    def _wrap(cls, arr: np.ndarray, p: int) -> "FieldMatrix":
        # trusted constructor: arr is already reduced int64
        obj = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        obj._data = arr
        obj.p = p
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FieldMatrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), check_modulus(p))

    @classmethod
    def identity(cls, n: int, p: int) -> "FieldMatrix":
        return cls._wrap(np.eye(n, dtype=np.int64), check_modulus(p))

    @classmethod
    def column(cls, values: Iterable[int], p: int) -> "FieldMatrix":
        values = [int(v) for v in values]
        return cls(np.array(values, dtype=object).reshape(-1, 1), p)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape  # type: ignore[return-value]

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix._wrap(self._data.T, self.p)

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self._data]

    def row(self, i: int) -> "FieldMatrix":
        return FieldMatrix._wrap(self._data[i : i + 1], self.p)

    def take_rows(self, idx: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix._wrap(self._data[list(idx)].reshape(len(idx), self.cols), self.p)

    def take_cols(self, idx: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix._wrap(self._data[:, list(idx)].reshape(self.rows, len(idx)), self.p)

    def with_entry(self, i: int, j: int, value: int) -> "FieldMatrix":
        arr = self._data.copy()
        arr[i, j] = int(value) % self.p
        return FieldMatrix._wrap(arr, self.p)

    def is_zero(self) -> bool:
        return not self._data.any()

    def _check_same_field(self, other: "FieldMatrix") -> None:
        if not isinstance(other, FieldMatrix):
            raise TypeError(f"expected FieldMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise FieldError(f"modulus mismatch: {self.p} vs {other.p}")

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise FieldError(f"shape mismatch: {self.shape} vs {other.shape}")
        return FieldMatrix._wrap((self._data + other._data) % self.p, self.p)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise FieldError(f"shape mismatch: {self.shape} vs {other.shape}")
        return FieldMatrix._wrap((self._data - other._data) % self.p, self.p)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix._wrap((-self._data) % self.p, self.p)

    def scale(self, c: int) -> "FieldMatrix":
        return FieldMatrix._wrap((self._data * (int(c) % self.p)) % self.p, self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"FieldMatrix({self.tolist()}, p={self.p})"


def vstack(blocks: Sequence[FieldMatrix], cols: int | None = None, p: int | None = None) -> FieldMatrix:
    """Stack matrices vertically; ``cols``/``p`` are needed only for an empty list."""
    if not blocks:
        if cols is None or p is None:
            raise FieldError("vstack of no blocks needs cols and p")
        return FieldMatrix.zeros(0, cols, p)
    p0 = blocks[0].p
    for b in blocks:
        if b.p != p0:
            raise FieldError("modulus mismatch in vstack")
    return FieldMatrix._wrap(np.vstack([b.data for b in blocks]), p0)


def hstack(blocks: Sequence[FieldMatrix]) -> FieldMatrix:
    p0 = blocks[0].p
    for b in blocks:
        if b.p != p0:
            raise FieldError("modulus mismatch in hstack")
    return FieldMatrix._wrap(np.hstack([b.data for b in blocks]), p0)


def block_diag(blocks: Sequence[FieldMatrix]) -> FieldMatrix:
    p0 = blocks[0].p
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r : r + b.rows, c : c + b.cols] = b.data
        r += b.rows
        c += b.cols
    return FieldMatrix._wrap(out, p0)


def mat_mul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    """Matrix product mod p."""
    a._check_same_field(b)
    if a.cols != b.rows:
        raise FieldError(f"dimension mismatch: {a.shape} @ {b.shape}")
    p = a.p
    if a.cols == 0:
        return FieldMatrix.zeros(a.rows, b.cols, p)
    if (p - 1) ** 2 * a.cols < 2**62:
        return FieldMatrix._wrap((a.data @ b.data) % p, p)
    prod = a.data.astype(object) @ b.data.astype(object)
    return FieldMatrix._wrap(np.mod(prod, p).astype(np.int64), p)


def row_echelon(m: FieldMatrix, reduced: bool = True) -> tuple[np.ndarray, list[int]]:
    """Gaussian elimination over GF(p).

    Returns the (reduced) row-echelon array and the pivot columns.  Pivots
    are the first nonzero entry at or below the current row; pivot rows are
    normalized to 1.
    """
    p = m.p
    a = m.data.copy()
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * inverse(int(a[r, c]), p)) % p
        col = a[:, c].copy()
        col[r] = 0
        if not reduced:
            col[:r] = 0
        targets = np.flatnonzero(col)
        if targets.size:
            a[targets] = (a[targets] - np.outer(col[targets], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def mat_rank(m: FieldMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(row_echelon(m, reduced=False)[1])


def mat_det(m: FieldMatrix) -> int:
    """Determinant mod p, by elimination tracking row swaps and pivot scalings."""
    if m.rows != m.cols:
        raise FieldError(f"determinant of non-square matrix {m.shape}")
    p = m.p
    a = m.data.copy()
    n = m.rows
    det = 1
    for c in range(n):
        nz = np.flatnonzero(a[c:, c])
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            a[[c, i]] = a[[i, c]]
            det = -det
        piv = int(a[c, c])
        det = det * piv % p
        inv = inverse(piv, p)
        below = a[c + 1 :, c]
        if below.any():
            factors = (below * inv) % p
            a[c + 1 :] = (a[c + 1 :] - np.outer(factors, a[c])) % p
    return det % p


def right_null_space(m: FieldMatrix) -> FieldMatrix:
    """Basis of ``{x : m x = 0}`` as the columns of the returned matrix.

    One column per free variable of the RREF; the free variable is set to 1
    and the pivot variables to minus the corresponding RREF entries.
    """
    p = m.p
    n = m.cols
    if m.rows == 0:
        return FieldMatrix.identity(n, p)
    rref, pivots = row_echelon(m)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-rref[i, f]) % p
    return FieldMatrix._wrap(basis, p)


def solve(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix | None:
    """One solution ``x`` of ``a x = b`` (free variables set to 0), or None."""
    a._check_same_field(b)
    if a.rows != b.rows:
        raise FieldError(f"row mismatch: {a.shape} vs {b.shape}")
    aug = hstack([a, b])
    rref, pivots = row_echelon(aug)
    if any(pc >= a.cols for pc in pivots):
        return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = rref[i, a.cols :]
    return FieldMatrix._wrap(x, a.p)


def normalize_point(point, p: int):
    """Evaluation points are field elements or ``None`` (the point at infinity)."""
    if point is None or (isinstance(point, str) and point.lower() in ("inf", "infinity")):
        return None
    return int(point) % p


def vandermonde(K: int, cols: int, p: int, points: Sequence | None = None) -> FieldMatrix:
    """K x cols matrix whose row k is ``[1, v_k, v_k^2, ...]``.

    Points default to ``1..K`` (reduced mod p).  A point given as ``None``
    stands for infinity and yields the row ``[0, ..., 0, 1]``; with it the
    matrix is still MDS for up to ``p + 1`` rows.
    """
    p = check_modulus(p)
    if cols < 1 or cols > K:
        raise FieldError(f"need 1 <= cols <= K, got cols={cols}, K={K}")
    if points is None:
        if p < K:
            raise FieldError(f"p={p} < K={K}: not enough distinct evaluation points")
        points = list(range(1, K + 1))
    pts = [normalize_point(v, p) for v in points]
    if len(pts) != K:
        raise FieldError(f"expected {K} evaluation points, got {len(pts)}")
    if len(set(pts)) != K:
        raise FieldError(f"evaluation points must be distinct mod {p}: {list(points)}")
    rows = []
    for v in pts:
        if v is None:
            rows.append([0] * (cols - 1) + [1])
        else:
            rows.append([pow(v, j, p) for j in range(cols)])
    return FieldMatrix(rows, p)


def is_mds(m: FieldMatrix) -> bool:
    """Every cols x cols submatrix (any choice of rows) is invertible."""
    if m.rows < m.cols:
        raise FieldError(f"is_mds needs rows >= cols, got {m.shape}")
    for idx in combinations(range(m.rows), m.cols):
        if mat_det(m.take_rows(idx)) == 0:
            return False
    return True


def elementary_symmetric(values: Sequence[int], degree: int, p: int) -> int:
    """e_degree(values) mod p, via the product expansion of prod(1 + v t)."""
    if degree < 0 or degree > len(values):
        raise FieldError(f"degree {degree} out of range for {len(values)} values")
    coeffs = [1]
    for v in values:
        v = int(v) % p
        nxt = coeffs + [0]
        for j in range(len(coeffs)):
            nxt[j + 1] = (nxt[j + 1] + coeffs[j] * v) % p
        coeffs = nxt
    return coeffs[degree] % p


def product(values: Iterable[int], p: int) -> int:
    return reduce(lambda x, y: x * y % p, values, 1)
