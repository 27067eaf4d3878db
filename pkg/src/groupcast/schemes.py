"""Key assignments and broadcast encoders for groupcast to any N of K receivers.

Every scheme here is linear.  A scheme fixes

* ``basis_count`` uniform basis symbols ``s``,
* one key generator ``G_k`` per receiver, so receiver k stores ``Z_k = G_k s``,
* for every qualified set ``Q`` an affine encoder
  ``X_Q = A_Q W + B_Q s`` (see :meth:`Scheme.signal_map`).

Receivers are numbered from 1 and qualified sets are sorted tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations
from math import comb
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .field import (
    FieldError,
    FieldMatrix,
    block_diag,
    check_modulus,
    elementary_symmetric,
    hstack,
    inverse,
    mat_mul,
    normalize_point,
    right_null_space,
    solve,
    vandermonde,
    vstack,
)

Qualified = tuple[int, ...]


class SchemeError(ValueError):
    pass


class NotQualifiedError(SchemeError):
    """A receiver outside the qualified set asked to decode."""


class DecodingError(SchemeError):
    """The receiver's key and the signal do not determine the message."""


class EncoderKind(str, Enum):
    MIN_BANDWIDTH = "min-bandwidth"
    MIN_STORAGE_NULL_SPACE = "min-storage-null-space"
    MIN_STORAGE_REPEAT = "min-storage-repeat"
    INDEPENDENT_KEYS = "independent"
    COMBINATORIAL_SHARED = "combinatorial"
    N3K5 = "n3k5"
    N2K4_JOINT = "n2k4-joint"
    SYMMETRIZED = "symmetrized"
    SPACE_SHARED = "space-shared"


@dataclass(frozen=True)
class SchemeParams:
    N: int
    K: int
    p: int

    def __post_init__(self):
        if not 1 <= self.N <= self.K - 1:
            raise SchemeError(f"need 1 <= N <= K-1, got N={self.N}, K={self.K}")
        try:
            check_modulus(self.p)
        except FieldError as exc:
            raise SchemeError(str(exc)) from None


class SignalMap(NamedTuple):
    """Coefficients of ``X_Q = message @ W + keys @ s``."""

    message: FieldMatrix
    keys: FieldMatrix


@dataclass(frozen=True)
class KeyMaterial:
    basis: tuple[int, ...]
    keys: tuple[tuple[int, ...], ...]

    def key(self, receiver: int) -> tuple[int, ...]:
        return self.keys[receiver - 1]


@dataclass(frozen=True)
class BroadcastSignal:
    qualified: Qualified
    symbols: tuple[int, ...]


def qualified_key(Q: Iterable[int]) -> str:
    return ",".join(str(q) for q in sorted(Q))


def _unit(i: int, n: int) -> list[int]:
    row = [0] * n
    row[i] = 1
    return row


@dataclass(frozen=True, eq=False)
class Scheme:
    """A built scheme.  Treat ``aux`` as read-only; it holds encoder constants."""

    params: SchemeParams
    basis_count: int
    message_len: int
    key_generators: tuple[FieldMatrix, ...]
    encoder_kind: EncoderKind
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        K = self.params.K
        if len(self.key_generators) != K:
            raise SchemeError(f"expected {K} key generators, got {len(self.key_generators)}")
        rows = {g.rows for g in self.key_generators}
        if len(rows) != 1:
            raise SchemeError(f"key generators must share a row count, got {sorted(rows)}")
        for k, g in enumerate(self.key_generators, 1):
            if g.cols != self.basis_count:
                raise SchemeError(f"generator {k} has {g.cols} columns, expected {self.basis_count}")
            if g.p != self.params.p:
                raise SchemeError(f"generator {k} lives in GF({g.p}), expected GF({self.params.p})")

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def key_len(self) -> int:
        return self.key_generators[0].rows

    def qualified_sets(self) -> list[Qualified]:
        return list(combinations(range(1, self.params.K + 1), self.params.N))

    def check_qualified(self, Q: Iterable[int]) -> Qualified:
        Q = tuple(sorted(int(q) for q in Q))
        N, K = self.params.N, self.params.K
        if len(Q) != N or len(set(Q)) != N:
            raise SchemeError(f"qualified set must hold {N} distinct receivers, got {list(Q)}")
        if Q[0] < 1 or Q[-1] > K:
            raise SchemeError(f"receivers are numbered 1..{K}, got {list(Q)}")
        return Q

    @cached_property
    def _maps(self) -> dict:
        return {}

    def signal_map(self, Q: Iterable[int]) -> SignalMap:
        Q = self.check_qualified(Q)
        cache = self._maps
        if Q not in cache:
            sm = _ENCODERS[self.encoder_kind](self, Q)
            if sm.message.cols != self.message_len or sm.keys.cols != self.basis_count:
                raise SchemeError(f"encoder for {Q} has inconsistent shape")
            cache[Q] = sm
        return cache[Q]

    def signal_len(self, Q: Iterable[int]) -> int:
        Q = self.check_qualified(Q)
        if self.encoder_kind in (EncoderKind.SYMMETRIZED, EncoderKind.SPACE_SHARED):
            return sum(base.signal_len(_relabel(Q, lab)) for base, lab in self.blocks)
        return self.signal_map(Q).message.rows

    def bandwidth_profile(self) -> dict[Qualified, int]:
        return {Q: self.signal_len(Q) for Q in self.qualified_sets()}

    @property
    def broadcast_len(self) -> int:
        return max(self.bandwidth_profile().values())

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.key_len, self.message_len)

    @property
    def beta(self) -> Fraction:
        """Worst case over qualified sets."""
        return Fraction(self.broadcast_len, self.message_len)

    @property
    def beta_average(self) -> Fraction:
        prof = self.bandwidth_profile()
        return Fraction(sum(prof.values()), len(prof) * self.message_len)

    @cached_property
    def blocks(self) -> list[tuple["Scheme", tuple[int, ...]]]:
        """Sub-schemes of a composite, each with its receiver relabeling.

        Receiver k plays the role ``relabel[k - 1]`` inside the block.
        """
        if self.encoder_kind is EncoderKind.SYMMETRIZED:
            base = Scheme.from_dict(self.aux["base"])
            return [(base, perm) for perm in permutations(range(1, self.params.K + 1))]
        if self.encoder_kind is EncoderKind.SPACE_SHARED:
            ident = tuple(range(1, self.params.K + 1))
            out = []
            for part in self.aux["parts"]:
                sub = Scheme.from_dict(part["scheme"])
                out.extend((sub, ident) for _ in range(part["copies"]))
            return out
        raise SchemeError(f"{self.encoder_kind.value} scheme has no blocks")

    def to_dict(self) -> dict:
        return {
            "params": {"N": self.params.N, "K": self.params.K, "p": self.params.p},
            "basis_count": self.basis_count,
            "message_len": self.message_len,
            "key_generators": [g.tolist() for g in self.key_generators],
            "encoder_kind": self.encoder_kind.value,
            "aux": self.aux,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Scheme":
        params = SchemeParams(**doc["params"])
        basis_count = int(doc["basis_count"])
        gens = []
        for g in doc["key_generators"]:
            arr = np.array(g, dtype=np.int64).reshape(len(g), basis_count)
            gens.append(FieldMatrix(arr, params.p))
        return cls(
            params=params,
            basis_count=basis_count,
            message_len=int(doc["message_len"]),
            key_generators=tuple(gens),
            encoder_kind=EncoderKind(doc["encoder_kind"]),
            aux=doc.get("aux", {}),
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "Scheme":
        return cls.from_dict(json.loads(text))

    def with_key_entry(self, receiver: int, row: int, col: int, value: int) -> "Scheme":
        """Copy of the scheme with one key-generator entry overwritten.

        The encoder constants in ``aux`` are kept, so this models a receiver
        handed a wrong key while the transmitter keeps the original design.
        """
        gens = list(self.key_generators)
        gens[receiver - 1] = gens[receiver - 1].with_entry(row, col, value)
        out = replace(self, key_generators=tuple(gens))
        return out

    def __repr__(self) -> str:
        N, K, p = self.params.N, self.params.K, self.params.p
        return (
            f"Scheme({self.encoder_kind.value}, N={N}, K={K}, p={p}, "
            f"alpha={self.alpha}, beta={self.beta})"
        )


def _relabel(Q: Qualified, relabel: Sequence[int]) -> Qualified:
    return tuple(sorted(relabel[q - 1] for q in Q))


# ----------------------------------------------------------------------------
# builders


def _check_points(params: SchemeParams, points: Sequence | None, allow_infinity: bool) -> list:
    K, p = params.K, params.p
    if points is None:
        if allow_infinity and K == p + 1:
            # 0, infinity, then the remaining nonzero elements
            return [0, None] + list(range(1, p))
        if p < K:
            raise SchemeError(f"p={p} < K={K}: not enough distinct evaluation points")
        return [v % p for v in range(1, K + 1)]
    pts = [normalize_point(v, p) for v in points]
    if len(pts) != K or len(set(pts)) != K:
        raise SchemeError(f"need {K} distinct evaluation points mod {p}, got {list(points)}")
    if not allow_infinity and None in pts:
        raise SchemeError("the point at infinity is not allowed here")
    return pts


def build_min_bandwidth_scheme(params: SchemeParams, points: Sequence[int] | None = None) -> Scheme:
    """Banded key generators; any N receivers share one key direction.

    Receiver k holds the N x (N+1) matrix with rows ``[.., 1, v_k, ..]``.
    For qualified set Q the common direction is
    ``v_Q = [e_0, e_1, ..., e_N]`` of the points ``{v_q : q in Q}``.
    Achieves ``(alpha, beta) = (N, 1)``.
    """
    N, p = params.N, params.p
    pts = _check_points(params, points, allow_infinity=False)
    gens = []
    for v in pts:
        g = np.zeros((N, N + 1), dtype=np.int64)
        for i in range(N):
            g[i, i] = 1
            g[i, i + 1] = v
        gens.append(FieldMatrix(g, p))
    return Scheme(
        params=params,
        basis_count=N + 1,
        message_len=1,
        key_generators=tuple(gens),
        encoder_kind=EncoderKind.MIN_BANDWIDTH,
        aux={"points": pts},
    )


def build_min_storage_scheme(params: SchemeParams, points: Sequence | None = None) -> Scheme:
    """One key symbol per receiver, from the rows of an MDS Vandermonde matrix.

    If ``K - N + 1 <= N`` the message is precoded along the null space of
    the eavesdroppers' rows (``K - N + 1`` symbols broadcast); otherwise
    each qualified receiver gets ``W + Z_q`` (``N`` symbols).

    ``points`` may contain ``None`` for the point at infinity, which lets
    ``K = p + 1`` receivers share GF(p).
    """
    N, K, p = params.N, params.K, params.p
    pts = _check_points(params, points, allow_infinity=True)
    null_space_case = K - N + 1 <= N
    width = K - N + 1 if null_space_case else N + 1
    V = vandermonde(K, width, p, points=pts)
    gens = tuple(V.row(k) for k in range(K))
    aux: dict = {"points": pts}
    if null_space_case:
        kind = EncoderKind.MIN_STORAGE_NULL_SPACE
        precoders = {}
        for Q in combinations(range(1, K + 1), N):
            outside = [k - 1 for k in range(1, K + 1) if k not in Q]
            ns = right_null_space(V.take_rows(outside))
            if ns.cols != 1:
                raise SchemeError(f"null space for Q={Q} has dimension {ns.cols}, expected 1")
            proj = mat_mul(V.take_rows([q - 1 for q in Q]), ns)
            if not proj.data.all():
                raise SchemeError(f"precoder for Q={Q} misses a qualified key")
            precoders[qualified_key(Q)] = [row[0] for row in ns.tolist()]
        aux["precoders"] = precoders
    else:
        kind = EncoderKind.MIN_STORAGE_REPEAT
    return Scheme(
        params=params,
        basis_count=width,
        message_len=1,
        key_generators=gens,
        encoder_kind=kind,
        aux=aux,
    )


def build_independent_keys_scheme(params: SchemeParams) -> Scheme:
    """Baseline ``Z_k = s_k``; send ``W + s_q`` for every qualified q."""
    K, p = params.K, params.p
    gens = tuple(FieldMatrix([_unit(k, K)], p) for k in range(K))
    return Scheme(params, K, 1, gens, EncoderKind.INDEPENDENT_KEYS, {})


def build_combinatorial_scheme(params: SchemeParams) -> Scheme:
    """Baseline: an independent key for every N-subset, held by its members."""
    N, K, p = params.N, params.K, params.p
    subsets = list(combinations(range(1, K + 1), N))
    n = len(subsets)
    gens = []
    for k in range(1, K + 1):
        rows = [_unit(i, n) for i, T in enumerate(subsets) if k in T]
        gens.append(FieldMatrix(rows, p))
    return Scheme(params, n, 1, tuple(gens), EncoderKind.COMBINATORIAL_SHARED, {})


def build_n3k5_scheme(p: int = 3) -> Scheme:
    """Scalar scheme for N=3, K=5 with ``Z_5 = s_1 + s_2``.

    Q = {1,2,5} needs two broadcast symbols, the other nine sets three,
    giving average bandwidth 29/10 at alpha = 1.
    """
    if p < 3:
        raise SchemeError("the N=3, K=5 scheme needs p >= 3")
    params = SchemeParams(3, 5, p)
    rows = [_unit(i, 4) for i in range(4)] + [[1, 1, 0, 0]]
    gens = tuple(FieldMatrix([r], p) for r in rows)
    return Scheme(params, 4, 1, gens, EncoderKind.N3K5, {})


def build_n2k4_joint_scheme(p: int = 3) -> Scheme:
    """N=2, K=4 scheme at (alpha, beta) = (1, 2) with joint key entropy 2.5 L_W."""
    params = SchemeParams(2, 4, p)
    keys = {
        1: [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]],
        2: [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0]],
        3: [[0, 0, 0, 0, 1], [1, 0, 1, 0, 0]],
        4: [[0, 1, 0, 1, 0], [1, 1, 0, 0, 1]],
    }
    gens = tuple(FieldMatrix(keys[k], p) for k in range(1, 5))
    return Scheme(params, 5, 2, gens, EncoderKind.N2K4_JOINT, {})


def _composite_generators(blocks, K: int) -> tuple[FieldMatrix, ...]:
    return tuple(
        block_diag([base.key_generators[lab[k - 1] - 1] for base, lab in blocks])
        for k in range(1, K + 1)
    )


def symmetrize(scheme: Scheme) -> Scheme:
    """Concatenate the scheme over all K! relabelings of the receivers.

    Message, key and signal lengths all scale by K!; afterwards every
    qualified set sees the average of the original per-set bandwidths.
    """
    K = scheme.params.K
    perms = list(permutations(range(1, K + 1)))
    blocks = [(scheme, perm) for perm in perms]
    n = len(perms)
    return Scheme(
        params=scheme.params,
        basis_count=n * scheme.basis_count,
        message_len=n * scheme.message_len,
        key_generators=_composite_generators(blocks, K),
        encoder_kind=EncoderKind.SYMMETRIZED,
        aux={"base": scheme.to_dict()},
    )


def space_share(parts: Sequence[tuple[Scheme, int]]) -> Scheme:
    """Run ``copies`` independent instances of each scheme side by side."""
    parts = [(s, int(c)) for s, c in parts if c > 0]
    if not parts:
        raise SchemeError("space_share needs at least one part with copies > 0")
    params = parts[0][0].params
    for s, _ in parts:
        if s.params != params:
            raise SchemeError(f"cannot space-share {s.params} with {params}")
    ident = tuple(range(1, params.K + 1))
    blocks = [(s, ident) for s, c in parts for _ in range(c)]
    return Scheme(
        params=params,
        basis_count=sum(s.basis_count * c for s, c in parts),
        message_len=sum(s.message_len * c for s, c in parts),
        key_generators=_composite_generators(blocks, params.K),
        encoder_kind=EncoderKind.SPACE_SHARED,
        aux={"parts": [{"scheme": s.to_dict(), "copies": c} for s, c in parts]},
    )


# ----------------------------------------------------------------------------
# encoders: each returns the SignalMap of X_Q


def _min_bandwidth_map(scheme: Scheme, Q: Qualified) -> SignalMap:
    p, N = scheme.p, scheme.params.N
    pts = [scheme.aux["points"][q - 1] for q in Q]
    v_Q = [elementary_symmetric(pts, n, p) for n in range(N + 1)]
    return SignalMap(FieldMatrix([[1]], p), FieldMatrix([v_Q], p))


def _null_space_map(scheme: Scheme, Q: Qualified) -> SignalMap:
    p, width = scheme.p, scheme.basis_count
    v_W = scheme.aux["precoders"][qualified_key(Q)]
    return SignalMap(FieldMatrix.column(v_W, p), FieldMatrix.identity(width, p))


def _repeat_map(scheme: Scheme, Q: Qualified) -> SignalMap:
    # row q is W + Z_q
    p = scheme.p
    ones = FieldMatrix(np.ones((len(Q), 1), dtype=np.int64), p)
    return SignalMap(ones, vstack([scheme.key_generators[q - 1] for q in Q]))


def _combinatorial_map(scheme: Scheme, Q: Qualified) -> SignalMap:
    subsets = list(combinations(range(1, scheme.params.K + 1), scheme.params.N))
    row = _unit(subsets.index(Q), scheme.basis_count)
    return SignalMap(FieldMatrix([[1]], scheme.p), FieldMatrix([row], scheme.p))


def _n3k5_map(scheme: Scheme, Q: Qualified) -> SignalMap:
    p = scheme.p
    s = {i: _unit(i - 1, 4) for i in range(1, 5)}
    z = dict(s)
    z[5] = [1, 1, 0, 0]
    qs = set(Q)
    if qs == {1, 2, 5}:
        rows = [(1, s[1]), (1, s[2])]
    elif {1, 2} <= qs:
        (i,) = qs - {1, 2}
        rows = [(1, s[1]), (-1, s[2]), (1, s[i])]
    elif {3, 4} <= qs:
        (j,) = qs - {3, 4}
        rows = [(1, z[j]), (1, s[3]), (1, s[4])]
    elif {1, 5} <= qs:
        (i,) = qs - {1, 5}
        rows = [(1, s[1]), (0, s[2]), (1, s[i])]
    else:
        (i,) = qs - {2, 5}
        rows = [(0, s[1]), (1, s[2]), (1, s[i])]
    msg = FieldMatrix([[w] for w, _ in rows], p)
    keys = FieldMatrix([k for _, k in rows], p)
    return SignalMap(msg, keys)


# rows: (W_1, W_2 | s_1 .. s_5)
_N2K4_TABLE = {
    (1, 2): [[1, 0, 1, 0, 0, 0, 0], [0, 1, 0, 1, 0, 0, 0], [-1, 0, 0, 0, 1, 0, 0], [0, -1, 0, 0, 0, 1, 0]],
    (1, 3): [[1, 0, 1, 0, 0, 0, 0], [0, 1, 0, 1, 0, 0, 0], [-1, -1, 0, 0, 0, 0, 1], [1, 0, 1, 0, 1, 0, 0]],
    (1, 4): [[1, 0, 1, 0, 0, 0, 0], [0, 1, 0, 1, 0, 0, 0], [0, 1, 0, 1, 0, 1, 0], [1, 1, 1, 1, 0, 0, 1]],
    (2, 3): [[1, 0, 0, 0, 1, 0, 0], [0, 1, 0, 0, 0, 1, 0], [0, 1, 0, 0, 0, 0, 1], [1, 0, 1, 0, 1, 0, 0]],
    (2, 4): [[1, 0, 0, 0, 1, 0, 0], [0, 1, 0, 0, 0, 1, 0], [0, 1, 0, 1, 0, 1, 0], [-1, 0, 1, 1, 0, 0, 1]],
    (3, 4): [[1, 0, 0, 0, 0, 0, 1], [0, 1, 1, 0, 1, 0, 0], [0, -1, 0, 1, 0, 1, 0], [1, 0, 1, 1, 0, 0, 1]],
}


def _n2k4_map(scheme: Scheme, Q: Qualified) -> SignalMap:
    table = FieldMatrix(_N2K4_TABLE[Q], scheme.p)
    return SignalMap(table.take_cols([0, 1]), table.take_cols(range(2, 7)))


def _composite_map(scheme: Scheme, Q: Qualified) -> SignalMap:
    maps = [base.signal_map(_relabel(Q, lab)) for base, lab in scheme.blocks]
    return SignalMap(block_diag([m.message for m in maps]), block_diag([m.keys for m in maps]))


_ENCODERS = {
    EncoderKind.MIN_BANDWIDTH: _min_bandwidth_map,
    EncoderKind.MIN_STORAGE_NULL_SPACE: _null_space_map,
    EncoderKind.MIN_STORAGE_REPEAT: _repeat_map,
    EncoderKind.INDEPENDENT_KEYS: _repeat_map,
    EncoderKind.COMBINATORIAL_SHARED: _combinatorial_map,
    EncoderKind.N3K5: _n3k5_map,
    EncoderKind.N2K4_JOINT: _n2k4_map,
    EncoderKind.SYMMETRIZED: _composite_map,
    EncoderKind.SPACE_SHARED: _composite_map,
}


# ----------------------------------------------------------------------------
# execution


def _as_vector(values, n: int, p: int, what: str) -> np.ndarray:
    if isinstance(values, (int, np.integer)):
        values = [values]
    vec = np.array([int(v) % p for v in values], dtype=np.int64)
    if vec.size != n:
        raise SchemeError(f"{what} must have {n} symbols, got {vec.size}")
    return vec


def derive_material(scheme: Scheme, basis: Sequence[int]) -> KeyMaterial:
    s = _as_vector(basis, scheme.basis_count, scheme.p, "basis")
    keys = tuple(tuple(int(x) for x in (g.data @ s) % scheme.p) for g in scheme.key_generators)
    return KeyMaterial(tuple(int(x) for x in s), keys)


def encode(scheme: Scheme, material: KeyMaterial, Q: Iterable[int], W) -> BroadcastSignal:
    Q = scheme.check_qualified(Q)
    p = scheme.p
    w = _as_vector(W, scheme.message_len, p, "message")
    s = np.array(material.basis, dtype=np.int64)
    sm = scheme.signal_map(Q)
    x = (sm.message.data @ w + sm.keys.data @ s) % p
    return BroadcastSignal(Q, tuple(int(v) for v in x))


def min_bandwidth_encode(scheme: Scheme, material: KeyMaterial, Q, W) -> BroadcastSignal:
    """``X_Q = W + v_Q . s`` (one symbol)."""
    if scheme.encoder_kind is not EncoderKind.MIN_BANDWIDTH:
        raise SchemeError(f"not a min-bandwidth scheme: {scheme.encoder_kind.value}")
    return encode(scheme, material, Q, W)


def min_storage_encode(scheme: Scheme, material: KeyMaterial, Q, W) -> BroadcastSignal:
    """Null-space precoded ``v_W W + s`` or repeated ``W + Z_q`` rows."""
    if scheme.encoder_kind not in (EncoderKind.MIN_STORAGE_NULL_SPACE, EncoderKind.MIN_STORAGE_REPEAT):
        raise SchemeError(f"not a min-storage scheme: {scheme.encoder_kind.value}")
    return encode(scheme, material, Q, W)


def min_bandwidth_combination(scheme: Scheme, Q: Iterable[int], receiver: int) -> list[int]:
    """Coefficients c with ``c . G_q = v_Q``: e_n of the other receivers' points."""
    Q = scheme.check_qualified(Q)
    others = [scheme.aux["points"][i - 1] for i in Q if i != receiver]
    return [elementary_symmetric(others, n, scheme.p) for n in range(scheme.params.N)]


def decoding_map(scheme: Scheme, Q: Iterable[int], receiver: int, rows: Sequence[int] | None = None):
    """Matrices ``(D, E)`` with ``W = D X + E Z_q`` for every realization.

    ``rows`` restricts which signal rows the receiver may use.  Raises
    :class:`DecodingError` when no such linear decoder exists.
    """
    Q = scheme.check_qualified(Q)
    sm = scheme.signal_map(Q)
    A, B = sm.message, sm.keys
    if rows is not None:
        A, B = A.take_rows(rows), B.take_rows(rows)
    G = scheme.key_generators[receiver - 1]
    L, b, p = scheme.message_len, scheme.basis_count, scheme.p
    # [D E] [[B, A], [G, 0]] = [0, I]
    M = vstack([hstack([B, A]), hstack([G, FieldMatrix.zeros(G.rows, L, p)])])
    target = hstack([FieldMatrix.zeros(L, b, p), FieldMatrix.identity(L, p)])
    sol = solve(M.T, target.T)
    if sol is None:
        raise DecodingError(f"receiver {receiver} cannot decode the signal for Q={list(Q)}")
    R = sol.T
    return R.take_cols(range(A.rows)), R.take_cols(range(A.rows, A.rows + G.rows))


def decode(scheme: Scheme, receiver: int, key: Sequence[int], signal: BroadcastSignal) -> tuple[int, ...]:
    """Recover W at a qualified receiver from its key and the broadcast."""
    Q = scheme.check_qualified(signal.qualified)
    if receiver not in Q:
        raise NotQualifiedError(f"receiver {receiver} is not in the qualified set {list(Q)}")
    p = scheme.p
    x = _as_vector(signal.symbols, scheme.signal_len(Q), p, "signal")
    z = _as_vector(key, scheme.key_len, p, "key")
    kind = scheme.encoder_kind

    if kind is EncoderKind.MIN_BANDWIDTH:
        c = np.array(min_bandwidth_combination(scheme, Q, receiver), dtype=np.int64)
        return (int((x[0] - c @ z) % p),)

    if kind is EncoderKind.MIN_STORAGE_NULL_SPACE:
        row = scheme.key_generators[receiver - 1].data[0]
        v_W = np.array(scheme.aux["precoders"][qualified_key(Q)], dtype=np.int64)
        gain = int(row @ v_W % p)
        if gain == 0:
            raise DecodingError(f"receiver {receiver}'s key is orthogonal to the precoder for Q={list(Q)}")
        projected = int(row @ x % p)
        return (int((projected - z[0]) * inverse(gain, p) % p),)

    if kind in (EncoderKind.SYMMETRIZED, EncoderKind.SPACE_SHARED):
        out: list[int] = []
        xo = zo = 0
        for base, lab in scheme.blocks:
            sub_Q = _relabel(Q, lab)
            n_x = base.signal_len(sub_Q)
            sub = BroadcastSignal(sub_Q, tuple(int(v) for v in x[xo : xo + n_x]))
            out.extend(decode(base, lab[receiver - 1], z[zo : zo + base.key_len], sub))
            xo += n_x
            zo += base.key_len
        return tuple(out)

    rows = None
    if kind is EncoderKind.N2K4_JOINT:
        # first qualified receiver reads rows 1-2, second reads rows 3-4
        rows = [0, 1] if receiver == Q[0] else [2, 3]
        x = x[rows]
    D, E = decoding_map(scheme, Q, receiver, rows)
    w = (D.data @ x + E.data @ z) % p
    return tuple(int(v) for v in w)


BUILDERS = {
    "min-bandwidth": lambda N, K, p: build_min_bandwidth_scheme(SchemeParams(N, K, p)),
    "min-storage": lambda N, K, p: build_min_storage_scheme(SchemeParams(N, K, p)),
    "independent": lambda N, K, p: build_independent_keys_scheme(SchemeParams(N, K, p)),
    "combinatorial": lambda N, K, p: build_combinatorial_scheme(SchemeParams(N, K, p)),
    "n3k5": lambda N, K, p: build_n3k5_scheme(p),
    "n2k4-joint": lambda N, K, p: build_n2k4_joint_scheme(p),
}


def expected_corner(kind: str, N: int, K: int) -> tuple[Fraction, Fraction]:
    """(alpha, beta) the named construction is designed to reach."""
    return {
        "min-bandwidth": (Fraction(N), Fraction(1)),
        "min-storage": (Fraction(1), Fraction(min(N, K - N + 1))),
        "independent": (Fraction(1), Fraction(N)),
        "combinatorial": (Fraction(comb(K - 1, N - 1)), Fraction(1)),
    }[kind]


__all__ = [
    "BroadcastSignal",
    "DecodingError",
    "EncoderKind",
    "KeyMaterial",
    "NotQualifiedError",
    "Scheme",
    "SchemeError",
    "SchemeParams",
    "SignalMap",
    "build_combinatorial_scheme",
    "build_independent_keys_scheme",
    "build_min_bandwidth_scheme",
    "build_min_storage_scheme",
    "build_n2k4_joint_scheme",
    "build_n3k5_scheme",
    "decode",
    "decoding_map",
    "derive_material",
    "encode",
    "min_bandwidth_combination",
    "min_bandwidth_encode",
    "min_storage_encode",
    "space_share",
    "symmetrize",
]
