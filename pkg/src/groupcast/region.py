"""Converse bounds on concrete schemes and (alpha, beta) region membership.

The engine knows the exact region only for N = 1 and N = 2.  For larger N
it answers Achievable inside the time-sharing hull of constructible corner
points, Infeasible when a proven bound is violated, and Unknown otherwise.
All comparisons are on Fractions.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm
from typing import Iterable, Sequence

from .entropy import DEFAULT_BUDGET, entropy, key_name, scheme_system
from .field import next_prime
from .schemes import (
    Scheme,
    SchemeParams,
    build_combinatorial_scheme,
    build_independent_keys_scheme,
    build_min_bandwidth_scheme,
    build_min_storage_scheme,
    build_n3k5_scheme,
    space_share,
    symmetrize,
)


def as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


# ----------------------------------------------------------------------------
# bounds evaluated on a scheme


@dataclass(frozen=True)
class KeyBoundReport:
    message_len: int
    min_conditional_entropy: Fraction
    binding_pair: tuple[int, int]  # (q, e) attaining min H(Z_q | Z_e)

    @property
    def satisfied(self) -> bool:
        return self.message_len <= self.min_conditional_entropy


def key_rate_bound(scheme: Scheme, method: str = "rank", budget: int = DEFAULT_BUDGET) -> KeyBoundReport:
    """Check ``L_W <= H(Z_q | Z_e)`` over all ordered pairs ``q != e``."""
    system = scheme_system(scheme)
    K = scheme.params.K
    single = {k: entropy(system, [key_name(k)], method, budget) for k in range(1, K + 1)}
    best = None
    for q in range(1, K + 1):
        for e in range(1, K + 1):
            if q == e:
                continue
            joint = entropy(system, [key_name(q), key_name(e)], method, budget)
            value = joint - single[e]
            if best is None or value < best[0]:
                best = (value, (q, e))
    return KeyBoundReport(scheme.message_len, best[0], best[1])


def bandwidth_bound(
    scheme: Scheme, Q: Iterable[int], method: str = "rank", budget: int = DEFAULT_BUDGET
) -> Fraction:
    """Lower bound on the broadcast length for any qualified set containing Q.

    ``|Q| L_W - (sum_i H(Z_qi) - H(Z_Q))``, never below ``L_W``.
    """
    Q = sorted(set(int(q) for q in Q))
    if not 1 <= len(Q) <= scheme.params.N:
        raise ValueError(f"need 1 <= |Q| <= N={scheme.params.N}, got {Q}")
    system = scheme_system(scheme)
    L = scheme.message_len
    singles = sum(entropy(system, [key_name(q)], method, budget) for q in Q)
    joint = entropy(system, [key_name(q) for q in Q], method, budget)
    return max(Fraction(L), len(Q) * L - (singles - joint))


# ----------------------------------------------------------------------------
# region membership


class Status(str, Enum):
    ACHIEVABLE = "achievable"
    INFEASIBLE = "infeasible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class RegionQuery:
    N: int
    K: int
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        if not 1 <= self.N <= self.K - 1:
            raise ValueError(f"need 1 <= N <= K-1, got N={self.N}, K={self.K}")
        object.__setattr__(self, "alpha", as_fraction(self.alpha))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")


@dataclass(frozen=True)
class Corner:
    alpha: Fraction
    beta: Fraction
    scheme: str


@dataclass(frozen=True)
class RegionVerdict:
    status: Status
    witness: str
    # for Achievable: corner points and their message shares
    mix: tuple[tuple[Corner, Fraction], ...] = ()


def corner_points(N: int, K: int) -> list[Corner]:
    """Constructible (alpha, beta) pairs, best-known first, duplicates dropped."""
    if not 1 <= N <= K - 1:
        raise ValueError(f"need 1 <= N <= K-1, got N={N}, K={K}")
    cands = [
        Corner(Fraction(N), Fraction(1), "min-bandwidth"),
        Corner(Fraction(1), Fraction(min(N, K - N + 1)), "min-storage"),
    ]
    if (N, K) == (3, 5):
        cands.append(Corner(Fraction(1), Fraction(29, 10), "n3k5-symmetrized"))
    cands += [
        Corner(Fraction(comb(K - 1, N - 1)), Fraction(1), "combinatorial"),
        Corner(Fraction(1), Fraction(N), "independent"),
    ]
    seen = set()
    out = []
    for c in cands:
        if (c.alpha, c.beta) not in seen:
            seen.add((c.alpha, c.beta))
            out.append(c)
    return out


def min_beta(N: int, K: int, alpha) -> tuple[Fraction | None, tuple]:
    """Smallest beta reachable by time-sharing corner points at storage <= alpha."""
    alpha = as_fraction(alpha)
    corners = corner_points(N, K)
    best: tuple[Fraction, tuple] | None = None

    def offer(beta, mix):
        nonlocal best
        if best is None or beta < best[0] or (beta == best[0] and len(mix) < len(best[1])):
            best = (beta, mix)

    for c in corners:
        if c.alpha <= alpha:
            offer(c.beta, ((c, Fraction(1)),))
    for a, b in combinations(corners, 2):
        if a.alpha > b.alpha:
            a, b = b, a
        if a.alpha <= alpha < b.alpha:
            lam = (b.alpha - alpha) / (b.alpha - a.alpha)
            offer(lam * a.beta + (1 - lam) * b.beta, ((a, lam), (b, 1 - lam)))
    if best is None:
        return None, ()
    return best


def _describe_mix(mix) -> str:
    if len(mix) == 1:
        c = mix[0][0]
        return f"{c.scheme} scheme ({c.alpha}, {c.beta})"
    return "time-sharing " + " + ".join(f"{w} x {c.scheme} ({c.alpha}, {c.beta})" for c, w in mix)


def region_membership(query: RegionQuery) -> RegionVerdict:
    """Tri-state membership of (alpha, beta) in the capacity region for (N, K).

    Infeasibility tests run first, then dominance over the time-sharing
    hull of the corner points; anything left is Unknown.
    """
    N, K, a, b = query.N, query.K, query.alpha, query.beta
    I, A, U = Status.INFEASIBLE, Status.ACHIEVABLE, Status.UNKNOWN
    if a < 1:
        return RegionVerdict(I, "key storage bound: alpha >= 1")
    if b < 1:
        return RegionVerdict(I, "broadcast bound: beta >= 1")
    if N >= 2 and a + b < 3:
        return RegionVerdict(I, "pairwise key bound: alpha + beta >= 3")
    if b == 1 and a < N:
        return RegionVerdict(I, f"one-symbol broadcast needs alpha >= N = {N}")
    if (N, K) == (3, 5) and a == 1 and b < Fraction(5, 2):
        return RegionVerdict(I, "N=3, K=5 joint key bound: beta >= 2.5 at alpha = 1")

    best, mix = min_beta(N, K, a)
    if best is not None and b >= best:
        if N == 1:
            prefix = "N=1 region alpha >= 1, beta >= 1"
        elif N == 2:
            prefix = "N=2 region alpha + beta >= 3"
        else:
            prefix = "achievable"
        return RegionVerdict(A, f"{prefix}: {_describe_mix(mix)}", mix)

    if (N, K) == (3, 5) and a == 1:
        return RegionVerdict(U, "N=3, K=5 open gap: 2.5 <= beta < 2.9 at alpha = 1")
    return RegionVerdict(U, f"open for N={N}, K={K}: outside the known achievable hull")


# ----------------------------------------------------------------------------
# witness construction


def corner_scheme(corner: Corner, N: int, K: int, p: int) -> Scheme:
    params = SchemeParams(N, K, p)
    if corner.scheme == "min-bandwidth":
        return build_min_bandwidth_scheme(params)
    if corner.scheme == "min-storage":
        return build_min_storage_scheme(params)
    if corner.scheme == "combinatorial":
        return build_combinatorial_scheme(params)
    if corner.scheme == "independent":
        return build_independent_keys_scheme(params)
    if corner.scheme == "n3k5-symmetrized":
        return symmetrize(build_n3k5_scheme(p))
    raise ValueError(f"unknown corner scheme {corner.scheme!r}")


def witness_scheme(verdict: RegionVerdict, N: int, K: int, p: int | None = None) -> Scheme:
    """Build the scheme behind an Achievable verdict.

    Corner schemes are space-shared so that corner i carries a share
    ``w_i`` of the message symbols; the result reaches exactly the hull
    point the verdict used.
    """
    if verdict.status is not Status.ACHIEVABLE:
        raise ValueError(f"no witness for a {verdict.status.value} verdict")
    p = p or next_prime(K)
    schemes = [corner_scheme(c, N, K, p) for c, _ in verdict.mix]
    if len(schemes) == 1:
        return schemes[0]
    ratios = [w / s.message_len for (_, w), s in zip(verdict.mix, schemes)]
    scale = lcm(*(r.denominator for r in ratios))
    copies = [int(r * scale) for r in ratios]
    g = gcd(*copies)
    return space_share([(s, c // g) for s, c in zip(schemes, copies)])


# ----------------------------------------------------------------------------
# scans and export


@dataclass(frozen=True)
class RegionRow:
    alpha: Fraction
    beta: Fraction
    status: Status
    witness: str


def rational_grid(start, stop, step) -> list[Fraction]:
    """Inclusive arithmetic grid on exact rationals."""
    start, stop, step = as_fraction(start), as_fraction(stop), as_fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    out = []
    x = start
    while x <= stop:
        out.append(x)
        x += step
    return out


def region_scan(N: int, K: int, alphas: Sequence, betas: Sequence) -> list[RegionRow]:
    rows = []
    for a in alphas:
        for b in betas:
            v = region_membership(RegionQuery(N, K, a, b))
            rows.append(RegionRow(as_fraction(a), as_fraction(b), v.status, v.witness))
    return rows


def format_rational(x: Fraction) -> str:
    """Plain decimal when the expansion terminates, else ``num/den``."""
    d = x.denominator
    for f in (2, 5):
        while d % f == 0:
            d //= f
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    return format(Decimal(x.numerator) / Decimal(x.denominator), "f")


CSV_COLUMNS = ("alpha", "beta", "status", "witness")


def rows_to_csv(rows: Iterable[RegionRow], fh=None) -> str | None:
    own = fh is None
    fh = fh or io.StringIO()
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([format_rational(r.alpha), format_rational(r.beta), r.status.value, r.witness])
    return fh.getvalue() if own else None


def rows_to_json(rows: Iterable[RegionRow]) -> str:
    return json.dumps(
        [
            {
                "alpha": format_rational(r.alpha),
                "beta": format_rational(r.beta),
                "status": r.status.value,
                "witness": r.witness,
            }
            for r in rows
        ],
        indent=1,
    )
