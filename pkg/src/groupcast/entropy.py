"""Exact entropy bookkeeping for the random variables a scheme induces.

Entropies are in p-ary units.  Two independent routes are provided:

``method="enumerate"``
    walk every realization of (basis, message) in lexicographic order,
    count joint outcomes and sum ``(c/T) log_p(T/c)``.
``method="rank"``
    for linear variables the entropy of a stacked image is the rank of
    its coefficient matrix.

The verifiers below run one route each and produce the same report type,
so their outputs can be compared value by value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import log2
from typing import Callable, Iterable, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .field import FieldMatrix, mat_rank, vstack
from .schemes import Qualified, Scheme, qualified_key

DEFAULT_BUDGET = 10**8
CHUNK = 1 << 20

Variable = Union[FieldMatrix, Callable[[np.ndarray], np.ndarray]]


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(
            f"exhaustive enumeration needs {required} outcomes, budget is {budget}"
        )
        self.required = required
        self.budget = budget


class ExactnessError(ArithmeticError):
    """A linear system produced a count that is not a power of p."""


@dataclass
class RandomSystem:
    """Uniform i.i.d. inputs ``(s, W)`` and named functions of them.

    A variable is either a FieldMatrix of coefficients over the input
    vector ``(s_1..s_b, W_1..W_L)`` or a callable mapping a ``(T, b+L)``
    array of realizations to a ``(T, m)`` array of symbols.
    """

    p: int
    basis_count: int
    message_len: int
    variables: dict[str, Variable] = field(default_factory=dict)

    @property
    def n_inputs(self) -> int:
        return self.basis_count + self.message_len

    @property
    def outcome_count(self) -> int:
        return self.p**self.n_inputs

    @property
    def linear(self) -> bool:
        return all(isinstance(v, FieldMatrix) for v in self.variables.values())

    def _lookup(self, names: Sequence[str]) -> list[Variable]:
        if not names:
            raise ValueError("need at least one variable")
        missing = [n for n in names if n not in self.variables]
        if missing:
            raise KeyError(f"unknown variable(s): {missing}")
        return [self.variables[n] for n in names]

    def coefficients(self, names: Sequence[str]) -> FieldMatrix:
        vs = self._lookup(names)
        if not all(isinstance(v, FieldMatrix) for v in vs):
            raise TypeError("rank entropy needs linear (coefficient matrix) variables")
        return vstack(vs, cols=self.n_inputs, p=self.p)


def key_name(k: int) -> str:
    return f"Z{k}"


def signal_name(Q: Iterable[int]) -> str:
    return "X" + qualified_key(Q)


def scheme_system(scheme: Scheme) -> RandomSystem:
    """Variables ``W``, ``Z1..ZK`` and ``X<Q>`` (e.g. ``X1,2``) of a scheme."""
    p, b, L = scheme.p, scheme.basis_count, scheme.message_len
    variables: dict[str, Variable] = {}
    variables["W"] = FieldMatrix(np.hstack([np.zeros((L, b), dtype=np.int64), np.eye(L, dtype=np.int64)]), p)
    for k, g in enumerate(scheme.key_generators, 1):
        pad = np.zeros((g.rows, L), dtype=np.int64)
        variables[key_name(k)] = FieldMatrix(np.hstack([g.data, pad]), p)
    for Q in scheme.qualified_sets():
        sm = scheme.signal_map(Q)
        variables[signal_name(Q)] = FieldMatrix(np.hstack([sm.keys.data, sm.message.data]), p)
    return RandomSystem(p, b, L, variables)


# ----------------------------------------------------------------------------
# enumeration route


@dataclass
class DistributionTable:
    """Exact counts of joint outcomes; ``sum(counts) == total``."""

    counts: dict
    total: int

    def probabilities(self) -> dict:
        return {k: Fraction(c, self.total) for k, c in self.counts.items()}

    def entropy(self, p: int, require_exact: bool = False) -> Fraction:
        return entropy_from_counts(self.counts.values(), self.total, p, require_exact)


def _log_power(ratio: Fraction, p: int) -> int | None:
    """k with ratio == p**k, or None."""
    if ratio.denominator != 1:
        return None
    n, k = ratio.numerator, 0
    while n % p == 0:
        n //= p
        k += 1
    return k if n == 1 else None


def entropy_from_counts(counts: Iterable[int], total: int, p: int, require_exact: bool = False) -> Fraction:
    """``sum (c/T) log_p(T/c)``.

    Exact whenever every ``T/c`` is a power of p.  Otherwise the value is a
    60-digit decimal approximation converted to a Fraction (error far below
    1e-12), unless ``require_exact`` is set, in which case it raises.
    """
    hist: dict[int, int] = {}
    for c in counts:
        hist[int(c)] = hist.get(int(c), 0) + 1
    if sum(c * n for c, n in hist.items()) != total:
        raise ValueError("counts do not sum to the total")
    exact = Fraction(0)
    inexact = []
    for c, n in hist.items():
        k = _log_power(Fraction(total, c), p)
        if k is None:
            inexact.append((c, n))
        else:
            exact += Fraction(n * c * k, total)
    if not inexact:
        return exact
    if require_exact:
        c = inexact[0][0]
        raise ExactnessError(f"count {c} of {total} is not a p-power fraction (p={p})")
    with localcontext() as ctx:
        ctx.prec = 60
        log_p = Decimal(p).ln()
        acc = Decimal(0)
        for c, n in inexact:
            acc += Decimal(n * c) / Decimal(total) * (Decimal(total) / Decimal(c)).ln() / log_p
    return exact + Fraction(acc)


def realizations(start: int, stop: int, n: int, p: int) -> np.ndarray:
    # lexicographic: the first input is the most significant digit
    idx = np.arange(start, stop, dtype=np.int64)
    powers = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % p


def _evaluate(var: Variable, outcomes: np.ndarray, p: int) -> np.ndarray:
    if isinstance(var, FieldMatrix):
        return (outcomes @ var.data.T) % p
    out = np.asarray(var(outcomes), dtype=np.int64)
    if out.ndim == 1:
        out = out[:, None]
    return out % p


def _count_rows(vals: np.ndarray, p: int) -> tuple[list, np.ndarray]:
    m = vals.shape[1]
    if m == 0:
        return [b""], np.array([vals.shape[0]])
    if m * log2(p) < 62:
        weights = p ** np.arange(m, dtype=np.int64)
        keys, counts = np.unique(vals @ weights, return_counts=True)
        return keys.tolist(), counts
    rows, counts = np.unique(vals, axis=0, return_counts=True)
    return [r.tobytes() for r in rows], counts


def joint_counts(
    system: RandomSystem,
    queries: Sequence[Sequence[str]],
    budget: int = DEFAULT_BUDGET,
    chunk: int = CHUNK,
) -> list[DistributionTable]:
    """One enumeration pass producing a count table per query.

    The outer loop runs over disjoint index ranges; per-range tables merge
    by adding counts, so ranges could be farmed out independently.
    """
    total = system.outcome_count
    if total > budget:
        raise BudgetExceeded(total, budget)
    for q in queries:
        system._lookup(list(q))
    names = sorted({n for q in queries for n in q})
    merged: list[dict] = [{} for _ in queries]
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        outcomes = realizations(start, stop, system.n_inputs, system.p)
        values = {n: _evaluate(system.variables[n], outcomes, system.p) for n in names}
        for qi, q in enumerate(queries):
            vals = np.hstack([values[n] for n in q]) if len(q) > 1 else values[q[0]]
            keys, counts = _count_rows(vals, system.p)
            table = merged[qi]
            if not table:
                table.update(zip(keys, counts.tolist()))
                continue
            for key, c in zip(keys, counts.tolist()):
                table[key] = table.get(key, 0) + c
    return [DistributionTable(t, total) for t in merged]


# ----------------------------------------------------------------------------
# rank route


def block_rank(m: FieldMatrix) -> int:
    """Rank, splitting block-diagonal structure into independent pieces first."""
    if m.rows * m.cols <= 4096:
        return mat_rank(m)
    r, c = np.nonzero(m.data)
    if r.size == 0:
        return 0
    n = m.rows + m.cols
    graph = coo_matrix((np.ones(r.size), (r, c + m.rows)), shape=(n, n))
    n_comp, labels = connected_components(graph, directed=False)
    row_lab, col_lab = labels[: m.rows], labels[m.rows :]
    total = 0
    for comp in np.unique(row_lab[np.unique(r)]):
        rows = np.flatnonzero(row_lab == comp)
        cols = np.flatnonzero(col_lab == comp)
        total += mat_rank(m.take_rows(rows).take_cols(cols))
    return total


# ----------------------------------------------------------------------------
# public entropy API


def entropy(system: RandomSystem, names: Sequence[str], method: str = "enumerate", budget: int = DEFAULT_BUDGET) -> Fraction:
    """Joint entropy H(names) in p-ary units."""
    names = list(names)
    if method == "rank":
        return Fraction(block_rank(system.coefficients(names)))
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    (table,) = joint_counts(system, [names], budget)
    return table.entropy(system.p, require_exact=system.linear)


def conditional_entropy(system, names, given, method="enumerate", budget=DEFAULT_BUDGET) -> Fraction:
    given = list(given)
    if not given:
        return entropy(system, names, method, budget)
    return entropy(system, list(names) + given, method, budget) - entropy(system, given, method, budget)


def mutual_information(
    system: RandomSystem,
    a: Sequence[str],
    b: Sequence[str],
    given: Sequence[str] | None = None,
    method: str = "enumerate",
    budget: int = DEFAULT_BUDGET,
) -> Fraction:
    """I(A; B | C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)."""
    a, b, c = list(a), list(b), list(given or [])

    def h(names):
        return entropy(system, names, method, budget) if names else Fraction(0)

    value = h(a + c) + h(b + c) - h(a + b + c) - h(c)
    if value < 0:
        if value > Fraction(-1, 10**12):
            return Fraction(0)
        raise ArithmeticError(f"negative mutual information {value}")
    return value


# ----------------------------------------------------------------------------
# scheme verification


@dataclass(frozen=True)
class CheckResult:
    qualified: Qualified
    receiver: int
    role: str  # "qualified" or "eavesdropper"
    value: Fraction

    @property
    def quantity(self) -> str:
        Q = qualified_key(self.qualified)
        if self.role == "qualified":
            return f"H(W | X{{{Q}}}, Z{self.receiver})"
        return f"I(W; X{{{Q}}}, Z{self.receiver})"

    @property
    def passed(self) -> bool:
        return self.value == 0


def _frac(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


@dataclass
class VerificationReport:
    kind: str
    N: int
    K: int
    p: int
    method: str
    message_len: int
    key_len: int
    checks: list[CheckResult]
    bandwidth: dict[Qualified, int]
    joint_key_entropy: Fraction

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.key_len, self.message_len)

    @property
    def beta(self) -> Fraction:
        return Fraction(max(self.bandwidth.values()), self.message_len)

    @property
    def beta_average(self) -> Fraction:
        return Fraction(sum(self.bandwidth.values()), len(self.bandwidth) * self.message_len)

    @property
    def correctness_passed(self) -> bool:
        return all(c.passed for c in self.checks if c.role == "qualified")

    @property
    def security_passed(self) -> bool:
        return all(c.passed for c in self.checks if c.role == "eavesdropper")

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def values(self) -> dict[tuple[Qualified, int], Fraction]:
        return {(c.qualified, c.receiver): c.value for c in self.checks}

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "N": self.N,
            "K": self.K,
            "p": self.p,
            "method": self.method,
            "passed": self.passed,
            "alpha": _frac(self.alpha),
            "beta": _frac(self.beta),
            "beta_average": _frac(self.beta_average),
            "message_len": self.message_len,
            "key_len": self.key_len,
            "joint_key_entropy": _frac(self.joint_key_entropy),
            "bandwidth": {qualified_key(Q): n for Q, n in self.bandwidth.items()},
            "checks": [
                {
                    "Q": list(c.qualified),
                    "receiver": c.receiver,
                    "role": c.role,
                    "quantity": c.quantity,
                    "value": _frac(c.value),
                    "passed": c.passed,
                }
                for c in self.checks
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def summary(self) -> str:
        bits = log2(self.p)
        lines = [
            f"scheme {self.kind} N={self.N} K={self.K} p={self.p} ({self.method})",
            f"alpha={self.alpha} beta={self.beta} beta_avg={self.beta_average}",
            f"joint key entropy={self.joint_key_entropy} ({float(self.joint_key_entropy) * bits:.3f} bits), "
            f"ratio={self.joint_key_entropy / self.message_len}",
        ]
        counts: dict[int, int] = {}
        for n in self.bandwidth.values():
            counts[n] = counts.get(n, 0) + 1
        lines.append("bandwidth: " + ", ".join(f"{n} symbols x {m} sets" for n, m in sorted(counts.items())))
        lines.append(f"correctness: {'pass' if self.correctness_passed else 'FAIL'}")
        lines.append(f"security: {'pass' if self.security_passed else 'FAIL'}")
        for c in self.failures():
            lines.append(f"  failed {c.quantity} = {c.value} ({float(c.value) * bits:.3f} bits)")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _check_plan(scheme: Scheme):
    W = ["W"]
    for Q in scheme.qualified_sets():
        X = signal_name(Q)
        for k in range(1, scheme.params.K + 1):
            yield Q, k, [X, key_name(k)], W + [X, key_name(k)]


def _report(scheme: Scheme, method: str, h) -> VerificationReport:
    H_W = h(["W"])
    checks = []
    for Q, k, xz, wxz in _check_plan(scheme):
        if k in Q:
            value = h(wxz) - h(xz)
            role = "qualified"
        else:
            value = H_W + h(xz) - h(wxz)
            role = "eavesdropper"
        checks.append(CheckResult(Q, k, role, value))
    joint = h([key_name(k) for k in range(1, scheme.params.K + 1)])
    return VerificationReport(
        kind=scheme.encoder_kind.value,
        N=scheme.params.N,
        K=scheme.params.K,
        p=scheme.p,
        method=method,
        message_len=scheme.message_len,
        key_len=scheme.key_len,
        checks=checks,
        bandwidth=scheme.bandwidth_profile(),
        joint_key_entropy=joint,
    )


def verify_scheme(scheme: Scheme, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    """Correctness and security by exhaustive enumeration of (basis, message)."""
    system = scheme_system(scheme)
    if system.outcome_count > budget:
        raise BudgetExceeded(system.outcome_count, budget)
    queries = [["W"], [key_name(k) for k in range(1, scheme.params.K + 1)]]
    for _, _, xz, wxz in _check_plan(scheme):
        queries += [xz, wxz]
    unique = list(dict.fromkeys(tuple(q) for q in queries))
    tables = joint_counts(system, unique, budget)
    values = {q: t.entropy(system.p, require_exact=True) for q, t in zip(unique, tables)}
    return _report(scheme, "exact", lambda names: values[tuple(names)])


def verify_scheme_linear(scheme: Scheme) -> VerificationReport:
    """Same report through ranks of coefficient matrices."""
    system = scheme_system(scheme)
    cache: dict[tuple, Fraction] = {}

    def h(names):
        key = tuple(names)
        if key not in cache:
            cache[key] = Fraction(block_rank(system.coefficients(names)))
        return cache[key]

    return _report(scheme, "rank", h)


__all__ = [
    "BudgetExceeded",
    "CheckResult",
    "DEFAULT_BUDGET",
    "DistributionTable",
    "ExactnessError",
    "RandomSystem",
    "VerificationReport",
    "block_rank",
    "conditional_entropy",
    "entropy",
    "entropy_from_counts",
    "joint_counts",
    "key_name",
    "mutual_information",
    "realizations",
    "scheme_system",
    "signal_name",
    "verify_scheme",
    "verify_scheme_linear",
]
