"""In-process execution of the two protocol stages.

Key assignment: :func:`setup` draws the basis symbols and hands each
receiver its key.  Groupcast: :func:`run_session` encodes ``X_Q``, delivers
it to every receiver, records the qualified receivers' decodes and the
eavesdroppers' views.

Randomness comes from numpy's ``PCG64`` bit generator seeded with the
session seed; field symbols are drawn with ``Generator.integers(0, p)``,
which uses bounded rejection sampling, so every symbol is exactly uniform
and the stream depends only on the seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .entropy import DEFAULT_BUDGET, BudgetExceeded, realizations
from .schemes import (
    BroadcastSignal,
    DecodingError,
    KeyMaterial,
    NotQualifiedError,
    Qualified,
    Scheme,
    decode,
    derive_material,
    encode,
)

RNG_ALGORITHM = "numpy.random.PCG64 + Generator.integers (bounded rejection)"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & (2**64 - 1)))


@dataclass
class Receiver:
    index: int
    key: tuple[int, ...]

    def receive(self, scheme: Scheme, signal: BroadcastSignal) -> tuple[int, ...]:
        if self.index not in signal.qualified:
            raise NotQualifiedError(f"receiver {self.index} is not qualified for {list(signal.qualified)}")
        return decode(scheme, self.index, self.key, signal)


@dataclass(frozen=True)
class TranscriptEntry:
    qualified: Qualified
    message: tuple[int, ...]
    signal: tuple[int, ...]
    decoded: dict[int, tuple[int, ...] | None]
    views: dict[int, tuple[int, ...]]  # eavesdropper -> its key

    @property
    def all_decoded(self) -> bool:
        return all(w == self.message for w in self.decoded.values())

    def to_dict(self) -> dict:
        return {
            "Q": list(self.qualified),
            "W": list(self.message),
            "X": list(self.signal),
            "decoded": {
                str(q): {"W": None if w is None else list(w), "ok": w == self.message}
                for q, w in self.decoded.items()
            },
            "eavesdroppers": sorted(self.views),
        }


@dataclass
class Session:
    scheme: Scheme
    seed: int
    material: KeyMaterial
    receivers: list[Receiver]
    rng: np.random.Generator = field(repr=False)
    transcript: list[TranscriptEntry] = field(default_factory=list)

    def random_message(self) -> tuple[int, ...]:
        w = self.rng.integers(0, self.scheme.p, size=self.scheme.message_len)
        return tuple(int(x) for x in w)

    def random_qualified(self) -> Qualified:
        K, N = self.scheme.params.K, self.scheme.params.N
        return tuple(sorted(int(q) + 1 for q in self.rng.choice(K, size=N, replace=False)))


def setup(scheme: Scheme, seed: int) -> Session:
    """Key assignment stage: draw the basis and give receiver k its key."""
    rng = make_rng(seed)
    basis = rng.integers(0, scheme.p, size=scheme.basis_count)
    material = derive_material(scheme, basis)
    receivers = [Receiver(k, material.key(k)) for k in range(1, scheme.params.K + 1)]
    return Session(scheme, int(seed), material, receivers, rng)


def run_session(session: Session, Q: Iterable[int], W) -> TranscriptEntry:
    """Groupcast W to Q; the scheme validates Q before anything is sent."""
    scheme = session.scheme
    Q = scheme.check_qualified(Q)
    signal = encode(scheme, session.material, Q, W)
    message = tuple(int(w) % scheme.p for w in (W if isinstance(W, (list, tuple)) else [W]))
    decoded: dict[int, tuple[int, ...] | None] = {}
    views: dict[int, tuple[int, ...]] = {}
    for r in session.receivers:
        if r.index in Q:
            try:
                decoded[r.index] = r.receive(scheme, signal)
            except DecodingError:
                decoded[r.index] = None
        else:
            views[r.index] = r.key
    entry = TranscriptEntry(Q, message, signal.symbols, decoded, views)
    session.transcript.append(entry)
    return entry


def transcript_jsonl(session: Session) -> str:
    return "".join(json.dumps(e.to_dict()) + "\n" for e in session.transcript)


# ----------------------------------------------------------------------------
# key files


def key_file_text(scheme: Scheme, material: KeyMaterial, receiver: int) -> str:
    N, K, p = scheme.params.N, scheme.params.K, scheme.p
    header = f"# N={N} K={K} p={p} kind={scheme.encoder_kind.value} receiver={receiver}"
    return header + "\n" + " ".join(str(x) for x in material.key(receiver)) + "\n"


def write_key_files(scheme: Scheme, material: KeyMaterial, directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for k in range(1, scheme.params.K + 1):
        path = directory / f"key_{k}.txt"
        path.write_text(key_file_text(scheme, material, k))
        paths.append(path)
    return paths


def read_key_file(path) -> tuple[dict, tuple[int, ...]]:
    """Parse a key file into (header fields, key symbols)."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing header line")
    header = dict(tok.split("=", 1) for tok in lines[0][1:].split())
    for name in ("N", "K", "p", "receiver"):
        header[name] = int(header[name])
    body = " ".join(lines[1:]).split()
    return header, tuple(int(x) for x in body)


# ----------------------------------------------------------------------------
# leakage audit


@dataclass(frozen=True)
class AuditEntry:
    qualified: Qualified
    eavesdropper: int
    passed: bool
    # on failure: (message a, message b, outcome (X, Z_e), count under a, count under b)
    witness: tuple | None = None


@dataclass
class LeakageAudit:
    kind: str
    entries: list[AuditEntry]
    # per (Q, e): counts of (X_Q, Z_e) outcomes for message 0
    tables: dict[tuple[Qualified, int], dict[tuple[int, ...], int]]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[AuditEntry]:
        return [e for e in self.entries if not e.passed]


def exhaustive_leakage_audit(scheme: Scheme, budget: int = DEFAULT_BUDGET) -> LeakageAudit:
    """Check that (X_Q, Z_e) has the same distribution under every message.

    For each message value the basis is enumerated completely and the
    joint outcomes of (X_Q, Z_e) are counted; zero leakage means the count
    tables are identical across messages.
    """
    p, b, L = scheme.p, scheme.basis_count, scheme.message_len
    total = p ** (b + L)
    if total > budget:
        raise BudgetExceeded(total, budget)
    bases = realizations(0, p**b, b, p)
    messages = realizations(0, p**L, L, p)
    entries = []
    tables = {}
    K = scheme.params.K
    for Q in scheme.qualified_sets():
        sm = scheme.signal_map(Q)
        key_part = (bases @ sm.keys.data.T) % p
        for e in range(1, K + 1):
            if e in Q:
                continue
            z = (bases @ scheme.key_generators[e - 1].data.T) % p
            ref = None
            witness = None
            for w in messages:
                x = (key_part + sm.message.data @ w) % p
                rows, counts = np.unique(np.hstack([x, z]), axis=0, return_counts=True)
                table = {tuple(int(v) for v in r): int(c) for r, c in zip(rows, counts)}
                if ref is None:
                    ref, ref_w = table, tuple(int(v) for v in w)
                    continue
                if table != ref:
                    outcome = next(o for o in set(ref) | set(table) if ref.get(o, 0) != table.get(o, 0))
                    witness = (ref_w, tuple(int(v) for v in w), outcome, ref.get(outcome, 0), table.get(outcome, 0))
                    break
            tables[(Q, e)] = ref
            entries.append(AuditEntry(Q, e, witness is None, witness))
    return LeakageAudit(scheme.encoder_kind.value, entries, tables)


__all__ = [
    "AuditEntry",
    "LeakageAudit",
    "RNG_ALGORITHM",
    "Receiver",
    "Session",
    "TranscriptEntry",
    "exhaustive_leakage_audit",
    "key_file_text",
    "make_rng",
    "read_key_file",
    "run_session",
    "setup",
    "transcript_jsonl",
    "write_key_files",
]
