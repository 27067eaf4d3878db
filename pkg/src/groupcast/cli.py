"""Command-line entry point: ``groupcast {gen,groupcast,verify,region}``.

Exit codes: 0 pass, 1 verification failure, 2 resource or validation error.
Each run prints its effective configuration to stderr as a complete command
line, so rerunning that line reproduces the output byte for byte.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .entropy import DEFAULT_BUDGET, BudgetExceeded, verify_scheme, verify_scheme_linear
from .field import next_prime
from .region import RegionQuery, as_fraction, rational_grid, region_scan, rows_to_csv, rows_to_json
from .schemes import BUILDERS, Scheme, SchemeError, qualified_key, symmetrize
from .simulator import RNG_ALGORITHM, run_session, setup, transcript_jsonl, write_key_files

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

# constructions with fixed (N, K)
FIXED_SIZE = {"n3k5": (3, 5), "n2k4-joint": (2, 4)}


class UsageError(ValueError):
    pass


def _effective(argv: list[str]) -> None:
    print("# effective config: groupcast " + shlex.join(argv), file=sys.stderr)


def _parse_ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _parse_range(text: str) -> list[Fraction]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be START:STOP:STEP, got {text!r}")
    try:
        return rational_grid(*(as_fraction(x) for x in parts))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad range {text!r}: {exc}") from None


def _load_scheme(path: str) -> Scheme:
    try:
        return Scheme.from_json(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"scheme file not found: {path}") from None
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"{path}: not a scheme file ({exc})") from None


# ----------------------------------------------------------------------------
# gen


def _resolve_gen(args) -> tuple[int, int, int]:
    if args.scheme in FIXED_SIZE:
        N, K = FIXED_SIZE[args.scheme]
        if (args.n not in (None, N)) or (args.k not in (None, K)):
            raise UsageError(f"{args.scheme} is defined only for N={N}, K={K}")
        p = args.p if args.p is not None else 3
        return N, K, p
    if args.n is None or args.k is None:
        raise UsageError(f"{args.scheme} needs --n and --k")
    p = args.p if args.p is not None else next_prime(args.k)
    return args.n, args.k, p


def cmd_gen(args) -> int:
    N, K, p = _resolve_gen(args)
    argv = ["gen", args.scheme, "--n", str(N), "--k", str(K), "--p", str(p), "--seed", str(args.seed)]
    if args.symmetrize:
        argv.append("--symmetrize")
    if args.out:
        argv += ["--out", args.out]
    _effective(argv)
    scheme = BUILDERS[args.scheme](N, K, p)
    if args.symmetrize:
        scheme = symmetrize(scheme)
    report = verify_scheme_linear(scheme)
    joint = report.joint_key_entropy
    print(f"scheme={scheme.encoder_kind.value} N={N} K={K} p={p}")
    print(f"alpha={scheme.alpha} beta={scheme.beta} beta_avg={scheme.beta_average}")
    print(f"joint_key_entropy={joint} ratio={joint / scheme.message_len}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "scheme.json").write_text(scheme.to_json() + "\n")
        session = setup(scheme, args.seed)
        paths = write_key_files(scheme, session.material, out)
        print(f"wrote {out / 'scheme.json'} and {len(paths)} key files")
    return EXIT_PASS


# ----------------------------------------------------------------------------
# groupcast


def cmd_groupcast(args) -> int:
    scheme = _load_scheme(args.scheme_file)
    Q = _parse_ints(args.q, "--q")
    if len(Q) != scheme.params.N:
        raise UsageError(f"--q needs exactly N={scheme.params.N} receivers, got {Q}")
    session = setup(scheme, args.seed)
    if args.message is None:
        W = list(session.random_message())
    else:
        W = _parse_ints(args.message, "--message")
        if len(W) != scheme.message_len:
            raise UsageError(f"--message needs L_W={scheme.message_len} symbols, got {len(W)}")
    argv = ["groupcast", args.scheme_file, "--q", ",".join(map(str, Q)),
            "--message", ",".join(map(str, W)), "--seed", str(args.seed)]
    if args.transcript:
        argv += ["--transcript", args.transcript]
    _effective(argv)
    print(f"# rng: {RNG_ALGORITHM}", file=sys.stderr)
    entry = run_session(session, Q, W)
    print(f"Q={qualified_key(entry.qualified)}")
    print("W=" + " ".join(map(str, entry.message)))
    print("X=" + " ".join(map(str, entry.signal)))
    for q, w in entry.decoded.items():
        if w is None:
            print(f"receiver {q}: decoding failed")
        else:
            status = "ok" if w == entry.message else "WRONG"
            print(f"receiver {q}: decoded " + " ".join(map(str, w)) + f" {status}")
    if args.transcript:
        Path(args.transcript).write_text(transcript_jsonl(session))
    return EXIT_PASS if entry.all_decoded else EXIT_FAIL


# ----------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    scheme = _load_scheme(args.scheme_file)
    argv = ["verify", args.scheme_file, "--mode", args.mode, "--format", args.format,
            "--budget", str(args.budget)]
    if args.out:
        argv += ["--out", args.out]
    _effective(argv)
    reports = {}
    if args.mode in ("exact", "both"):
        reports["exact"] = verify_scheme(scheme, args.budget)
    if args.mode in ("rank", "both"):
        reports["rank"] = verify_scheme_linear(scheme)
    agree = True
    if len(reports) == 2:
        agree = (
            reports["exact"].values() == reports["rank"].values()
            and reports["exact"].joint_key_entropy == reports["rank"].joint_key_entropy
        )
    passed = agree and all(r.passed for r in reports.values())

    if args.format == "json":
        doc = {m: r.to_dict() for m, r in reports.items()}
        doc["agree"] = agree
        doc["passed"] = passed
        text = json.dumps(doc, indent=1) + "\n"
    else:
        parts = [r.summary() for r in reports.values()]
        if len(reports) == 2:
            parts.append("exact and rank values " + ("agree" if agree else "DIVERGE"))
        text = "\n\n".join(parts) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text)
    if not passed:
        for r in reports.values():
            for c in r.failures():
                print(f"failure ({r.method}): Q={qualified_key(c.qualified)} e={c.receiver} "
                      f"{c.quantity} = {c.value}", file=sys.stderr)
    return EXIT_PASS if passed else EXIT_FAIL


# ----------------------------------------------------------------------------
# region


def cmd_region(args) -> int:
    argv = ["region", "--n", str(args.n), "--k", str(args.k), "--alpha", args.alpha,
            "--beta", args.beta, "--format", args.format]
    if args.out:
        argv += ["--out", args.out]
    RegionQuery(args.n, args.k, 1, 1)  # validates (N, K)
    alphas, betas = _parse_range(args.alpha), _parse_range(args.beta)
    if not alphas or not betas or alphas[0] <= 0 or betas[0] <= 0:
        raise UsageError("grid ranges must be non-empty and positive")
    _effective(argv)
    rows = region_scan(args.n, args.k, alphas, betas)
    text = rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="groupcast", description="Secure groupcast key and signal designs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="build a scheme, write scheme.json and key files")
    g.add_argument("scheme", choices=sorted(BUILDERS))
    g.add_argument("--n", type=int, help="qualified set size N")
    g.add_argument("--k", type=int, help="number of receivers K")
    g.add_argument("--p", type=int, help="field size (default: smallest prime >= K; 3 for n3k5 and n2k4-joint)")
    g.add_argument("--seed", type=int, default=0, help="seed for the key material written to key files")
    g.add_argument("--symmetrize", action="store_true", help="average over all receiver relabelings")
    g.add_argument("--out", help="output directory (omit to only print the summary)")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("groupcast", help="run one key-assignment plus groupcast session")
    c.add_argument("scheme_file")
    c.add_argument("--q", required=True, help="qualified set, comma-separated 1-based indices")
    c.add_argument("--message", help="message symbols, comma-separated (default: drawn from the seed)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--transcript", help="write the session transcript as JSON lines")
    c.set_defaults(func=cmd_groupcast)

    v = sub.add_parser("verify", help="check correctness and zero leakage")
    v.add_argument("scheme_file")
    v.add_argument("--mode", choices=("exact", "rank", "both"), default="both")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max outcomes enumerated in exact mode")
    v.add_argument("--out", help="also write the report here")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("region", help="scan (alpha, beta) membership on a grid")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--alpha", default="0.5:4:0.25", help="START:STOP:STEP, inclusive (default 0.5:4:0.25)")
    r.add_argument("--beta", default="0.5:4:0.25", help="START:STOP:STEP, inclusive (default 0.5:4:0.25)")
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.add_argument("--out", help="output file (default stdout)")
    r.set_defaults(func=cmd_region)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (UsageError, SchemeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
