"""Command-line front end.

Exit codes: 0 success, 1 an asserted claim was refuted, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .compounds import additive_compound_2, multiplicative_compound
from .dsr import build_dsr
from .dsr2 import build_dsr2, prune_acyclic
from .io import (
    MatrixFormatError,
    build_report,
    check_shapes,
    dump_matrix,
    dump_report,
    load_matrix,
    to_dot,
)
from .linalg import LinalgError, RationalMatrix, SignPattern
from .oracle import Claim, SampleSpec, exhaustive_small, verify_claim
from .theorems import BSpec, FLAG_CLAIMS, Level, analyze

__all__ = ["main", "build_parser"]

DEFAULT_ASSERT_TRIALS = 200


class UsageError(Exception):
    """Bad arguments or input; maps to exit code 2."""


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        return load_matrix(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _bspec(args, A) -> tuple[BSpec, RationalMatrix | SignPattern | None]:
    if getattr(args, "b_matrix", None):
        B = _load(args.b_matrix)
        check_shapes(A, B)
        return BSpec("matrix", B), B
    if getattr(args, "b_class", None):
        return BSpec(args.b_class), None
    raise UsageError("one of --b-matrix or --b-class is required")


def _b_sampler(A, bspec: BSpec) -> SampleSpec:
    P = A if isinstance(A, SignPattern) else SignPattern.of(A)
    if bspec.kind == "qt":
        return SampleSpec.q(P.T)
    if bspec.kind == "q0t":
        return SampleSpec.q0(P.T)
    if isinstance(bspec.matrix, SignPattern):
        return SampleSpec.q(bspec.matrix)
    return SampleSpec.fixed(bspec.matrix)


def _a_sampler(A) -> SampleSpec:
    return SampleSpec.q(A) if isinstance(A, SignPattern) else SampleSpec.fixed(A)


# --- commands -----------------------------------------------------------------

def cmd_analyze(args) -> int:
    A = _load(args.matrix)
    bspec, B = _bspec(args, A)
    witness = None
    if args.witness_b:
        witness = _load(args.witness_b)
        if not isinstance(witness, RationalMatrix):
            raise UsageError("--witness-b must be a numeric matrix")
        check_shapes(A, witness)
    trials = args.oracle_trials
    if trials is None:
        trials = DEFAULT_ASSERT_TRIALS if args.assert_claims else 0
    report = analyze(A, bspec, oracle_trials=trials, seed=args.seed, witness_b=witness)
    body = {"analysis": report.to_dict(), "oracle_trials": trials}
    refuted = False
    if args.assert_claims:
        checks = {}
        for claim in args.assert_claims:
            res = _check_assertion(claim, A, bspec, report, trials, args.seed)
            checks[claim] = res
            refuted |= res["status"] == "refuted"
        body["assertions"] = checks
    inputs = {"A": A} if B is None else {"A": A, "B": B}
    _write(dump_report(build_report(body, inputs, args.seed, args.deterministic)), args.out)
    return 1 if refuted else 0


def _check_assertion(claim: str, A, bspec: BSpec, report, trials: int, seed: int) -> dict:
    key = {v.value: k for k, v in FLAG_CLAIMS.items()}.get(claim)
    out = {}
    if key is not None:
        flag = report.spectral.flags()[key]
        out["level"] = flag.level.value
        if flag.oracle is not None:
            out["oracle"] = flag.oracle.to_dict()
        if flag.level is Level.REFUTED or flag.conflict:
            out["status"] = "refuted"
            return out
        if flag.oracle is not None:
            out["status"] = "supported"
            return out
    v = verify_claim(claim, _a_sampler(A), _b_sampler(A, bspec), trials, seed)
    out["oracle"] = v.to_dict()
    out["status"] = "refuted" if v.status == "counterexample" else "supported"
    return out


def cmd_graph(args) -> int:
    A = _load(args.matrix)
    if args.b_matrix:
        B = _load(args.b_matrix)
        check_shapes(A, B)
    else:
        B = A.T
    if args.level == "dsr":
        G = build_dsr(A, B)
    else:
        G = build_dsr2(A, B).graph
    if args.prune_acyclic:
        G = prune_acyclic(G)
    _write(to_dot(G, args.level), args.out)
    return 0


def cmd_compound(args) -> int:
    M = _load(args.matrix)
    if not isinstance(M, RationalMatrix):
        raise UsageError("compound needs a numeric matrix")
    if args.mode == "additive":
        if args.k != 2:
            raise UsageError("only the second additive compound is supported")
        C = additive_compound_2(M)
    else:
        C = multiplicative_compound(M, args.k)
    _write(dump_matrix(C), args.out)
    return 0


def cmd_oracle(args) -> int:
    A = _load(args.matrix)
    bspec, B = _bspec(args, A)
    a_spec = _a_sampler(A)
    if args.a_class == "q":
        a_spec = SampleSpec.q(A)
    elif args.a_class == "q0":
        a_spec = SampleSpec.q0(A)
    b_spec = _b_sampler(A, bspec)
    if args.grid:
        v = exhaustive_small(args.claim, a_spec, b_spec, grid=args.grid)
    else:
        v = verify_claim(args.claim, a_spec, b_spec, args.trials, args.seed)
    body = {"oracle": {**v.to_dict(), "wall_time": v.wall_time,
                       "mode": f"exhaustive-{args.grid}" if args.grid else "sampled"}}
    inputs = {"A": A} if B is None else {"A": A, "B": B}
    _write(dump_report(build_report(body, inputs, args.seed, args.deterministic)), args.out)
    if v.status == "error":
        return 2
    return 1 if v.status == "counterexample" else 0


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hopfgate",
        description="Structural exclusion of Hopf bifurcation for products AB.",
    )
    p.add_argument("--version", action="version", version=f"hopfgate {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def b_source(sp, required: bool):
        g = sp.add_mutually_exclusive_group(required=required)
        g.add_argument("--b-matrix", metavar="PATH", help="concrete B (m x n)")
        g.add_argument("--b-class", choices=("qt", "q0t"),
                       help="B ranges over Q(A^t) or Q0(A^t)")

    def common(sp):
        sp.add_argument("--matrix", required=True, metavar="PATH", help="A (n x m), JSON")
        sp.add_argument("--out", metavar="PATH", help="write to file instead of stdout")

    a = sub.add_parser("analyze", help="conditions, theorems and spectral verdicts")
    common(a)
    b_source(a, required=True)
    a.add_argument("--oracle-trials", type=int, default=None, metavar="N",
                   help=f"oracle samples per claim (default 0, or {DEFAULT_ASSERT_TRIALS} "
                        "with --assert)")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--assert", dest="assert_claims", action="append",
                   choices=[c.value for c in Claim], metavar="CLAIM",
                   help="exit 1 if this claim is refuted; repeatable")
    a.add_argument("--witness-b", metavar="PATH",
                   help="stable member of the B class for the connected-family check")
    a.add_argument("--deterministic", action="store_true",
                   help="omit timestamps and timings")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("graph", help="DOT export of the DSR or DSR² graph")
    common(g)
    g.add_argument("--b-matrix", metavar="PATH", help="B (default: A^t)")
    g.add_argument("--level", choices=("dsr", "dsr2"), default="dsr")
    g.add_argument("--prune-acyclic", action="store_true",
                   help="keep only edges that lie on a cycle")
    g.set_defaults(func=cmd_graph)

    c = sub.add_parser("compound", help="additive or multiplicative compound")
    common(c)
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--mode", choices=("additive", "multiplicative"), default="additive")
    c.set_defaults(func=cmd_compound)

    o = sub.add_parser("oracle", help="sampled or exhaustive claim check")
    common(o)
    b_source(o, required=True)
    o.add_argument("--claim", required=True, choices=[c.value for c in Claim])
    o.add_argument("--a-class", choices=("fixed", "q", "q0"), default=None,
                   help="sample A from its class (default: fixed for numeric A)")
    o.add_argument("--trials", type=int, default=200)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--grid", choices=("sign", "dyadic"),
                   help="enumerate a grid exhaustively instead of sampling")
    o.add_argument("--deterministic", action="store_true")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (UsageError, MatrixFormatError, LinalgError, ValueError) as exc:
        print(f"hopfgate: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
