"""Command-line front end.

Every command prints JSON lines. Exit codes depend only on the status:
0 solvable, 1 unsolvable or locally unsolvable, 2 unknown witness or no
claim, 3 other errors, 64 usage errors, 65 degenerate discriminant.
"""

from __future__ import annotations

import argparse
import json
import math
import shlex
import sys
import time

from . import criteria, localsolve, oracle, pell
from .decision import Decision, Status
from .errors import DegenerateDiscriminant, DiophantusError, LocallyUnsolvable

EXIT_OK = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3
EXIT_USAGE = 64
EXIT_DEGENERATE = 65

DECIDE_FAMILIES = ("gauss64", "d34", "multinorm534", "x2dy2prime", "negpell", "split")

_STATUS_EXIT = {
    Status.SOLVABLE.value: EXIT_OK,
    Status.UNSOLVABLE.value: EXIT_NO,
    Status.LOCALLY_UNSOLVABLE.value: EXIT_NO,
    Status.UNKNOWN_WITNESS.value: EXIT_UNKNOWN,
    "Inapplicable": EXIT_UNKNOWN,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=False), flush=True)


def _report(args, family, n=None, d=None, decision: Decision | None = None, **extra) -> dict:
    record = {
        "command": args.command_line,
        "family": family,
        "n": n,
        "d": d,
        "status": None,
        "witness": None,
        "certificate": None,
        "place": None,
        "local_reports": None,
    }
    if decision is not None:
        record.update(decision.as_dict())
    record.update(extra)
    record["elapsed_ms"] = round((time.perf_counter() - args.started) * 1000, 3)
    return record


def _need(args, *names):
    missing = [f"--{name}" for name in names if getattr(args, name) is None]
    if missing:
        raise UsageError(f"family {args.family} needs {' and '.join(missing)}")


# ---------------------------------------------------------------- commands


def run_decide(args) -> int:
    family = args.family
    if family == "gauss64":
        _need(args, "n")
        decision = criteria.decide_gauss64(args.n)
    elif family == "d34":
        _need(args, "n")
        decision = criteria.decide_d34(args.n)
    elif family == "multinorm534":
        _need(args, "n")
        decision = criteria.decide_multinorm_5_34(args.n, coef_bound=args.witness_bound)
    elif family == "x2dy2prime":
        _need(args, "n", "d")
        table = criteria.load_table(args.table)
        decision = criteria.decide_x2_plus_dy2_prime(args.d, args.n, table)
    elif family == "negpell":
        _need(args, "d")
        solvable, witness = pell.negative_pell_solvable(args.d)
        decision = Decision.solvable(witness) if solvable else Decision.unsolvable()
    else:
        _need(args, "n", "d")
        k = math.isqrt(args.d) if args.d > 0 else -1
        if k * k != args.d:
            raise UsageError("family split needs --d to be a positive perfect square")
        decision = oracle.split_form_decide(k, args.n)
    record = _report(args, family, args.n, args.d, decision)
    _emit(record)
    return _STATUS_EXIT[record["status"]]


def run_witness(args) -> int:
    """Several solutions of x^2 - d y^2 = n, walking each class along the unit group."""
    solutions = pell.orbit_enumerate(args.d, args.n, args.count)
    for x, y in solutions:
        _emit(_report(args, "pell", args.n, args.d, Decision.solvable((x, y))))
    return EXIT_OK


def _parse_range(text: str) -> range:
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        raise UsageError(f"range must look like a:b, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return range(lo, hi + 1)


def run_verify(args) -> int:
    values = _parse_range(args.range)
    report = oracle.consistency_sweep(args.family, values, args.oracle, workers=args.workers)
    record = {"command": args.command_line, "range": args.range, **report.as_dict()}
    record["elapsed_ms"] = round((time.perf_counter() - args.started) * 1000, 3)
    _emit(record)
    return EXIT_OK if report.ok else EXIT_NO


def run_profile(args) -> int:
    try:
        profile = criteria.character_profile_d34(args.n)
    except LocallyUnsolvable as exc:
        _emit(_report(args, "d34", args.n, None, Decision.locally_unsolvable(exc.place)))
        return EXIT_NO
    for entry in profile.entries:
        _emit({"command": args.command_line, "family": "d34", "n": args.n, **entry.as_dict()})
    status = Status.SOLVABLE if profile.combinable else Status.UNSOLVABLE
    _emit(_report(args, "d34", args.n, None, Decision(status), combinable=profile.combinable))
    return _STATUS_EXIT[status.value]


def _parse_eq(text: str) -> tuple[int, ...]:
    try:
        coeffs = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"--eq needs six integers a,b,c,e,f,g, got {text!r}") from None
    if len(coeffs) != 6:
        raise UsageError(f"--eq needs six integers a,b,c,e,f,g, got {len(coeffs)}")
    return coeffs


def run_local(args) -> int:
    eq = localsolve.QuadEquation(*_parse_eq(args.eq), n=args.n)
    reports = localsolve.everywhere_locally_solvable(eq)
    for rep in reports:
        _emit({"command": args.command_line, "eq": args.eq, "n": args.n, **rep.as_dict()})
    return EXIT_OK if all(rep.solvable for rep in reports) else EXIT_NO


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diophantus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decide", help="decide one equation")
    p.add_argument("--family", required=True, choices=DECIDE_FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--table", help="ring class table (overrides $DIOPHANTUS_TABLE)")
    p.add_argument("--witness-bound", type=int, default=criteria.MULTINORM_WITNESS_BOUND)
    p.set_defaults(run=run_decide)

    p = sub.add_parser("witness", help="list solutions of x^2 - d y^2 = n")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(run=run_witness, family="pell")

    p = sub.add_parser("verify", help="compare a criterion with its oracle over a range")
    p.add_argument("--family", required=True, choices=sorted(oracle.DEFAULT_ORACLES))
    p.add_argument("--range", required=True, help="inclusive range a:b")
    p.add_argument("--oracle")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(run=run_verify)

    p = sub.add_parser("profile", help="character profile of x^2 - 34y^2 = n")
    p.add_argument("--family", default="d34", choices=["d34"])
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(run=run_profile)

    p = sub.add_parser("local", help="local solvability at every bad place")
    p.add_argument("--eq", required=True, help="a,b,c,e,f,g")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(run=run_local)
    return parser


def _glue_values(argv: list[str]) -> list[str]:
    # argparse reads "-5000:5000" as an option; attach such values to their flag
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--range", "--eq"):
            value = next(it, None)
            out.append(tok if value is None else f"{tok}={value}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    try:
        args = build_parser().parse_args(_glue_values(argv))
        args.started = started
        args.command_line = shlex.join(["diophantus", *argv])
        return args.run(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DegenerateDiscriminant as exc:
        print(f"diophantus: degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (DiophantusError, ValueError, ArithmeticError, LookupError, OSError) as exc:
        print(f"diophantus: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
