"""Command-line interface.

One binary, orthogonal verbs:

* ``check``      decide strong | bounded | expected | approx
* ``solve``      per-arrangement minimum-cost plans
* ``enumerate``  instances | arrangements | sequences
* ``oracle``     brute-force mirror of ``check``
* ``min-budget`` smallest budget for bounded | expected
* ``export-dot`` workflow DAG for visualization

Reports are canonical JSON on stdout; diagnostics go to stderr.  Exit
codes: 0 decision yes (or success), 1 decision no, 2 usage/parse error,
3 enumeration size limit.  Timings are opt-in (``--timings``) so that
reports stay byte-identical across runs and worker counts.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

from . import decisions, oracle, reports
from .arrangements import count_sequences, eliminate_xor, enumerate_arrangements
from .errors import (
    SchemaSemanticError,
    SchemaSyntaxError,
    SizeLimit,
    WfsatError,
    ZeroWeight,
)
from .io import canonical_json, export_dot, load_schema
from .sequences import DEFAULT_SEQUENCE_CAP, gen_sequences, sequence_count


class _UsageError(Exception):
    pass


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    started = time.perf_counter()
    try:
        return args.run(args, started)
    except SizeLimit as exc:
        print(f"wfsat: {exc}", file=sys.stderr)
        return 3
    except (_UsageError, SchemaSyntaxError, SchemaSemanticError, ZeroWeight) as exc:
        print(f"wfsat: {exc}", file=sys.stderr)
        return 2
    except (OSError, WfsatError) as exc:
        print(f"wfsat: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wfsat", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    check = sub.add_parser("check", help="decide a satisfiability problem")
    check.add_argument("--mode", required=True, choices=["strong", "bounded", "expected", "approx"])
    _common(check, jobs=True)
    check.set_defaults(run=_run_check)

    solve = sub.add_parser("solve", help="minimum-cost plan per arrangement")
    _common(solve, jobs=True)
    solve.set_defaults(run=_run_solve)

    enum = sub.add_parser("enumerate", help="list instances, arrangements or sequences")
    enum.add_argument("--what", required=True, choices=["instances", "arrangements", "sequences"])
    _common(enum, jobs=True, limit=True)
    enum.set_defaults(run=_run_enumerate)

    orc = sub.add_parser("oracle", help="brute-force mirror of check")
    orc.add_argument("--mode", required=True, choices=["strong", "bounded", "expected", "approx"])
    _common(orc, limit=True)
    orc.set_defaults(run=_run_oracle)

    budget = sub.add_parser("min-budget", help="smallest budget admitting a yes answer")
    budget.add_argument("--mode", required=True, choices=["bounded", "expected"])
    _common(budget, jobs=True)
    budget.set_defaults(run=_run_min_budget)

    dot = sub.add_parser("export-dot", help="emit the workflow DAG in DOT form")
    dot.add_argument("file")
    dot.set_defaults(run=_run_export_dot)

    return parser


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _common(sub: argparse.ArgumentParser, jobs: bool = False, limit: bool = False) -> None:
    sub.add_argument("file")
    sub.add_argument("--budget", help="rational budget, overrides the file's value")
    sub.add_argument("--prob", help="rational probability, overrides the file's value")
    sub.add_argument("--timings", action="store_true", help="include wall-clock timing in the report")
    if jobs:
        sub.add_argument(
            "--jobs", type=_positive_int, default=None, help="worker threads (default: all cores)"
        )
    if limit:
        sub.add_argument("--limit", type=int, default=None, help="sequence cap for exhaustive paths")


def _rational(text: str | None, flag: str) -> Fraction | None:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f'{flag} must be a rational "p" or "p/q": {text!r}') from None


def _budget_of(args, schema, required: bool) -> Fraction | None:
    value = _rational(args.budget, "--budget")
    if value is None:
        value = schema.budget
    if required and value is None:
        raise _UsageError("this mode needs --budget (or a budget in the file)")
    if value is not None and value < 0:
        raise _UsageError("budget must be non-negative")
    return value


def _probability_of(args, schema, required: bool) -> Fraction | None:
    value = _rational(args.prob, "--prob")
    if value is None:
        value = schema.probability
    if required and value is None:
        raise _UsageError("this mode needs --prob (or a probability in the file)")
    if value is not None and not 0 <= value <= 1:
        raise _UsageError("probability must lie in [0, 1]")
    return value


def _emit(report: dict) -> None:
    sys.stdout.write(canonical_json(report))


def _seconds(args, started: float) -> float | None:
    return time.perf_counter() - started if args.timings else None


def _run_check(args, started: float) -> int:
    schema = load_schema(args.file)
    analysis = decisions.analyze(schema, jobs=args.jobs)
    budget = _budget_of(args, schema, required=args.mode in ("bounded", "expected", "approx"))
    probability = _probability_of(args, schema, required=args.mode == "approx")
    if args.mode == "strong":
        answer, _ = decisions.check_strong_sat(analysis)
    elif args.mode == "bounded":
        answer = decisions.check_bounded_cost(analysis, budget)
    elif args.mode == "expected":
        answer = decisions.check_expected_cost(analysis, budget)
    else:
        answer = decisions.check_approx(analysis, budget, probability)
    _emit(
        reports.build_report(
            f"check-{args.mode}",
            answer=answer,
            budget=budget,
            probability=probability if args.mode == "approx" else None,
            totals=reports.analysis_totals(analysis),
            aggregates=reports.analysis_aggregates(analysis, budget),
            records=reports.arrangement_records(analysis),
            seconds=_seconds(args, started),
        )
    )
    return 0 if answer else 1


def _run_solve(args, started: float) -> int:
    schema = load_schema(args.file)
    analysis = decisions.analyze(schema, jobs=args.jobs)
    budget = _budget_of(args, schema, required=False)
    _emit(
        reports.build_report(
            "solve",
            budget=budget,
            totals=reports.analysis_totals(analysis),
            aggregates=reports.analysis_aggregates(analysis, budget),
            records=reports.arrangement_records(analysis),
            seconds=_seconds(args, started),
        )
    )
    return 0


def _run_enumerate(args, started: float) -> int:
    schema = load_schema(args.file)
    instances = eliminate_xor(schema.workflow)
    records: list[dict] = []
    if args.what == "instances":
        for i, inst in enumerate(instances):
            records.append(
                {
                    "type": "instance",
                    "instance": i,
                    "choices": dict(inst.choices),
                    "steps": list(inst.steps),
                    "releases": list(inst.releases),
                }
            )
        totals = {
            "instances": len(instances),
            "arrangements": None,
            "sequences": sum(sequence_count(inst.ast) for inst in instances),
        }
    elif args.what == "arrangements":
        total_sequences = 0
        for i, inst in enumerate(instances):
            for arr in enumerate_arrangements(inst):
                count = count_sequences(arr)
                total_sequences += count
                records.append(
                    {
                        "type": "arrangement",
                        "instance": i,
                        "choices": dict(inst.choices),
                        "release_order": list(arr.release_order),
                        "slots": [list(slot) for slot in arr.slots],
                        "count": count,
                        "min_cost": None,
                        "constraint_cost": None,
                        "authorization_cost": None,
                        "witness": None,
                    }
                )
        totals = {
            "instances": len(instances),
            "arrangements": len(records),
            "sequences": total_sequences,
        }
    else:
        cap = args.limit if args.limit is not None else DEFAULT_SEQUENCE_CAP
        total = 0
        for i, inst in enumerate(instances):
            for s in gen_sequences(inst.ast, cap=cap):
                records.append({"type": "sequence", "instance": i, "elements": list(s)})
            total += sequence_count(inst.ast)
        totals = {"instances": len(instances), "arrangements": None, "sequences": total}
    _emit(
        reports.build_report(
            f"enumerate-{args.what}",
            totals=totals,
            records=records,
            seconds=_seconds(args, started),
        )
    )
    return 0


def _run_oracle(args, started: float) -> int:
    schema = load_schema(args.file)
    budget = _budget_of(args, schema, required=args.mode in ("bounded", "expected", "approx"))
    probability = _probability_of(args, schema, required=args.mode == "approx")
    cap = args.limit if args.limit is not None else oracle.DEFAULT_ORACLE_CAP
    result = oracle.oracle_decide(schema, budget=budget, probability=probability, cap=cap)
    answer = {
        "strong": result.strong,
        "bounded": result.bounded,
        "expected": result.expected,
        "approx": result.approx,
    }[args.mode]
    _emit(
        reports.build_report(
            f"oracle-{args.mode}",
            answer=answer,
            budget=budget,
            probability=probability if args.mode == "approx" else None,
            totals=reports.oracle_totals(result),
            aggregates=reports.oracle_aggregates(result),
            records=reports.oracle_records(result),
            seconds=_seconds(args, started),
        )
    )
    return 0 if answer else 1


def _run_min_budget(args, started: float) -> int:
    schema = load_schema(args.file)
    analysis = decisions.analyze(schema, jobs=args.jobs)
    if args.mode == "bounded":
        value = decisions.min_budget_bounded(analysis)
    else:
        value = decisions.min_budget_expected(analysis)
    _emit(
        reports.build_report(
            f"min-budget-{args.mode}",
            value=value,
            totals=reports.analysis_totals(analysis),
            aggregates=reports.analysis_aggregates(analysis, None),
            records=reports.arrangement_records(analysis),
            seconds=_seconds(args, started),
        )
    )
    return 0


def _run_export_dot(args, started: float) -> int:
    schema = load_schema(args.file)
    sys.stdout.write(export_dot(schema.workflow))
    return 0


if __name__ == "__main__":
    sys.exit(main())
