"""Small independent utilities shared by the test modules.

The brute-force routines here are deliberately written from the problem
definitions (permutation filters, full plan enumeration) so they can
serve as oracles for the package's algorithms.
"""

from __future__ import annotations

import contextlib
import io
import itertools
from math import comb

from wfsat.cli import main
from wfsat.model import Poset, Schema, violation_units


def run_cli(*args: str) -> tuple[int, str]:
    """Run the CLI in-process; returns (exit code, stdout)."""
    buf = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(err):
        code = main(list(args))
    return code, buf.getvalue()


def bell(n: int) -> int:
    """Bell numbers via the binomial recurrence."""
    values = [1]
    for m in range(1, n + 1):
        values.append(sum(comb(m - 1, k) * values[k] for k in range(m)))
    return values[n]


def linear_extensions_by_filter(poset: Poset, elements) -> set[tuple[str, ...]]:
    """All linear extensions of the induced subposet, by permutation filter."""
    elements = tuple(elements)
    out = set()
    for perm in itertools.permutations(elements):
        if all(
            not poset.less(perm[j], perm[i])
            for i in range(len(perm))
            for j in range(i + 1, len(perm))
        ):
            out.add(perm)
    return out


def release_free_plan_cost(plan: dict[str, str], schema: Schema) -> int:
    """Direct plan cost when no constraint has applicable release points.

    Authorization cost is per-step additive; each constraint charges its
    weight times the distance of |plan(scope)| from its cardinality bound.
    """
    total = sum(
        schema.penalty(s) for s, u in plan.items() if not schema.authorized(s, u)
    )
    for c in schema.constraints:
        bound, k = c.bound()
        distinct = len({plan[s] for s in c.scope})
        total += c.weight * violation_units(bound, k, distinct)
    return total


def exhaustive_min_plan(schema: Schema) -> int:
    """Minimum release-free plan cost over all total plans, by enumeration."""
    best = None
    for assignment in itertools.product(schema.users, repeat=len(schema.steps)):
        plan = dict(zip(schema.steps, assignment))
        cost = release_free_plan_cost(plan, schema)
        if best is None or cost < best:
            best = cost
    return best
