"""Brute-force reference implementation for cross-checking the pipeline.

Everything here is deliberately independent of the enumeration and
solving modules: sequences come straight from the recursive sequence
algebra over the composition tree (xor included), constraint subscopes
are carved directly out of each sequence, and minimum costs come from
enumerating every plan.  Only the domain model is shared, so agreement
with the fast pipeline is real evidence rather than an identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import SizeLimit
from .model import (
    CompositionNode,
    Par,
    Plan,
    ReleaseLeaf,
    Schema,
    Seq,
    StepLeaf,
    Xor,
    element_order,
    restricted_threshold,
    violation_units,
)

DEFAULT_ORACLE_CAP = 200_000
"""Combined guard for sequence and plan enumeration."""

Sequence = tuple[str, ...]


def sigma_count(node: CompositionNode) -> int:
    """|Σ(node)| by the sequence algebra, xor branches included."""
    return sum(_length_counts(node).values())


def _length_counts(node: CompositionNode) -> dict[int, int]:
    # Number of sequences per length; xor makes lengths non-uniform and the
    # interleaving count depends on the operand lengths.
    if isinstance(node, (StepLeaf, ReleaseLeaf)):
        return {1: 1}
    if isinstance(node, Xor):
        out = dict(_length_counts(node.left))
        for length, n in _length_counts(node.right).items():
            out[length] = out.get(length, 0) + n
        return out
    lefts = _length_counts(node.left)
    rights = _length_counts(node.right)
    out: dict[int, int] = {}
    for ll, nl in lefts.items():
        for lr, nr in rights.items():
            n = nl * nr
            if isinstance(node, Par):
                n *= comb(ll + lr, ll)
            out[ll + lr] = out.get(ll + lr, 0) + n
    return out


def _sigma(node: CompositionNode) -> list[Sequence]:
    if isinstance(node, StepLeaf):
        return [(node.step,)]
    if isinstance(node, ReleaseLeaf):
        return [(node.release,)]
    if isinstance(node, Xor):
        return _sigma(node.left) + _sigma(node.right)
    lefts = _sigma(node.left)
    rights = _sigma(node.right)
    if isinstance(node, Seq):
        return [l + r for l in lefts for r in rights]
    out: list[Sequence] = []
    for l in lefts:
        for r in rights:
            out.extend(_shuffles(l, r))
    return out


def _shuffles(x: Sequence, y: Sequence) -> list[Sequence]:
    if not x:
        return [y]
    if not y:
        return [x]
    return [(x[0], *s) for s in _shuffles(x[1:], y)] + [
        (y[0], *s) for s in _shuffles(x, y[1:])
    ]


def sigma(node: CompositionNode, cap: int | None = DEFAULT_ORACLE_CAP) -> list[Sequence]:
    """All execution sequences of the workflow, canonically ordered."""
    total = sigma_count(node)
    if cap is not None and total > cap:
        raise SizeLimit(f"{total} execution sequences exceed cap {cap}", total, cap)
    index = {e: i for i, e in enumerate(element_order(node))}
    seqs = _sigma(node)
    seqs.sort(key=lambda s: tuple(index[x] for x in s))
    return seqs


def constraint_cost(sequence: Sequence, plan: Plan, schema: Schema) -> int:
    """Total constraint violation cost of a plan on one sequence.

    Subscopes are carved directly out of the sequence: the spans between
    consecutive release points of each constraint, restricted to its scope.
    """
    release_set = set(schema.releases)
    total = 0
    for c in schema.constraints:
        bound, k = c.bound()
        wanted = set(c.release)
        segments: list[list[str]] = [[]]
        for x in sequence:
            if x in wanted:
                segments.append([])
            elif x not in release_set:
                segments[-1].append(x)
        scope = set(c.scope)
        for segment in segments:
            sub = [s for s in segment if s in scope]
            threshold = restricted_threshold(
                bound, k, len(c.scope), len(sub), len(schema.users)
            )
            if threshold is None:
                continue
            distinct = len({plan[s] for s in sub})
            total += c.weight * violation_units(bound, threshold, distinct)
    return total


def authorization_cost(sequence: Sequence, plan: Plan, schema: Schema) -> int:
    release_set = set(schema.releases)
    return sum(
        schema.penalty(s)
        for s in sequence
        if s not in release_set and not schema.authorized(s, plan[s])
    )


def plan_cost(sequence: Sequence, plan: Plan, schema: Schema) -> int:
    """w(sequence, plan): constraint plus authorization violation cost."""
    return constraint_cost(sequence, plan, schema) + authorization_cost(
        sequence, plan, schema
    )


@dataclass(frozen=True)
class OracleSolution:
    plan: Plan
    constraint_weight: int
    authorization_weight: int

    @property
    def total(self) -> int:
        return self.constraint_weight + self.authorization_weight


def oracle_min_cost_sequence(
    sequence: Sequence, schema: Schema, cap: int | None = DEFAULT_ORACLE_CAP
) -> OracleSolution:
    """Exact minimum over every one of the |U|^|steps| plans.

    The witness is the lexicographically first minimizing plan by user
    index, steps in sequence order.
    """
    release_set = set(schema.releases)
    steps = [s for s in sequence if s not in release_set]
    if steps and not schema.users:
        raise ValueError("no users: no plan exists for a non-empty sequence")
    total_plans = len(schema.users) ** len(steps)
    if cap is not None and total_plans > cap:
        raise SizeLimit(f"{total_plans} plans exceed cap {cap}", total_plans, cap)
    best_cost: int | None = None
    best_plan: Plan = {}
    for assignment in itertools.product(schema.users, repeat=len(steps)):
        plan = dict(zip(steps, assignment))
        cost = plan_cost(sequence, plan, schema)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_plan = plan
    assert best_cost is not None
    aw = authorization_cost(sequence, best_plan, schema)
    return OracleSolution(best_plan, best_cost - aw, aw)


def class_key(sequence: Sequence, schema: Schema):
    """Compact representation of the sequence's equivalence class.

    Derived from the sequence alone: the release order plus, per span
    between consecutive release points, the (canonically sorted) steps.
    """
    release_set = set(schema.releases)
    release_order = tuple(x for x in sequence if x in release_set)
    slots: list[list[str]] = [[]]
    for x in sequence:
        if x in release_set:
            slots.append([])
        else:
            slots[-1].append(x)
    return release_order, tuple(schema.sort_canonical(slot) for slot in slots)


@dataclass
class OracleClass:
    release_order: tuple[str, ...]
    slots: tuple[tuple[str, ...], ...]
    sequences: list[Sequence]
    min_costs: list[int]

    @property
    def count(self) -> int:
        return len(self.sequences)

    @property
    def min_cost(self) -> int:
        return self.min_costs[0]


@dataclass
class OracleReport:
    """Literal per-sequence decisions, plus the class grouping for cross-checks."""

    sequences: list[Sequence]
    min_costs: list[int]
    classes: list[OracleClass]
    budget: Fraction | None
    probability: Fraction | None

    @property
    def total_sequences(self) -> int:
        return len(self.sequences)

    @property
    def max_cost(self) -> int:
        return max(self.min_costs)

    @property
    def expected_cost(self) -> Fraction:
        return Fraction(sum(self.min_costs), len(self.min_costs))

    @property
    def strong(self) -> bool:
        return all(c == 0 for c in self.min_costs)

    @property
    def bounded(self) -> bool | None:
        if self.budget is None:
            return None
        return all(c <= self.budget for c in self.min_costs)

    @property
    def expected(self) -> bool | None:
        if self.budget is None:
            return None
        return sum(self.min_costs) <= self.budget * len(self.min_costs)

    @property
    def within_budget(self) -> int | None:
        if self.budget is None:
            return None
        return sum(1 for c in self.min_costs if c <= self.budget)

    @property
    def approx(self) -> bool | None:
        if self.budget is None or self.probability is None:
            return None
        return self.within_budget >= self.probability * len(self.min_costs)


def oracle_decide(
    schema: Schema,
    budget=None,
    probability=None,
    cap: int | None = DEFAULT_ORACLE_CAP,
) -> OracleReport:
    """Decide every problem by direct summation over all sequences."""
    seqs = sigma(schema.workflow, cap)
    min_costs = [oracle_min_cost_sequence(s, schema, cap).total for s in seqs]

    grouped: dict = {}
    for s, cost in zip(seqs, min_costs):
        key = class_key(s, schema)
        if key not in grouped:
            grouped[key] = OracleClass(key[0], key[1], [], [])
        grouped[key].sequences.append(s)
        grouped[key].min_costs.append(cost)

    return OracleReport(
        sequences=seqs,
        min_costs=min_costs,
        classes=list(grouped.values()),
        budget=None if budget is None else Fraction(budget),
        probability=None if probability is None else Fraction(probability),
    )
