"""Exact minimum-cost plan computation for one execution arrangement.

Constraints are decomposed at release points into release-free classical
constraints, then a single Valued WSP is solved over the arrangement's
steps.  Because every supported constraint is user-independent, plan cost
depends on the plan only through its kernel partition (which steps share
a user), so the solver enumerates set partitions in restricted-growth
order and completes each with an exact minimum-cost injective matching of
blocks to users.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import perm

import numpy as np
from scipy.optimize import linear_sum_assignment

from .arrangements import Arrangement
from .errors import TooManyBlocks
from .model import (
    Plan,
    Schema,
    WeightedConstraint,
    restricted_threshold,
    violation_units,
)

_BRUTE_FORCE_ASSIGNMENTS = 50_000
"""Below this many injective assignments, plain enumeration beats the hungarian
solver and yields the lexicographically first optimum for free."""


@dataclass(frozen=True)
class ClassicalConstraint:
    """A release-free cardinality bound on the users of a step set.

    Produced by restricting a weighted constraint to one subscope;
    ``origin`` records the parent constraint id and subscope index.
    """

    bound: str
    k: int
    scope: tuple[str, ...]
    weight: int
    origin: tuple[str, int]

    def key(self):
        return (self.bound, self.k, self.scope, self.weight)


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty blocks covering a step set, in restricted-growth order."""

    blocks: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class CostedPlan:
    plan: Plan
    constraint_weight: int
    authorization_weight: int

    @property
    def total(self) -> int:
        return self.constraint_weight + self.authorization_weight


def decompose_constraint(
    constraint: WeightedConstraint, arrangement: Arrangement, schema: Schema
) -> list[ClassicalConstraint]:
    """Split a constraint at its release points into classical constraints.

    The arrangement's slot structure fixes which steps fall between which
    consecutive release points of the constraint.  Release points absent
    from the instance are skipped; scope steps absent from the arrangement
    drop out by intersection; vacuous subscopes are omitted.
    """
    bound, k = constraint.bound()
    wanted = set(constraint.release)
    cut_after = [i for i, r in enumerate(arrangement.release_order) if r in wanted]

    segments: list[list[str]] = []
    start = 0
    for pos in cut_after:
        segments.append([s for slot in arrangement.slots[start : pos + 1] for s in slot])
        start = pos + 1
    segments.append([s for slot in arrangement.slots[start:] for s in slot])

    scope = set(constraint.scope)
    out: list[ClassicalConstraint] = []
    for i, segment in enumerate(segments):
        sub = [s for s in segment if s in scope]
        threshold = restricted_threshold(
            bound, k, len(constraint.scope), len(sub), len(schema.users)
        )
        if threshold is None:
            continue
        out.append(
            ClassicalConstraint(
                bound=bound,
                k=threshold,
                scope=schema.sort_canonical(sub),
                weight=constraint.weight,
                origin=(constraint.id, i),
            )
        )
    return out


def iter_partitions(items, max_blocks: int):
    """Set partitions of ``items`` with at most ``max_blocks`` blocks.

    Yields in lexicographic restricted-growth order: element i joins block
    ``digit[i]`` where digit 0..(current block count) and digit order is
    ascending, so the all-in-one-block partition comes first.
    """
    items = tuple(items)
    n = len(items)
    if n == 0:
        yield Partition(())
        return
    digits = [0] * n

    def rec(i: int, used: int):
        if i == n:
            blocks: list[list[str]] = [[] for _ in range(used)]
            for x, d in zip(items, digits):
                blocks[d].append(x)
            yield Partition(tuple(tuple(b) for b in blocks))
            return
        for d in range(min(used + 1, max_blocks)):
            digits[i] = d
            yield from rec(i + 1, max(used, d + 1))

    yield from rec(0, 0)


def pattern_constraint_weight(partition: Partition, constraints) -> int:
    """Total constraint violation cost of every plan with this kernel.

    User-independent constraints only see how many distinct blocks the
    scope touches, so the weight is a function of the partition alone.
    """
    block_of = {
        s: bi for bi, block in enumerate(partition.blocks) for s in block
    }
    total = 0
    for c in constraints:
        d = len({block_of[s] for s in c.scope})
        total += c.weight * violation_units(c.bound, c.k, d)
    return total


def min_auth_weight(partition: Partition, schema: Schema) -> tuple[int, tuple[str, ...]]:
    """Cheapest injective assignment of the blocks to distinct users.

    Assigning a user without authorization for a step costs that step's
    unauthorized penalty.  Ties resolve to the lexicographically smallest
    user-index vector over the blocks.
    """
    blocks = partition.blocks
    users = schema.users
    if len(blocks) > len(users):
        raise TooManyBlocks(f"{len(blocks)} blocks for {len(users)} users")
    if not blocks:
        return 0, ()
    cost = [
        [
            sum(schema.penalty(s) for s in block if not schema.authorized(s, u))
            for u in users
        ]
        for block in blocks
    ]
    if perm(len(users), len(blocks)) <= _BRUTE_FORCE_ASSIGNMENTS:
        best = None
        best_assign = None
        for assign in itertools.permutations(range(len(users)), len(blocks)):
            total = sum(cost[b][u] for b, u in enumerate(assign))
            if best is None or total < best:
                best = total
                best_assign = assign
        return best, tuple(users[u] for u in best_assign)
    return _hungarian_lex_min(cost, users)


def _hungarian_lex_min(cost, users) -> tuple[int, tuple[str, ...]]:
    matrix = np.array(cost, dtype=np.int64)
    rows, cols = linear_sum_assignment(matrix)
    optimum = int(matrix[rows, cols].sum())
    chosen: list[int] = []
    fixed_cost = 0
    free_cols = list(range(len(users)))
    for b in range(len(cost)):
        for u in free_cols:
            rest = matrix[np.ix_(range(b + 1, len(cost)), [c for c in free_cols if c != u])]
            remainder = 0
            if rest.size:
                r, c = linear_sum_assignment(rest)
                remainder = int(rest[r, c].sum())
            elif rest.shape[0]:
                continue  # rows left but no columns: infeasible branch
            if fixed_cost + int(matrix[b, u]) + remainder == optimum:
                chosen.append(u)
                fixed_cost += int(matrix[b, u])
                free_cols.remove(u)
                break
    return optimum, tuple(users[u] for u in chosen)


def solve_vwsp(
    steps, constraints, schema: Schema, stats: dict | None = None
) -> CostedPlan:
    """Globally minimum-cost plan over all assignments of ``steps`` to users.

    Every plan's kernel is one of the enumerated partitions; within a
    partition the constraint weight is constant and the matching is
    optimal, so the scan is exact.  The witness is canonical: first
    minimizing partition in restricted-growth order, then the matching
    tie-break.
    """
    steps = schema.sort_canonical(set(steps))
    if not steps:
        return CostedPlan({}, 0, 0)
    if not schema.users:
        raise TooManyBlocks("no users to assign")
    best: CostedPlan | None = None
    for partition in iter_partitions(steps, min(len(steps), len(schema.users))):
        if stats is not None:
            stats["partitions_visited"] = stats.get("partitions_visited", 0) + 1
        cw = pattern_constraint_weight(partition, constraints)
        if best is not None and cw >= best.total:
            continue
        aw, block_users = min_auth_weight(partition, schema)
        if best is None or cw + aw < best.total:
            plan = {
                s: u for block, u in zip(partition.blocks, block_users) for s in block
            }
            best = CostedPlan(plan, cw, aw)
    return best


class SolveCache:
    """Memo of component solutions, keyed by step set and constraint multiset.

    Entries are deterministic functions of their keys, so concurrent
    insertion from worker threads is harmless: any interleaving stores the
    same values.
    """

    def __init__(self):
        self._table: dict = {}
        self.hits = 0
        self.misses = 0

    def solve(self, steps, constraints, schema: Schema) -> CostedPlan:
        key = (tuple(steps), tuple(sorted(c.key() for c in constraints)))
        found = self._table.get(key)
        if found is not None:
            self.hits += 1
            return found
        self.misses += 1
        solution = solve_vwsp(steps, constraints, schema)
        self._table[key] = solution
        return solution


def min_cost_arrangement(
    arrangement: Arrangement, schema: Schema, cache: SolveCache | None = None
) -> CostedPlan:
    """Minimum total cost over all plans for the arrangement's steps.

    The decomposed constraints induce a graph joining steps that share a
    subscope; connected components interact through neither constraints
    nor the per-step additive authorization cost, so they are solved
    independently (and memoized) and their costs summed.
    """
    classical = [
        cc
        for c in schema.constraints
        for cc in decompose_constraint(c, arrangement, schema)
    ]
    steps = schema.sort_canonical(arrangement.step_set())

    parent = {s: s for s in steps}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cc in classical:
        anchor = cc.scope[0]
        for s in cc.scope[1:]:
            parent[find(s)] = find(anchor)

    components: dict[str, list[str]] = {}
    for s in steps:
        components.setdefault(find(s), []).append(s)
    ordered = sorted(components.values(), key=lambda c: schema.element_index[c[0]])

    plan: Plan = {}
    constraint_weight = 0
    authorization_weight = 0
    for component in ordered:
        member = set(component)
        local = [cc for cc in classical if cc.scope[0] in member]
        if cache is not None:
            solution = cache.solve(tuple(component), local, schema)
        else:
            solution = solve_vwsp(component, local, schema)
        plan.update(solution.plan)
        constraint_weight += solution.constraint_weight
        authorization_weight += solution.authorization_weight
    return CostedPlan(plan, constraint_weight, authorization_weight)
