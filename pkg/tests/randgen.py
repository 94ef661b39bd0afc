"""Deterministic random schema generation for property and sweep tests.

Everything is driven by a seeded ``random.Random`` so the corpus is
identical on every run.  Generated schemas always satisfy the model
invariants (validated before return) and are kept at oracle scale: the
total brute-force effort per schema (sequences times plans) is bounded
so exhaustive cross-checks stay fast.
"""

from __future__ import annotations

import random

from wfsat.model import (
    Schema,
    WeightedConstraint,
    exclusive_pairs,
    par,
    release,
    release_ids,
    seq,
    step,
    step_ids,
    validate_schema,
    xor,
)
from wfsat.oracle import sigma

ORACLE_BUDGET = 40_000
"""Max sum over sequences of |U|^(steps in sequence) for one schema."""


def random_tree(rng: random.Random, n_steps: int, n_releases: int, n_xors: int):
    """Random binary composition tree over fresh step/release leaves."""
    pool = [step(f"s{i + 1}") for i in range(n_steps)]
    pool += [release(f"r{i + 1}") for i in range(n_releases)]
    rng.shuffle(pool)
    n_combines = len(pool) - 1
    xor_rounds = set(rng.sample(range(n_combines), min(n_xors, n_combines)))
    for round_no in range(n_combines):
        i = rng.randrange(len(pool))
        a = pool.pop(i)
        j = rng.randrange(len(pool))
        b = pool.pop(j)
        op = xor if round_no in xor_rounds else rng.choice((seq, par))
        pool.append(op(a, b))
    return pool[0]


def _random_constraints(rng: random.Random, tree, n_constraints: int):
    steps = list(step_ids(tree))
    exclusive = exclusive_pairs(tree)
    out = []
    if len(steps) < 2:
        return ()
    for i in range(n_constraints):
        for _ in range(20):
            kind = rng.choice(("sod", "bod", "atmost", "atleast"))
            size = 2 if kind in ("sod", "bod") else rng.randint(2, min(3, len(steps)))
            scope = rng.sample(steps, size)
            if any(
                frozenset((a, b)) in exclusive
                for x, a in enumerate(scope)
                for b in scope[x + 1 :]
            ):
                continue
            k = rng.randint(1, size) if kind in ("atmost", "atleast") else None
            release_pool = sorted(release_ids(tree))
            chosen = (
                rng.sample(release_pool, rng.randint(0, len(release_pool)))
                if release_pool
                else []
            )
            out.append(
                WeightedConstraint(
                    id=f"c{i + 1}",
                    kind=kind,
                    scope=tuple(scope),
                    release=tuple(sorted(chosen)),
                    weight=rng.randint(1, 5),
                    k=k,
                )
            )
            break
    return tuple(out)


def random_schema(
    seed: int,
    max_steps: int = 6,
    max_users: int = 4,
    max_releases: int = 2,
    max_xors: int = 2,
    max_constraints: int = 4,
    max_effort: int | None = ORACLE_BUDGET,
) -> Schema:
    """One deterministic random schema at oracle scale."""
    for attempt in range(1000):
        rng = random.Random(seed * 100_003 + attempt)
        n_steps = rng.randint(1, max_steps)
        n_releases = rng.randint(0, max_releases)
        n_xors = rng.randint(0, max_xors)
        tree = random_tree(rng, n_steps, n_releases, n_xors)
        users = tuple(f"u{i + 1}" for i in range(rng.randint(1, max_users)))
        if max_effort is not None:
            try:
                seqs = sigma(tree, cap=100)
            except Exception:
                continue
            releases = set(release_ids(tree))
            effort = sum(
                len(users) ** sum(1 for x in s if x not in releases) for s in seqs
            )
            if effort > max_effort:
                continue
        authorizations = {
            s: frozenset(rng.sample(users, rng.randint(1, len(users))))
            for s in step_ids(tree)
        }
        schema = Schema(
            workflow=tree,
            users=users,
            authorizations=authorizations,
            default_unauth_penalty=rng.randint(1, 10),
            step_unauth_penalty={
                s: rng.randint(1, 10)
                for s in step_ids(tree)
                if rng.random() < 0.2
            },
            constraints=_random_constraints(rng, tree, rng.randint(0, max_constraints)),
        )
        if not validate_schema(schema):
            return schema
    raise RuntimeError(f"could not generate a schema for seed {seed}")


def corpus(n: int, seed_base: int = 0, **kwargs) -> list[Schema]:
    return [random_schema(seed_base + i, **kwargs) for i in range(n)]
