"""Cross-check the pattern solver against the brute-force oracle.

The oracle knows nothing about arrangements or patterns: it generates
every execution sequence straight from the sequence algebra and tries
every plan.  On small instances both sides must agree exactly; this is
the evidence behind the fast pipeline.
"""

from fractions import Fraction

from wfsat import Schema, WeightedConstraint, analyze, par, seq, step, release, xor
from wfsat.oracle import oracle_decide

schema = Schema(
    workflow=seq(
        step("draft"),
        par(seq(xor(step("review_a"), step("review_b")), release("signoff")), step("invoice")),
        step("archive"),
    ),
    users=("alice", "bob", "carol"),
    authorizations={
        "draft": frozenset(("alice",)),
        "review_a": frozenset(("bob", "carol")),
        "review_b": frozenset(("carol",)),
        "invoice": frozenset(("alice",)),
        "archive": frozenset(("bob", "carol")),
    },
    default_unauth_penalty=6,
    constraints=(
        WeightedConstraint(id="draft_review", kind="sod", scope=("draft", "review_a"), weight=3),
        WeightedConstraint(
            id="draft_invoice", kind="sod", scope=("draft", "invoice"),
            release=("signoff",), weight=4,
        ),
        WeightedConstraint(
            id="spread_work", kind="atleast", scope=("draft", "invoice", "archive"),
            k=3, weight=2,
        ),
    ),
)

analysis = analyze(schema)
oracle = oracle_decide(schema, budget=Fraction(2), probability=Fraction(1, 2))

print("pipeline arrangements (count, min cost):")
for record in analysis.records:
    slots = " | ".join("{" + ", ".join(s) + "}" for s in record.arrangement.slots)
    print(f"  [{slots}] -> ({record.count}, {record.min_cost})")

print("\noracle classes (count, min cost):")
for cls in oracle.classes:
    slots = " | ".join("{" + ", ".join(s) + "}" for s in cls.slots)
    print(f"  [{slots}] -> ({cls.count}, {cls.min_cost})")

pipeline = {
    (r.arrangement.release_order, tuple(frozenset(s) for s in r.arrangement.slots)): (r.count, r.min_cost)
    for r in analysis.records
}
brute = {
    (c.release_order, tuple(frozenset(s) for s in c.slots)): (c.count, c.min_cost)
    for c in oracle.classes
}
print(f"\nagreement on all {len(brute)} classes: {pipeline == brute}")
print(f"expected cost, both ways: {analysis.expected_cost} == {oracle.expected_cost}")
print(f"P(cost <= 2) >= 1/2: {oracle.approx}")
