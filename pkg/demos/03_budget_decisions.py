"""Budgeted decisions: strong satisfiability, bounded and expected cost.

All aggregates are exact rationals, so threshold comparisons like
"is the mean cost at most 25/7" never suffer float rounding.
"""

from fractions import Fraction
from pathlib import Path

from wfsat import (
    analyze,
    check_approx,
    check_bounded_cost,
    check_expected_cost,
    check_strong_sat,
    load_schema,
    min_budget_bounded,
    min_budget_expected,
)

fixture = Path(__file__).parent.parent / "tests" / "fixtures" / "purchase_order_restricted.json"
schema = load_schema(fixture)
analysis = analyze(schema)

strong, failing = check_strong_sat(analysis)
print(f"strongly satisfiable: {strong}")
if failing is not None:
    slots = " | ".join("{" + ", ".join(s) + "}" for s in failing.arrangement.slots)
    print(f"  first failing arrangement: [{slots}] at cost {failing.min_cost}")

print(f"\n{analysis.total_sequences} execution sequences across {len(analysis.records)} arrangements")
print(f"smallest budget bounding every sequence:   {min_budget_bounded(analysis)}")
print(f"smallest budget bounding the expected cost: {min_budget_expected(analysis)}")

print("\nbudget B -> bounded / expected / P(within B) >= 2/7 ?")
for budget in (0, 3, Fraction(25, 7), 4, 5):
    row = (
        check_bounded_cost(analysis, budget),
        check_expected_cost(analysis, budget),
        check_approx(analysis, budget, Fraction(2, 7)),
    )
    print(f"  B = {str(budget):>4}: {row[0]!s:>5} / {row[1]!s:>5} / {row[2]}")

print("\nfraction of sequences completing within budget 0:")
covered = analysis.within_budget(Fraction(0))
print(f"  {covered}/{analysis.total_sequences} = {Fraction(covered, analysis.total_sequences)}")
