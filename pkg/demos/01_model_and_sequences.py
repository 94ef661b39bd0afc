"""Build a purchase-order workflow and explore its execution sequences.

The workflow: create (s1) and approve (s2) a purchase order; then, in
parallel with creating the payment (s4), either sign and countersign the
goods-received note (s3; s5, high-value orders) or just sign it (s3p);
finally approve the payment (s6).
"""

from wfsat import (
    compile_poset,
    eliminate_xor,
    exclusive_pairs,
    gen_sequences,
    par,
    seq,
    step,
    xor,
)

workflow = seq(
    step("s1"),
    step("s2"),
    par(xor(seq(step("s3"), step("s5")), step("s3p")), step("s4")),
    step("s6"),
)

print("Exclusive step pairs (never in the same run):")
for pair in sorted(map(sorted, exclusive_pairs(workflow))):
    print(f"  {pair[0]} x {pair[1]}")

print("\nXor-free instances and their execution sequences:")
for i, instance in enumerate(eliminate_xor(workflow)):
    print(f"  instance {i}: steps {', '.join(instance.steps)}")
    for s in gen_sequences(instance.ast):
        print(f"    {' -> '.join(s)}")

upper = eliminate_xor(workflow)[0]
poset = compile_poset(upper.ast)
print("\nOrdering facts in the high-value instance:")
print("  s2 before s4:", poset.less("s2", "s4"))
print("  s4 and s5 comparable:", poset.comparable("s4", "s5"))
