"""Execution-sequence algebra for xor-free workflows.

An execution sequence is one possible total order of the steps and
release points of a workflow instance, i.e. a linear extension of the
instance's partial order.  Serial composition concatenates the sequence
sets of its sides, parallel composition interleaves them in every
order-preserving way.
"""

from __future__ import annotations

from math import comb

from .errors import NotInSequence, OverlapError, SizeLimit, XorPresent
from .model import (
    CompositionNode,
    Par,
    Poset,
    ReleaseLeaf,
    Seq,
    StepLeaf,
    element_order,
    is_xor_free,
)

Sequence = tuple[str, ...]

DEFAULT_SEQUENCE_CAP = 200_000
"""Guard for exhaustive generation; the algebra counts before it generates."""


def concat(a: Sequence, b: Sequence) -> Sequence:
    """a followed by b; operands must not share elements."""
    if set(a) & set(b):
        raise OverlapError(f"sequences share elements: {sorted(set(a) & set(b))}")
    return tuple(a) + tuple(b)


def interleave(a: Sequence, b: Sequence) -> list[Sequence]:
    """All order-preserving shuffles of a and b (C(|a|+|b|, |a|) of them)."""
    if set(a) & set(b):
        raise OverlapError(f"sequences share elements: {sorted(set(a) & set(b))}")

    def shuffle(x: Sequence, y: Sequence) -> list[Sequence]:
        if not x:
            return [tuple(y)]
        if not y:
            return [tuple(x)]
        return [(x[0], *s) for s in shuffle(x[1:], y)] + [
            (y[0], *s) for s in shuffle(x, y[1:])
        ]

    return shuffle(tuple(a), tuple(b))


def sequence_count(node: CompositionNode) -> int:
    """|Σ(node)| for an xor-free tree, computed without generating anything."""
    if isinstance(node, (StepLeaf, ReleaseLeaf)):
        return 1
    if isinstance(node, Seq):
        return sequence_count(node.left) * sequence_count(node.right)
    if isinstance(node, Par):
        nl = len(element_order(node.left))
        nr = len(element_order(node.right))
        return sequence_count(node.left) * sequence_count(node.right) * comb(nl + nr, nl)
    raise XorPresent("sequence_count requires an xor-free workflow")


def gen_sequences(
    node: CompositionNode, cap: int | None = DEFAULT_SEQUENCE_CAP
) -> list[Sequence]:
    """Every execution sequence of an xor-free tree, canonically ordered.

    The result is duplicate-free and sorted lexicographically by the
    canonical element index (left-to-right leaf order), so reports built
    from it are byte-reproducible.
    """
    if not is_xor_free(node):
        raise XorPresent("gen_sequences requires an xor-free workflow")
    total = sequence_count(node)
    if cap is not None and total > cap:
        raise SizeLimit(f"{total} execution sequences exceed cap {cap}", total, cap)

    def gen(nd: CompositionNode) -> list[Sequence]:
        if isinstance(nd, StepLeaf):
            return [(nd.step,)]
        if isinstance(nd, ReleaseLeaf):
            return [(nd.release,)]
        lefts = gen(nd.left)
        rights = gen(nd.right)
        if isinstance(nd, Seq):
            return [l + r for l in lefts for r in rights]
        out: list[Sequence] = []
        for l in lefts:
            for r in rights:
                out.extend(interleave(l, r))
        return out

    index = {e: i for i, e in enumerate(element_order(node))}
    seqs = gen(node)
    seqs.sort(key=lambda s: tuple(index[x] for x in s))
    return seqs


def left(sequence: Sequence, v: str) -> Sequence:
    """Prefix of the sequence strictly before v."""
    return sequence[: _position(sequence, v)]


def right(sequence: Sequence, v: str) -> Sequence:
    """Suffix of the sequence strictly after v."""
    return sequence[_position(sequence, v) + 1 :]


def between(sequence: Sequence, u: str, v: str) -> Sequence:
    """Infix strictly between u and v; u must occur before v."""
    i = _position(sequence, u)
    j = _position(sequence, v)
    if i >= j:
        raise NotInSequence(f"{u} does not precede {v} in the sequence")
    return sequence[i + 1 : j]


def _position(sequence: Sequence, v: str) -> int:
    try:
        return sequence.index(v)
    except ValueError:
        raise NotInSequence(f"{v} does not occur in the sequence") from None


def equivalent(a: Sequence, b: Sequence, releases) -> bool:
    """Whether two sequences of one schema lie in the same arrangement.

    True iff they order the same release points identically, execute the
    same steps, and every shared step sees the same set of release points
    to its right.
    """
    rel = set(releases)
    if tuple(x for x in a if x in rel) != tuple(x for x in b if x in rel):
        return False
    steps_a = frozenset(x for x in a if x not in rel)
    steps_b = frozenset(x for x in b if x not in rel)
    if steps_a != steps_b:
        return False
    return _releases_right(a, rel) == _releases_right(b, rel)


def _releases_right(sequence: Sequence, rel: set[str]) -> dict[str, frozenset[str]]:
    after: set[str] = set()
    out: dict[str, frozenset[str]] = {}
    for x in reversed(sequence):
        if x in rel:
            after.add(x)
        else:
            out[x] = frozenset(after)
    return out


def count_linear_extensions(poset: Poset, subset) -> int:
    """Exact number of linear extensions of the induced subposet.

    Dynamic programming over down-closed subsets: an element may be
    appended once all of its subset-predecessors are placed.  Exponential
    in |subset| in the worst case, which is fine at the intended scale
    (subsets are arrangement slots).
    """
    els = poset.sort_canonical(set(subset))
    n = len(els)
    if n == 0:
        return 1
    rows = [poset.index[e] for e in els]
    pred = []
    for j in rows:
        m = 0
        for bit, i in enumerate(rows):
            if poset.lt[i, j]:
                m |= 1 << bit
        pred.append(m)

    full = (1 << n) - 1
    memo: dict[int, int] = {full: 1}

    def extensions(placed: int) -> int:
        cached = memo.get(placed)
        if cached is not None:
            return cached
        total = 0
        remaining = full & ~placed
        rem = remaining
        while rem:
            low = rem & -rem
            rem ^= low
            i = low.bit_length() - 1
            if pred[i] & ~placed == 0:
                total += extensions(placed | low)
        memo[placed] = total
        return total

    return extensions(0)
