"""Reading, writing and exporting schema instance files.

The on-disk format is JSON (see README).  Parsing validates the schema
and fails loudly; writing emits a canonical form: n-ary composition
lists, sorted object keys, authorization lists in user order, scopes in
workflow order, and exact rationals rendered as "p" or "p/q" strings.
One parse/write pass canonicalizes any valid file byte-stably.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import SchemaSemanticError, SchemaSyntaxError
from .model import (
    CompositionNode,
    Par,
    ReleaseLeaf,
    Schema,
    Seq,
    StepLeaf,
    WeightedConstraint,
    Xor,
    element_order,
    par,
    seq,
    validate_schema,
    xor,
)

_ID_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

_NODE_OPS = {"seq": seq, "par": par, "xor": xor}

_TOP_KEYS = {
    "workflow",
    "users",
    "authorizations",
    "default_unauth_penalty",
    "step_unauth_penalty",
    "constraints",
    "budget",
    "probability",
}


def canonical_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def parse_ccws(text: str) -> Schema:
    """Parse an instance document into a validated Schema."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaSyntaxError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(doc, dict):
        raise SchemaSyntaxError("instance document must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise SchemaSyntaxError(f"unknown keys: {', '.join(sorted(unknown))}")
    for key in ("workflow", "users", "authorizations", "default_unauth_penalty", "constraints"):
        if key not in doc:
            raise SchemaSyntaxError(f"missing required key {key!r}")

    workflow = _parse_node(doc["workflow"], "workflow")
    users = _parse_id_list(doc["users"], "users")
    authorizations = _parse_authorizations(doc["authorizations"])
    penalty = _parse_int(doc["default_unauth_penalty"], "default_unauth_penalty")
    step_penalty = {}
    for s, p in _expect(doc.get("step_unauth_penalty", {}), dict, "step_unauth_penalty").items():
        step_penalty[_parse_id(s, "step_unauth_penalty key")] = _parse_int(p, f"step_unauth_penalty.{s}")
    constraints = tuple(
        _parse_constraint(c, f"constraints[{i}]")
        for i, c in enumerate(_expect(doc["constraints"], list, "constraints"))
    )
    budget = _parse_rational(doc.get("budget"), "budget")
    probability = _parse_rational(doc.get("probability"), "probability")

    schema = Schema(
        workflow=workflow,
        users=users,
        authorizations=authorizations,
        default_unauth_penalty=penalty,
        step_unauth_penalty=step_penalty,
        constraints=constraints,
        budget=budget,
        probability=probability,
    )
    violations = validate_schema(schema)
    if violations:
        raise SchemaSemanticError(violations)
    return schema


def load_schema(path) -> Schema:
    with open(path, encoding="utf-8") as fh:
        return parse_ccws(fh.read())


def write_ccws(schema: Schema) -> str:
    """Canonical serialization of a valid schema."""
    doc = {
        "workflow": _node_doc(schema.workflow),
        "users": list(schema.users),
        "authorizations": {
            s: sorted(granted, key=schema.user_index.__getitem__)
            for s, granted in schema.authorizations.items()
        },
        "default_unauth_penalty": schema.default_unauth_penalty,
        "constraints": [_constraint_doc(c, schema) for c in schema.constraints],
    }
    if schema.step_unauth_penalty:
        doc["step_unauth_penalty"] = dict(schema.step_unauth_penalty)
    if schema.budget is not None:
        doc["budget"] = str(schema.budget)
    if schema.probability is not None:
        doc["probability"] = str(schema.probability)
    return canonical_json(doc)


def save_schema(schema: Schema, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_ccws(schema))


# -- parsing helpers --------------------------------------------------------


def _expect(value, kind, path: str):
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaSyntaxError(f"expected {kind.__name__}", path)
    return value


def _parse_id(value, path: str) -> str:
    if not isinstance(value, str) or not _ID_RE.match(value):
        raise SchemaSyntaxError(f"not an ASCII identifier: {value!r}", path)
    return value


def _parse_id_list(value, path: str) -> tuple[str, ...]:
    return tuple(
        _parse_id(v, f"{path}[{i}]") for i, v in enumerate(_expect(value, list, path))
    )


def _parse_int(value, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaSyntaxError("expected an integer", path)
    return value


def _parse_rational(value, path: str) -> Fraction | None:
    if value is None:
        return None
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaSyntaxError(f'not a rational "p" or "p/q": {value!r}', path) from exc
    raise SchemaSyntaxError("expected a rational string", path)


def _parse_node(obj, path: str) -> CompositionNode:
    obj = _expect(obj, dict, path)
    if len(obj) != 1:
        raise SchemaSyntaxError(
            "node must have exactly one of: step, release, seq, par, xor", path
        )
    ((kind, value),) = obj.items()
    if kind == "step":
        return StepLeaf(_parse_id(value, f"{path}.step"))
    if kind == "release":
        return ReleaseLeaf(_parse_id(value, f"{path}.release"))
    op = _NODE_OPS.get(kind)
    if op is None:
        raise SchemaSyntaxError(f"unknown node kind {kind!r}", path)
    items = _expect(value, list, f"{path}.{kind}")
    if not items:
        raise SchemaSyntaxError("composition list must be non-empty", f"{path}.{kind}")
    return op(*(_parse_node(v, f"{path}.{kind}[{i}]") for i, v in enumerate(items)))


def _parse_authorizations(obj) -> dict[str, frozenset[str]]:
    out = {}
    for s, granted in _expect(obj, dict, "authorizations").items():
        key = _parse_id(s, "authorizations key")
        out[key] = frozenset(_parse_id_list(granted, f"authorizations.{s}"))
    return out


_CONSTRAINT_KEYS = {"id", "kind", "scope", "release", "weight", "k"}


def _parse_constraint(obj, path: str) -> WeightedConstraint:
    obj = _expect(obj, dict, path)
    unknown = set(obj) - _CONSTRAINT_KEYS
    if unknown:
        raise SchemaSyntaxError(f"unknown keys: {', '.join(sorted(unknown))}", path)
    for key in ("id", "kind", "scope", "weight"):
        if key not in obj:
            raise SchemaSyntaxError(f"missing required key {key!r}", path)
    kind = obj["kind"]
    if kind not in ("sod", "bod", "atmost", "atleast"):
        raise SchemaSyntaxError(f"unknown constraint kind {kind!r}", f"{path}.kind")
    if kind in ("atmost", "atleast"):
        if "k" not in obj:
            raise SchemaSyntaxError(f"{kind} requires k", path)
        k = _parse_int(obj["k"], f"{path}.k")
    else:
        if "k" in obj:
            raise SchemaSyntaxError(f"{kind} does not take k", path)
        k = None
    return WeightedConstraint(
        id=_parse_id(obj["id"], f"{path}.id"),
        kind=kind,
        scope=_parse_id_list(obj["scope"], f"{path}.scope"),
        release=_parse_id_list(obj.get("release", []), f"{path}.release"),
        weight=_parse_int(obj["weight"], f"{path}.weight"),
        k=k,
    )


# -- writing helpers --------------------------------------------------------


def _node_doc(node: CompositionNode):
    if isinstance(node, StepLeaf):
        return {"step": node.step}
    if isinstance(node, ReleaseLeaf):
        return {"release": node.release}
    kind = {Seq: "seq", Par: "par", Xor: "xor"}[type(node)]
    return {kind: [_node_doc(child) for child in _flatten(node, type(node))]}


def _flatten(node: CompositionNode, op) -> list[CompositionNode]:
    if isinstance(node, op):
        return _flatten(node.left, op) + _flatten(node.right, op)
    return [node]


def _constraint_doc(c: WeightedConstraint, schema: Schema):
    doc = {
        "id": c.id,
        "kind": c.kind,
        "scope": list(schema.sort_canonical(c.scope)),
        "release": list(schema.sort_canonical(c.release)),
        "weight": c.weight,
    }
    if c.k is not None:
        doc["k"] = c.k
    return doc


# -- DOT export -------------------------------------------------------------


def export_dot(node: CompositionNode) -> str:
    """Workflow DAG in DOT form, orchestration points re-materialized.

    Mirrors the usual drawing convention: a distinguished input/output
    pair wraps the workflow, every parallel and xor composition keeps its
    fork/join vertices, and orchestration points with a single neighbor
    on each side are contracted into edges.  Steps render as boxes,
    release points as circles, orchestration points unstyled.
    """
    vertices: list[tuple[str, str]] = []  # (name, kind) in creation order
    edges: set[tuple[str, str]] = set()
    counters = {"par": 0, "xor": 0, "leaf": 0}
    taken = set(element_order(node))

    def unique(name: str) -> str:
        while name in taken:
            name += "_"
        taken.add(name)
        return name

    def fresh(kind: str) -> tuple[str, str]:
        counters[kind] += 1
        if kind == "leaf":
            return unique(f"__in_{counters['leaf']}"), unique(f"__out_{counters['leaf']}")
        n = counters[kind]
        return unique(f"alpha_{kind}_{n}"), unique(f"omega_{kind}_{n}")

    def build(nd: CompositionNode) -> tuple[str, str]:
        if isinstance(nd, (StepLeaf, ReleaseLeaf)):
            name = nd.step if isinstance(nd, StepLeaf) else nd.release
            kind = "step" if isinstance(nd, StepLeaf) else "release"
            a, o = fresh("leaf")
            vertices.append((a, "orch"))
            vertices.append((name, kind))
            vertices.append((o, "orch"))
            edges.add((a, name))
            edges.add((name, o))
            return a, o
        if isinstance(nd, Seq):
            i1, o1 = build(nd.left)
            i2, o2 = build(nd.right)
            edges.add((o1, i2))
            return i1, o2
        kind = "par" if isinstance(nd, Par) else "xor"
        a, o = fresh(kind)
        vertices.append((a, "orch"))
        i1, o1 = build(nd.left)
        i2, o2 = build(nd.right)
        vertices.append((o, "orch"))
        edges.add((a, i1))
        edges.add((a, i2))
        edges.add((o1, o))
        edges.add((o2, o))
        return a, o

    outer_alpha = unique("alpha")
    outer_omega = unique("omega")
    vertices.append((outer_alpha, "orch"))
    inner_in, inner_out = build(node)
    vertices.append((outer_omega, "orch"))
    edges.add((outer_alpha, inner_in))
    edges.add((inner_out, outer_omega))

    # Contract orchestration vertices with one in- and one out-neighbor.
    keep = {outer_alpha, outer_omega}
    changed = True
    while changed:
        changed = False
        for name, kind in vertices:
            if kind != "orch" or name in keep:
                continue
            ins = [e for e in edges if e[1] == name]
            outs = [e for e in edges if e[0] == name]
            if len(ins) == 1 and len(outs) == 1:
                edges.discard(ins[0])
                edges.discard(outs[0])
                edges.add((ins[0][0], outs[0][1]))
                vertices.remove((name, kind))
                changed = True
                break

    shapes = {"step": " [shape=box]", "release": " [shape=circle]", "orch": ""}
    order = {name: i for i, (name, _) in enumerate(vertices)}
    lines = ["digraph workflow {"]
    for name, kind in vertices:
        lines.append(f'  "{name}"{shapes[kind]};')
    for src, dst in sorted(edges, key=lambda e: (order[e[0]], order[e[1]])):
        lines.append(f'  "{src}" -> "{dst}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
