"""Machine-readable report construction for the command-line surface.

Reports are plain JSON-serializable dicts rendered through
:func:`wfsat.io.canonical_json`, so identical analyses produce identical
bytes regardless of worker count.  The shape is published as a JSON
Schema in ``report-schema.json`` next to this module.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .decisions import Analysis
from .oracle import OracleReport


def report_schema() -> dict:
    import json

    with resources.files("wfsat").joinpath("report-schema.json").open("rb") as fh:
        return json.load(fh)


def _rat(value) -> str | None:
    return None if value is None else str(Fraction(value))


def _choices(instance) -> dict[str, str]:
    return dict(instance.choices)


def arrangement_records(analysis: Analysis) -> list[dict]:
    out = []
    for record in analysis.records:
        instance = analysis.instances[record.instance_index]
        out.append(
            {
                "type": "arrangement",
                "instance": record.instance_index,
                "choices": _choices(instance),
                "release_order": list(record.arrangement.release_order),
                "slots": [list(slot) for slot in record.arrangement.slots],
                "count": record.count,
                "min_cost": record.min_cost,
                "constraint_cost": record.solution.constraint_weight,
                "authorization_cost": record.solution.authorization_weight,
                "witness": dict(record.solution.plan),
            }
        )
    return out


def analysis_totals(analysis: Analysis) -> dict:
    return {
        "instances": len(analysis.instances),
        "arrangements": len(analysis.records),
        "sequences": analysis.total_sequences,
    }


def analysis_aggregates(analysis: Analysis, budget: Fraction | None) -> dict:
    return {
        "max_cost": analysis.max_cost,
        "expected_cost": _rat(analysis.expected_cost),
        "within_budget": None if budget is None else analysis.within_budget(budget),
    }


def build_report(
    problem: str,
    *,
    records: list[dict],
    totals: dict,
    answer: bool | None = None,
    value=None,
    budget=None,
    probability=None,
    aggregates: dict | None = None,
    seconds: float | None = None,
) -> dict:
    report = {
        "problem": problem,
        "answer": answer,
        "value": _rat(value),
        "budget": _rat(budget),
        "probability": _rat(probability),
        "totals": totals,
        "aggregates": aggregates,
        "records": records,
    }
    if seconds is not None:
        report["timings"] = {"seconds": seconds}
    return report


def oracle_records(report: OracleReport) -> list[dict]:
    return [
        {
            "type": "class",
            "release_order": list(cls.release_order),
            "slots": [list(slot) for slot in cls.slots],
            "count": cls.count,
            "min_cost": cls.min_cost,
        }
        for cls in report.classes
    ]


def oracle_totals(report: OracleReport) -> dict:
    return {
        "instances": None,
        "arrangements": len(report.classes),
        "sequences": report.total_sequences,
    }


def oracle_aggregates(report: OracleReport) -> dict:
    return {
        "max_cost": report.max_cost,
        "expected_cost": _rat(report.expected_cost),
        "within_budget": report.within_budget,
    }
