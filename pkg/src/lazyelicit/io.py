"""CSV and JSON formats shared by the command line and the HTTP service.

Plan matrices travel as CSV with a ``plan_id`` column followed by one column
per attribute; attribute schemas, answer scripts, session snapshots and
reports travel as JSON.  All files are UTF-8 with '.' as the decimal
separator.
"""

from __future__ import annotations

import csv
import io as _io
import json
from typing import Any, Sequence

from .elicitation import (
    Answer,
    DirectRatioAnswer,
    ElicitationSession,
    FinalReport,
    MatchingValueAnswer,
    MergeRecord,
    ProbabilityAnswer,
    Question,
    StandardGambleQuestion,
    ValueMatchQuestion,
    render_question,
)
from .errors import DataFormatError
from .frontier import PlanMatrix, PlanRecord
from .utility import Attribute, SubutilityFunction

# --- attribute schema -------------------------------------------------------


def attributes_from_json(
    data: Any,
) -> tuple[tuple[Attribute, ...], tuple[SubutilityFunction, ...]]:
    """Parse an attribute schema: a list of objects with name, kind, anchors
    and a subutility of tabulated points or piecewise-linear breakpoints."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"attributes JSON is invalid: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise DataFormatError("attributes JSON must be a nonempty list")
    attributes: list[Attribute] = []
    subutilities: list[SubutilityFunction] = []
    for index, entry in enumerate(data):
        if not isinstance(entry, dict):
            raise DataFormatError(f"attribute #{index} is not an object")
        try:
            name = entry["name"]
            kind = entry["kind"]
            worst = entry["worst"]
            best = entry["best"]
            spec = entry["subutility"]
            form = spec["type"]
            points = [(value, utility) for value, utility in spec["points"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DataFormatError(f"attribute #{index} is malformed: {exc}") from exc
        attributes.append(
            Attribute(name=name, kind=kind, worst=worst, best=best, unit=entry.get("unit"))
        )
        subutilities.append(
            SubutilityFunction(owner=name, form=form, points=tuple(points))
        )
    return tuple(attributes), tuple(subutilities)


def load_attributes(path: str) -> tuple[tuple[Attribute, ...], tuple[SubutilityFunction, ...]]:
    with open(path, encoding="utf-8") as handle:
        return attributes_from_json(handle.read())


# --- plan matrix CSV --------------------------------------------------------


def plans_from_csv(
    text: str, attribute_names: Sequence[str] | None = None
) -> tuple[tuple[PlanRecord, ...], tuple[str, ...]]:
    """Parse a plan CSV; returns the plans and the attribute header order."""
    reader = csv.reader(_io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataFormatError("plan CSV is empty") from None
    if not header or header[0] != "plan_id":
        raise DataFormatError("plan CSV header must start with 'plan_id'")
    columns = tuple(name.strip() for name in header[1:])
    if not columns:
        raise DataFormatError("plan CSV has no attribute columns")
    if attribute_names is not None and tuple(attribute_names) != columns:
        raise DataFormatError(
            f"plan CSV columns {list(columns)} do not match attributes {list(attribute_names)}"
        )
    plans: list[PlanRecord] = []
    for row_number, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(columns) + 1:
            raise DataFormatError(
                f"plan CSV row {row_number} has {len(row)} cells, expected {len(columns) + 1}"
            )
        try:
            values = tuple(float(cell) for cell in row[1:])
        except ValueError as exc:
            raise DataFormatError(f"plan CSV row {row_number}: {exc}") from exc
        plans.append(PlanRecord(id=len(plans), label=row[0], w=values))
    if not plans:
        raise DataFormatError("plan CSV contains no plans")
    return tuple(plans), columns


def load_plans(
    path: str, attribute_names: Sequence[str] | None = None
) -> tuple[tuple[PlanRecord, ...], tuple[str, ...]]:
    with open(path, encoding="utf-8") as handle:
        return plans_from_csv(handle.read(), attribute_names)


def plans_from_json(data: Any) -> tuple[PlanRecord, ...]:
    """Parse inline plans: a list of {label, w} objects."""
    if not isinstance(data, list) or not data:
        raise DataFormatError("inline plans must be a nonempty list")
    plans = []
    for index, entry in enumerate(data):
        if not isinstance(entry, dict) or "w" not in entry:
            raise DataFormatError(f"plan #{index} must be an object with a 'w' vector")
        try:
            w = tuple(float(x) for x in entry["w"])
        except (TypeError, ValueError) as exc:
            raise DataFormatError(f"plan #{index}: {exc}") from exc
        plans.append(PlanRecord(id=index, label=str(entry.get("label", index)), w=w))
    return tuple(plans)


# --- answers ----------------------------------------------------------------


def answer_to_dict(answer: Answer) -> dict:
    if isinstance(answer, ProbabilityAnswer):
        return {"type": "probability", "p": answer.p}
    if isinstance(answer, MatchingValueAnswer):
        return {"type": "matching_value", "value": answer.value}
    if isinstance(answer, DirectRatioAnswer):
        return {
            "type": "direct_ratio",
            "ratio": answer.ratio,
            "pair": list(answer.pair) if answer.pair is not None else None,
        }
    raise DataFormatError(f"unknown answer type {type(answer).__name__}")


def answer_from_dict(data: Any) -> Answer:
    if not isinstance(data, dict) or "type" not in data:
        raise DataFormatError("an answer must be an object with a 'type' field")
    kind = data["type"]
    try:
        if kind == "probability":
            return ProbabilityAnswer(p=float(data["p"]))
        if kind == "matching_value":
            return MatchingValueAnswer(value=data["value"])
        if kind == "direct_ratio":
            pair = data.get("pair")
            return DirectRatioAnswer(
                ratio=float(data["ratio"]),
                pair=tuple(pair) if pair is not None else None,
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"malformed {kind} answer: {exc}") from exc
    raise DataFormatError(f"unknown answer type {kind!r}")


def answers_from_json(text: str) -> tuple[Answer, ...]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"answers JSON is invalid: {exc}") from exc
    if not isinstance(data, list):
        raise DataFormatError("answers JSON must be a list")
    return tuple(answer_from_dict(entry) for entry in data)


def load_answers(path: str) -> tuple[Answer, ...]:
    with open(path, encoding="utf-8") as handle:
        return answers_from_json(handle.read())


# --- questions, sessions, reports -------------------------------------------


def question_to_dict(question: Question) -> dict:
    if isinstance(question, StandardGambleQuestion):
        return {
            "kind": question.kind,
            "target": question.target,
            "best_outcome": [[name, value] for name, value in question.best_outcome],
            "worst_outcome": [[name, value] for name, value in question.worst_outcome],
            "certain_outcome": [[name, value] for name, value in question.certain_outcome],
            "text": render_question(question),
        }
    if isinstance(question, ValueMatchQuestion):
        return {
            "kind": question.kind,
            "pair": list(question.pair),
            "probe_attribute": question.probe_attribute,
            "match_attribute": question.match_attribute,
            "probe_value": question.probe_value,
            "probe_utility": question.probe_utility,
            "text": render_question(question),
        }
    raise DataFormatError(f"unknown question type {type(question).__name__}")


def merge_record_to_dict(record: MergeRecord) -> dict:
    return {
        "absorbed": record.absorbed_label,
        "surviving": record.surviving_label,
        "absorbed_index": record.absorbed_index,
        "surviving_index": record.surviving_index,
        "absorbed_representative": record.absorbed_representative,
        "surviving_representative": record.surviving_representative,
        "ratio": record.ratio,
        "result_label": record.result_label,
        "answers": [answer_to_dict(a) for a in record.answers],
    }


def session_to_dict(session: ElicitationSession) -> dict:
    return {
        "status": session.status,
        "columns": [
            {
                "label": column.label,
                "members": list(column.members),
                "ratio_tree": column.merge_tree,
            }
            for column in session.matrix.columns
        ],
        "frontier": list(session.frontier.surviving),
        "history": [merge_record_to_dict(r) for r in session.history],
        "pending_question": (
            question_to_dict(session.pending) if session.pending is not None else None
        ),
        "assessed_coefficients": session.assessed_coefficients,
    }


def plans_to_list(matrix: PlanMatrix) -> list[dict]:
    return [
        {"id": plan.id, "label": plan.label, "w": list(plan.w)} for plan in matrix.plans
    ]


def final_report_to_dict(report: FinalReport) -> dict:
    return {
        "surviving": list(report.surviving),
        "surviving_labels": list(report.surviving_labels),
        "history": [merge_record_to_dict(r) for r in report.history],
        "assessed_coefficients": dict(report.assessed_coefficients),
        "full_weights": dict(report.full_weights) if report.full_weights else None,
        "warning": report.warning,
        "answers": [answer_to_dict(a) for a in report.answers],
        "status": report.status,
    }


def dump_json(data: Any) -> str:
    """Deterministic JSON rendering used for every report artifact."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def anytime_rows_to_csv(rows: Sequence[tuple[int, str, float, int]]) -> str:
    buffer = _io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["merge_count", "strategy", "mean_frontier_size", "trials"])
    for merge_count, strategy, size, trials in rows:
        writer.writerow([merge_count, strategy, repr(float(size)), trials])
    return buffer.getvalue()
