"""Lazy elicitation sessions: filter plans, ask for tradeoffs, merge, repeat.

A session alternates between pruning the plan matrix to its efficient frontier
and acquiring one tradeoff ratio for the currently most conflicting pair of
columns.  Discrete attributes are assessed with two standard-gamble questions
whose indifference probabilities are the scaling constants; pairs of
continuous attributes can use a single value-matching question instead.  Every
operation returns a fresh session value, so callers can hold snapshots safely.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence, Union

from .errors import (
    DimensionMismatchError,
    EvaluationError,
    InvalidAnswerError,
    SessionStateError,
    UndefinedRatioError,
)
from .frontier import (
    ColumnDescriptor,
    FrontierResult,
    PlanMatrix,
    PlanRecord,
    efficient_frontier,
    most_conflicting_pair,
)
from .utility import Attribute, SubutilityFunction, Value, check_anchoring

STATUS_ACTIVE = "active"
STATUS_AWAITING = "awaiting-answer"
STATUS_DONE = "done"

PROBE_UTILITY_FLOOR = 1e-9

OutcomeSpec = tuple[tuple[str, Value], ...]


@dataclass(frozen=True)
class StandardGambleQuestion:
    """Indifference probability between a best/worst lottery and a certain outcome.

    The certain outcome is best on the target attribute and worst everywhere
    else, so the answered probability equals the target's scaling constant.
    """

    target: str
    best_outcome: OutcomeSpec
    worst_outcome: OutcomeSpec
    certain_outcome: OutcomeSpec

    kind = "standard_gamble"


@dataclass(frozen=True)
class ValueMatchQuestion:
    """Matching value on one attribute indifferent to a probe on another.

    Applicable only when both attributes are continuous and the probe has
    strictly positive subutility; the answer reveals the tradeoff ratio
    between the two scaling constants.
    """

    pair: tuple[int, int]
    probe_attribute: str
    match_attribute: str
    probe_value: float
    probe_utility: float

    kind = "value_match"

    def __post_init__(self) -> None:
        if self.probe_utility <= 0.0:
            raise ValueError("value-match probe must carry positive subutility")


Question = Union[StandardGambleQuestion, ValueMatchQuestion]


@dataclass(frozen=True)
class ProbabilityAnswer:
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", float(self.p))
        if not 0.0 <= self.p <= 1.0:
            raise InvalidAnswerError(f"probability {self.p} is outside [0, 1]")


@dataclass(frozen=True)
class MatchingValueAnswer:
    value: Value


@dataclass(frozen=True)
class DirectRatioAnswer:
    """A tradeoff ratio volunteered for an explicit column pair."""

    ratio: float
    pair: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "ratio", float(self.ratio))
        if self.ratio <= 0.0:
            raise InvalidAnswerError(f"tradeoff ratio {self.ratio} must be positive")
        if self.pair is not None:
            object.__setattr__(self, "pair", (int(self.pair[0]), int(self.pair[1])))


Answer = Union[ProbabilityAnswer, MatchingValueAnswer, DirectRatioAnswer]


@dataclass(frozen=True)
class MergeRecord:
    absorbed_label: str
    surviving_label: str
    absorbed_index: int
    surviving_index: int
    absorbed_representative: str
    surviving_representative: str
    ratio: float
    result_label: str
    answers: tuple[Answer, ...]


@dataclass(frozen=True)
class FinalReport:
    surviving: tuple[int, ...]
    surviving_labels: tuple[str, ...]
    history: tuple[MergeRecord, ...]
    assessed_coefficients: Mapping[str, float]
    full_weights: Mapping[str, float] | None
    warning: str | None
    answers: tuple[Answer, ...]
    status: str


@dataclass(frozen=True)
class ElicitationSession:
    attributes: tuple[Attribute, ...]
    subutilities: tuple[SubutilityFunction, ...]
    matrix: PlanMatrix
    frontier: FrontierResult
    epsilon: float = 0.0
    history: tuple[MergeRecord, ...] = ()
    answer_log: tuple[Answer, ...] = ()
    eliminations: tuple[tuple[int, int], ...] = ()
    pending: Question | None = None
    active_pair: tuple[int, int] | None = None
    pair_coefficients: tuple[tuple[str, float], ...] = ()
    assessed: Mapping[str, float] = field(default_factory=dict)
    status: str = STATUS_ACTIVE

    @property
    def assessed_coefficients(self) -> dict[str, float]:
        return dict(self.assessed)

    @property
    def decided(self) -> bool:
        return len(self.frontier.surviving) <= 1

    def attribute(self, name: str) -> Attribute:
        for attribute in self.attributes:
            if attribute.name == name:
                return attribute
        raise KeyError(name)

    def subutility(self, name: str) -> SubutilityFunction:
        for fn in self.subutilities:
            if fn.owner == name:
                return fn
        raise KeyError(name)


def start_session(
    plans: Sequence[PlanRecord],
    attributes: Sequence[Attribute],
    subutilities: Sequence[SubutilityFunction],
    epsilon: float = 0.0,
) -> ElicitationSession:
    """Build a session and compute its initial frontier."""
    if not plans:
        raise DimensionMismatchError("at least one plan is required")
    if len(attributes) != len(subutilities):
        raise DimensionMismatchError(
            f"{len(attributes)} attributes but {len(subutilities)} subutility functions"
        )
    for attribute, fn in zip(attributes, subutilities):
        check_anchoring(attribute, fn)
    columns = tuple(ColumnDescriptor.original(a.name) for a in attributes)
    matrix = PlanMatrix(plans=tuple(plans), columns=columns)
    frontier = efficient_frontier(matrix, epsilon)
    return ElicitationSession(
        attributes=tuple(attributes),
        subutilities=tuple(subutilities),
        matrix=matrix,
        frontier=frontier,
        epsilon=epsilon,
        eliminations=frontier.eliminated,
    )


def coefficient_from_indifference(p: float) -> float:
    """A standard-gamble indifference probability is the scaling constant itself."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InvalidAnswerError(f"probability {p} is outside [0, 1]")
    return p


def ratio_from_coefficients(k_i: float, k_j: float) -> float:
    """Tradeoff ratio k_i / k_j from two assessed scaling constants."""
    if k_j == 0.0:
        raise UndefinedRatioError("denominator coefficient is zero; no weight signal")
    return float(k_i) / float(k_j)


def ratio_from_matching(probe_utility: float, match_utility: float) -> float:
    """Tradeoff ratio from a value match: u_j(matched) / u_i(probe)."""
    if probe_utility == 0.0:
        raise UndefinedRatioError("probe utility is zero; no weight signal")
    return float(match_utility) / float(probe_utility)


def merge_columns(matrix: PlanMatrix, absorbed: int, into: int, ratio: float) -> PlanMatrix:
    """Fold column ``absorbed`` into column ``into`` with the given ratio.

    Every plan's target component becomes ratio * w_absorbed + w_into and the
    absorbed column disappears, shrinking the problem by one dimension.
    """
    n = len(matrix.columns)
    if not (0 <= absorbed < n and 0 <= into < n):
        raise ValueError(f"column indices ({absorbed}, {into}) out of range for {n} columns")
    if absorbed == into:
        raise ValueError("cannot merge a column into itself")
    if ratio <= 0.0:
        raise ValueError(f"merge ratio {ratio} must be positive")
    src = matrix.columns[absorbed]
    dst = matrix.columns[into]
    merged = ColumnDescriptor(
        label=f"{src.label}/{dst.label}",
        members=src.members + dst.members,
        representative=dst.representative,
        merge_tree={
            "ratio": ratio,
            "absorbed": src.merge_tree if src.merge_tree is not None else {"attribute": src.label},
            "into": dst.merge_tree if dst.merge_tree is not None else {"attribute": dst.label},
        },
    )
    columns = tuple(
        merged if c == into else matrix.columns[c] for c in range(n) if c != absorbed
    )
    plans = []
    for plan in matrix.plans:
        w = list(plan.w)
        w[into] = ratio * w[absorbed] + w[into]
        del w[absorbed]
        plans.append(PlanRecord(id=plan.id, label=plan.label, w=tuple(w)))
    return PlanMatrix(plans=tuple(plans), columns=columns)


def next_question(session: ElicitationSession) -> tuple[ElicitationSession, Question]:
    """Pick the next tradeoff question and move the session to awaiting-answer.

    A fresh pair comes from the minimum-rank-correlation heuristic over the
    surviving plans.  Continuous pairs get one value-matching question; all
    others get two standard gambles, the second once the first is answered.
    """
    if session.status == STATUS_DONE:
        raise SessionStateError("session is done")
    if session.status == STATUS_AWAITING:
        raise SessionStateError("a question is already pending")
    if session.decided:
        raise SessionStateError("already decided: the frontier has a single plan")
    if len(session.matrix.columns) < 2:
        raise SessionStateError("all attributes are already merged")

    if session.active_pair is not None:
        pair = session.active_pair
    else:
        pair = most_conflicting_pair(session.matrix, session.frontier)

    question = _question_for_pair(session, pair)
    return (
        replace(session, pending=question, active_pair=pair, status=STATUS_AWAITING),
        question,
    )


def _question_for_pair(session: ElicitationSession, pair: tuple[int, int]) -> Question:
    rep_i = session.matrix.columns[pair[0]].representative
    rep_j = session.matrix.columns[pair[1]].representative
    attr_i = session.attribute(rep_i)
    attr_j = session.attribute(rep_j)
    answered = dict(session.pair_coefficients)

    if not answered and attr_i.kind == "continuous" and attr_j.kind == "continuous":
        probe = (float(attr_i.worst) + float(attr_i.best)) / 2.0
        probe_utility = session.subutility(rep_i).evaluate(probe)
        if probe_utility > PROBE_UTILITY_FLOOR:
            return ValueMatchQuestion(
                pair=pair,
                probe_attribute=rep_i,
                match_attribute=rep_j,
                probe_value=probe,
                probe_utility=probe_utility,
            )

    target = rep_i if rep_i not in answered else rep_j
    return _standard_gamble(session, target)


def _standard_gamble(session: ElicitationSession, target: str) -> StandardGambleQuestion:
    best = tuple((a.name, a.best) for a in session.attributes)
    worst = tuple((a.name, a.worst) for a in session.attributes)
    certain = tuple(
        (a.name, a.best if a.name == target else a.worst) for a in session.attributes
    )
    return StandardGambleQuestion(
        target=target, best_outcome=best, worst_outcome=worst, certain_outcome=certain
    )


def apply_answer(session: ElicitationSession, answer: Answer) -> ElicitationSession:
    """Record an answer to the pending question; merge once the ratio is known.

    Invalid answers raise and leave the session untouched.  After a merge the
    frontier is recomputed over the prior survivors only, so eliminated plans
    never rejoin.
    """
    if session.status == STATUS_DONE:
        raise SessionStateError("session is done")
    if session.pending is None or session.status != STATUS_AWAITING:
        raise SessionStateError("no pending question")
    if isinstance(answer, DirectRatioAnswer):
        raise InvalidAnswerError("a direct ratio does not answer the pending question")

    pending = session.pending
    assert session.active_pair is not None
    pair = session.active_pair

    if isinstance(pending, StandardGambleQuestion):
        if not isinstance(answer, ProbabilityAnswer):
            raise InvalidAnswerError("standard-gamble question expects a probability answer")
        coefficient = coefficient_from_indifference(answer.p)
        pair_coefficients = session.pair_coefficients + ((pending.target, coefficient),)
        assessed = dict(session.assessed)
        assessed[pending.target] = coefficient
        session = replace(
            session,
            answer_log=session.answer_log + (answer,),
            pair_coefficients=pair_coefficients,
            assessed=assessed,
            pending=None,
            status=STATUS_ACTIVE,
        )
        answered = dict(pair_coefficients)
        rep_i = session.matrix.columns[pair[0]].representative
        rep_j = session.matrix.columns[pair[1]].representative
        if rep_i in answered and rep_j in answered:
            ratio = ratio_from_coefficients(answered[rep_i], answered[rep_j])
            if ratio <= 0.0:
                raise InvalidAnswerError(
                    f"attribute {rep_i} was given zero weight; the pair cannot be merged"
                )
            answers = session.answer_log[-2:]
            return _merge_and_refilter(session, pair, ratio, answers)
        return session

    if isinstance(pending, ValueMatchQuestion):
        if not isinstance(answer, MatchingValueAnswer):
            raise InvalidAnswerError("value-match question expects a matching value answer")
        try:
            match_utility = session.subutility(pending.match_attribute).evaluate(answer.value)
        except EvaluationError as exc:
            raise InvalidAnswerError(str(exc)) from exc
        ratio = ratio_from_matching(pending.probe_utility, match_utility)
        if ratio <= 0.0:
            raise InvalidAnswerError(
                f"matched value on {pending.match_attribute} carries zero utility; "
                "the pair cannot be merged"
            )
        session = replace(
            session,
            answer_log=session.answer_log + (answer,),
            pending=None,
            status=STATUS_ACTIVE,
        )
        return _merge_and_refilter(session, pair, ratio, (answer,))

    raise InvalidAnswerError(f"unsupported question type {type(pending).__name__}")


def apply_direct_ratio(session: ElicitationSession, answer: DirectRatioAnswer) -> ElicitationSession:
    """Merge an explicitly chosen column pair with a user-supplied ratio.

    This bypasses the recommended question, honoring the heuristic as a hint
    rather than a mandate; any pending question is discarded as stale.
    """
    if session.status == STATUS_DONE:
        raise SessionStateError("session is done")
    if answer.pair is None:
        raise InvalidAnswerError("a direct ratio needs an explicit column pair")
    i, j = answer.pair
    n = len(session.matrix.columns)
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise InvalidAnswerError(f"column pair ({i}, {j}) is not a valid active pair")
    session = replace(
        session,
        answer_log=session.answer_log + (answer,),
        pending=None,
        status=STATUS_ACTIVE,
    )
    return _merge_and_refilter(session, (i, j), answer.ratio, (answer,))


def _merge_and_refilter(
    session: ElicitationSession,
    pair: tuple[int, int],
    ratio: float,
    answers: tuple[Answer, ...],
) -> ElicitationSession:
    absorbed, into = pair
    record = MergeRecord(
        absorbed_label=session.matrix.columns[absorbed].label,
        surviving_label=session.matrix.columns[into].label,
        absorbed_index=absorbed,
        surviving_index=into,
        absorbed_representative=session.matrix.columns[absorbed].representative,
        surviving_representative=session.matrix.columns[into].representative,
        ratio=ratio,
        result_label=(
            f"{session.matrix.columns[absorbed].label}/{session.matrix.columns[into].label}"
        ),
        answers=answers,
    )
    merged = merge_columns(session.matrix, absorbed, into, ratio)
    frontier = efficient_frontier(merged.subset(session.frontier.surviving), session.epsilon)
    done = len(frontier.surviving) <= 1 or len(merged.columns) < 2
    return replace(
        session,
        matrix=merged,
        frontier=frontier,
        history=session.history + (record,),
        eliminations=session.eliminations + frontier.eliminated,
        pending=None,
        active_pair=None,
        pair_coefficients=(),
        status=STATUS_DONE if done else STATUS_ACTIVE,
    )


def finish(session: ElicitationSession) -> ElicitationSession:
    """Mark the session done, discarding any pending question."""
    return replace(session, pending=None, active_pair=None, status=STATUS_DONE)


def accept(session: ElicitationSession) -> FinalReport:
    """Freeze the session into a report, recovering full weights when possible.

    The full weight vector is derivable exactly when the answered ratios link
    all original attributes into one connected component; it is then scaled to
    sum to 1.
    """
    surviving_labels = tuple(
        session.matrix.by_id(plan_id).label for plan_id in session.frontier.surviving
    )
    warning = None
    assessed = session.assessed_coefficients
    if len(assessed) == len(session.attributes) and session.attributes:
        total = sum(assessed.values())
        if abs(total - 1.0) > 0.05:
            warning = (
                f"assessed coefficients sum to {total:.4f}; answers may be inconsistent"
            )
    return FinalReport(
        surviving=session.frontier.surviving,
        surviving_labels=surviving_labels,
        history=session.history,
        assessed_coefficients=assessed,
        full_weights=_weights_from_ratios(session),
        warning=warning,
        answers=session.answer_log,
        status=session.status,
    )


def _weights_from_ratios(session: ElicitationSession) -> dict[str, float] | None:
    names = [a.name for a in session.attributes]
    if not session.history:
        return None
    edges: dict[str, list[tuple[str, float]]] = {name: [] for name in names}
    for record in session.history:
        # ratio = k_absorbed / k_surviving, so walking absorbed -> surviving
        # divides and the reverse direction multiplies.
        edges[record.absorbed_representative].append(
            (record.surviving_representative, 1.0 / record.ratio)
        )
        edges[record.surviving_representative].append(
            (record.absorbed_representative, record.ratio)
        )
    weights: dict[str, float] = {names[0]: 1.0}
    stack = [names[0]]
    while stack:
        node = stack.pop()
        for neighbor, factor in edges[node]:
            if neighbor not in weights:
                weights[neighbor] = weights[node] * factor
                stack.append(neighbor)
    if len(weights) != len(names):
        return None
    total = sum(weights.values())
    return {name: weights[name] / total for name in names}


def replay_answers(
    plans: Sequence[PlanRecord],
    attributes: Sequence[Attribute],
    subutilities: Sequence[SubutilityFunction],
    answers: Sequence[Answer],
    epsilon: float = 0.0,
) -> ElicitationSession:
    """Drive a fresh session through a recorded answer sequence."""
    session = start_session(plans, attributes, subutilities, epsilon)
    for answer in answers:
        if isinstance(answer, DirectRatioAnswer):
            session = apply_direct_ratio(session, answer)
            continue
        if session.pending is None:
            session, _ = next_question(session)
        session = apply_answer(session, answer)
    return session


def _format_value(value: Value) -> str:
    if isinstance(value, str):
        return value
    number = float(value)
    if number.is_integer():
        return f"{int(number):,}"
    return f"{number:g}"


def _format_outcome(outcome: OutcomeSpec) -> str:
    inner = ", ".join(f"{name} = {_format_value(value)}" for name, value in outcome)
    return f"⟨{inner}⟩"


def render_question(question: Question) -> str:
    """Natural-language text for a question, ready to show a decision maker."""
    if isinstance(question, StandardGambleQuestion):
        return (
            "For what probability p are you indifferent between a lottery that yields "
            f"either the outcome {_format_outcome(question.best_outcome)} with probability p "
            f"and outcome {_format_outcome(question.worst_outcome)} with probability 1 - p, "
            f"and the certain outcome {_format_outcome(question.certain_outcome)}?"
        )
    if isinstance(question, ValueMatchQuestion):
        return (
            f"For what value of {question.match_attribute} are you indifferent between "
            f"an outcome with {question.probe_attribute} = {_format_value(question.probe_value)} "
            f"and that value of {question.match_attribute}, and an outcome with both "
            f"{question.probe_attribute} and {question.match_attribute} at their worst levels, "
            "all other attributes held equal?"
        )
    raise InvalidAnswerError(f"unsupported question type {type(question).__name__}")
