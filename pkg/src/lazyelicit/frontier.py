"""Efficient-frontier filtering and rank-correlation pair selection.

Plans are rows of expected subutilities; a plan leaves the frontier when some
surviving plan beats it on every column, or when it duplicates a surviving
plan of lower id.  The most conflicting pair of columns, measured by rank
correlation over the survivors, is the next candidate for merging.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError


@dataclass(frozen=True)
class ColumnDescriptor:
    """An active column: a single attribute or a merged group of them.

    ``representative`` names the attribute whose scaling constant the column
    carries after merges; ``merge_tree`` records how the group was assembled.
    """

    label: str
    members: tuple[str, ...]
    representative: str
    merge_tree: object = None

    @classmethod
    def original(cls, name: str) -> "ColumnDescriptor":
        return cls(label=name, members=(name,), representative=name, merge_tree=None)


@dataclass(frozen=True)
class PlanRecord:
    """One plan reduced to its expected-subutility vector."""

    id: int
    label: str
    w: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", tuple(float(x) for x in self.w))


@dataclass(frozen=True)
class PlanMatrix:
    plans: tuple[PlanRecord, ...]
    columns: tuple[ColumnDescriptor, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "plans", tuple(self.plans))
        object.__setattr__(self, "columns", tuple(self.columns))
        n = len(self.columns)
        for plan in self.plans:
            if len(plan.w) != n:
                raise DimensionMismatchError(
                    f"plan {plan.id} has {len(plan.w)} components, {n} columns expected"
                )
        ids = [plan.id for plan in self.plans]
        if len(set(ids)) != len(ids):
            raise DimensionMismatchError("plan ids are not unique")

    @classmethod
    def from_rows(
        cls,
        labels: Sequence[str],
        rows: Sequence[Sequence[float]],
        column_names: Sequence[str],
    ) -> "PlanMatrix":
        plans = tuple(
            PlanRecord(id=i, label=str(label), w=tuple(row))
            for i, (label, row) in enumerate(zip(labels, rows))
        )
        columns = tuple(ColumnDescriptor.original(name) for name in column_names)
        return cls(plans=plans, columns=columns)

    def values(self) -> np.ndarray:
        return np.array([plan.w for plan in self.plans], dtype=float)

    def subset(self, ids: Sequence[int]) -> "PlanMatrix":
        wanted = set(ids)
        return PlanMatrix(
            plans=tuple(p for p in self.plans if p.id in wanted),
            columns=self.columns,
        )

    def by_id(self, plan_id: int) -> PlanRecord:
        for plan in self.plans:
            if plan.id == plan_id:
                return plan
        raise KeyError(plan_id)


@dataclass(frozen=True)
class Ranking:
    """Descending-value ranks with midranks for ties; rank 1 is the best."""

    ranks: tuple[float, ...]

    def __post_init__(self) -> None:
        ranks = tuple(float(r) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        m = len(ranks)
        if m and abs(sum(ranks) - m * (m + 1) / 2) > 1e-9:
            raise ValueError("ranks do not sum to m(m+1)/2")


@dataclass(frozen=True)
class FrontierResult:
    surviving: tuple[int, ...]
    eliminated: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def _dominance_masks(values: np.ndarray, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise strict-dominance and weak-equality masks over matrix rows."""
    ge = np.all(values[:, None, :] >= values[None, :, :] - epsilon, axis=2)
    gt = np.any(values[:, None, :] > values[None, :, :] + epsilon, axis=2)
    strict = ge & gt
    equal = ge & ge.T
    return strict, equal


def survivor_indices(values: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
    """Row indices that stay on the frontier, in ascending order.

    Rows play the role of plans and their index the role of the id tie-break:
    among weak-equal duplicates only the lowest index survives.
    """
    values = np.asarray(values, dtype=float)
    m = values.shape[0]
    if m == 0:
        raise ValueError("empty plan matrix")
    strict, equal = _dominance_masks(values, epsilon)
    if epsilon == 0.0:
        dominated = strict.any(axis=0)
        duplicate = np.triu(equal, k=1).any(axis=0)
        return np.flatnonzero(~dominated & ~duplicate)
    return _sequential_survivors(strict, equal)


def _sequential_survivors(strict: np.ndarray, equal: np.ndarray) -> np.ndarray:
    """Fixpoint pruning for epsilon-relaxed dominance, which is not transitive.

    Repeatedly removes the lowest-index plan that a still-alive plan strictly
    dominates or duplicates from below; any removal the final survivor set
    cannot certify is pinned back in and the pruning restarts.
    """
    m = strict.shape[0]
    pinned: set[int] = set()
    while True:
        alive = list(range(m))
        removed = True
        while removed:
            removed = False
            for b in alive:
                if b in pinned:
                    continue
                others = [a for a in alive if a != b]
                if any(strict[a, b] for a in others) or any(
                    equal[a, b] for a in others if a < b
                ):
                    alive.remove(b)
                    removed = True
                    break
        uncertified = [
            b
            for b in range(m)
            if b not in alive
            and not any(strict[a, b] for a in alive)
            and not any(equal[a, b] for a in alive if a < b)
        ]
        if not uncertified:
            return np.asarray(alive, dtype=int)
        pinned.update(uncertified)


def efficient_frontier(matrix: PlanMatrix, epsilon: float = 0.0) -> FrontierResult:
    """Split a plan matrix into frontier survivors and certified eliminations.

    Every eliminated plan is paired with a surviving dominator: a survivor
    that strictly dominates it, or for exact duplicates the lowest-id copy.
    The result is independent of input order and idempotent.
    """
    if not matrix.plans:
        raise ValueError("empty plan matrix")
    if epsilon < 0.0:
        raise ValueError("epsilon must be nonnegative")
    order = sorted(range(len(matrix.plans)), key=lambda i: matrix.plans[i].id)
    ids = [matrix.plans[i].id for i in order]
    values = np.array([matrix.plans[i].w for i in order], dtype=float)
    alive = survivor_indices(values, epsilon)
    alive_set = set(alive.tolist())
    strict, equal = _dominance_masks(values, epsilon)
    surviving = tuple(ids[i] for i in alive)
    eliminated: list[tuple[int, int]] = []
    for b in range(len(ids)):
        if b in alive_set:
            continue
        dominator = next((a for a in alive if strict[a, b]), None)
        if dominator is None:
            dominator = next(a for a in alive if a < b and equal[a, b])
        eliminated.append((ids[b], ids[dominator]))
    return FrontierResult(surviving=surviving, eliminated=tuple(eliminated))


def rank_descending(values: Sequence[float]) -> Ranking:
    """Rank values from highest (rank 1) to lowest, averaging tied ranks."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("cannot rank an empty vector")
    order = np.argsort(-v, kind="stable")
    ranks = np.empty(v.size, dtype=float)
    i = 0
    while i < v.size:
        j = i
        while j + 1 < v.size and v[order[j + 1]] == v[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return Ranking(tuple(ranks))


def rank_correlation(a: Ranking, b: Ranking) -> float:
    """Rank correlation coefficient: 1 - 6 * sum((a_i - b_i)^2) / (m^3 - m).

    Evaluated as a single division so that permutation inputs with decimal
    results round exactly.
    """
    m = len(a.ranks)
    if m != len(b.ranks):
        raise DimensionMismatchError(f"ranking lengths differ: {m} vs {len(b.ranks)}")
    if m < 2:
        raise ValueError("rank correlation needs at least two items")
    squared = sum((x - y) ** 2 for x, y in zip(a.ranks, b.ranks))
    scale = m**3 - m
    return (scale - 6.0 * squared) / scale


def min_correlation_pair(values: np.ndarray) -> tuple[int, int]:
    """Column pair with the smallest rank correlation over the given rows.

    Ties resolve to the lexicographically smallest pair of column indices.
    """
    values = np.asarray(values, dtype=float)
    m, n = values.shape
    if n < 2:
        raise ValueError("need at least two active columns")
    if m < 2:
        raise ValueError("need at least two surviving plans")
    rankings = [rank_descending(values[:, c]) for c in range(n)]
    best_pair: tuple[int, int] | None = None
    best_rho = float("inf")
    for i in range(n):
        for j in range(i + 1, n):
            rho = rank_correlation(rankings[i], rankings[j])
            if rho < best_rho:
                best_rho = rho
                best_pair = (i, j)
    assert best_pair is not None
    return best_pair


def most_conflicting_pair(matrix: PlanMatrix, frontier: FrontierResult) -> tuple[int, int]:
    """Column pair to merge next: minimal rank correlation among survivors."""
    survivors = matrix.subset(frontier.surviving)
    return min_correlation_pair(survivors.values())
