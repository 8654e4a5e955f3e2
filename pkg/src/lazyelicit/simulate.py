"""Monte Carlo comparison of merge-pair selection strategies.

Each trial draws a hidden weight vector and a plan matrix uniformly on [0, 1],
filters the plans to their efficient frontier, then merges one column pair
with the true tradeoff ratio and counts the eliminations that follow.  The
rank-correlation heuristic (RCC) competes against a uniformly random pick
(RAND) and an omniscient pick (OPT) on the same instance; anytime runs repeat
the merge step until a single column remains.

Randomness is counter-based: every trial owns a Philox stream spawned from
(master seed, trial index), so serial and parallel evaluation agree bit for
bit.  Within a trial the draw order is fixed: pooled dimensions first when
pooling, then the weights, then the plan matrix, then any RAND picks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .frontier import min_correlation_pair, survivor_indices

RCC = "RCC"
RAND = "RAND"
OPT = "OPT"

ALL_STRATEGIES = (RCC, RAND, OPT)

# The dimension grid used for pooled headline runs.
POOLED_GRID: tuple[tuple[int, int], ...] = tuple(
    (m, n) for m in (25, 50, 100, 200) for n in range(4, 9)
)


@dataclass(frozen=True)
class TrialConfig:
    """Experiment shape: fixed (m, n) or pooled over the standard grid."""

    trials: int
    seed: int
    m: int | None = None
    n: int | None = None
    strategies: tuple[str, ...] = ALL_STRATEGIES
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if (self.m is None) != (self.n is None):
            raise ValueError("set both m and n, or neither for a pooled run")
        if self.m is not None and (self.m < 2 or self.n < 2):
            raise ValueError("m and n must be at least 2")
        unknown = set(self.strategies) - set(ALL_STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies: {sorted(unknown)}")
        object.__setattr__(self, "strategies", tuple(self.strategies))

    @property
    def pooled(self) -> bool:
        return self.m is None


@dataclass(frozen=True)
class Instance:
    """Hidden truth for one trial: normalized weights and the plan matrix."""

    k: np.ndarray
    W: np.ndarray


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    m: int
    n: int
    frontier_size: int
    counts: dict[str, int]
    pairs: dict[str, tuple[int, int]]
    opt_count: int
    pair_average: float
    ratios: dict[str, float | None]


@dataclass(frozen=True)
class ExperimentReport:
    config: TrialConfig
    mean_ratio: dict[str, float]
    matchups: dict[str, dict[str, int]]
    fraction_matching_opt: dict[str, float]
    fraction_above_average: dict[str, float]
    excluded_trials: int
    trials: tuple[TrialRecord, ...]

    def to_dict(self) -> dict:
        return {
            "config": {
                "trials": self.config.trials,
                "seed": self.config.seed,
                "m": self.config.m,
                "n": self.config.n,
                "strategies": list(self.config.strategies),
                "epsilon": self.config.epsilon,
                "pooled": self.config.pooled,
            },
            "mean_competitive_ratio": dict(self.mean_ratio),
            "matchups": {k: dict(v) for k, v in self.matchups.items()},
            "fraction_matching_opt": dict(self.fraction_matching_opt),
            "fraction_above_average": dict(self.fraction_above_average),
            "excluded_trials": self.excluded_trials,
            "trial_records": [
                {
                    "trial": r.trial,
                    "m": r.m,
                    "n": r.n,
                    "frontier_size": r.frontier_size,
                    "counts": dict(r.counts),
                    "pairs": {k: list(v) for k, v in r.pairs.items()},
                    "opt_count": r.opt_count,
                    "pair_average": r.pair_average,
                    "ratios": dict(r.ratios),
                }
                for r in self.trials
            ],
        }


@dataclass(frozen=True)
class AnytimeReport:
    config: TrialConfig
    curves: dict[str, tuple[float, ...]]
    mean_argmax_size: float
    trials: int

    def rows(self) -> list[tuple[int, str, float, int]]:
        out = []
        for strategy, curve in self.curves.items():
            for step, size in enumerate(curve):
                out.append((step, strategy, size, self.trials))
        return out

    def to_dict(self) -> dict:
        return {
            "config": {
                "trials": self.config.trials,
                "seed": self.config.seed,
                "m": self.config.m,
                "n": self.config.n,
                "strategies": list(self.config.strategies),
            },
            "curves": {k: list(v) for k, v in self.curves.items()},
            "mean_argmax_size": self.mean_argmax_size,
            "trials": self.trials,
        }


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    """The counter-based stream owned by one trial."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.Philox(sequence))


def generate_instance(m: int, n: int, rng: np.random.Generator) -> Instance:
    """Draw weights and plan matrix uniformly; weights normalized to sum 1."""
    raw = rng.random(n)
    while raw.min() <= 0.0 or raw.max() < 1e-12:
        raw = rng.random(n)
    k = raw / raw.sum()
    W = rng.random((m, n))
    return Instance(k=k, W=W)


def _column_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _merged_values(values: np.ndarray, weights: np.ndarray, i: int, j: int) -> np.ndarray:
    """Merge column i into column j using the true ratio of their weights."""
    ratio = weights[i] / weights[j]
    merged = np.delete(values, i, axis=1)
    # Column j shifts left by one when i < j.
    target = j - 1 if i < j else j
    merged[:, target] = ratio * values[:, i] + values[:, j]
    return merged


def pair_elimination_counts(
    frontier_values: np.ndarray, weights: np.ndarray, epsilon: float = 0.0
) -> dict[tuple[int, int], int]:
    """Eliminations each single true-ratio merge would cause on the frontier."""
    size = frontier_values.shape[0]
    counts: dict[tuple[int, int], int] = {}
    for i, j in _column_pairs(frontier_values.shape[1]):
        merged = _merged_values(frontier_values, weights, i, j)
        counts[(i, j)] = size - len(survivor_indices(merged, epsilon))
    return counts


def first_merge_eliminations(
    instance: Instance,
    strategy: str,
    rng: np.random.Generator | None = None,
    epsilon: float = 0.0,
) -> int:
    """Eliminations after one merge chosen by the given strategy.

    Fewer than two surviving plans means nothing can be eliminated and the
    count is zero by definition.  RAND requires the trial's stream.
    """
    frontier = instance.W[survivor_indices(instance.W, epsilon)]
    if frontier.shape[0] < 2:
        return 0
    counts = pair_elimination_counts(frontier, instance.k, epsilon)
    pair = _select_pair(strategy, frontier, counts, rng)
    return counts[pair]


def _select_pair(
    strategy: str,
    frontier_values: np.ndarray,
    counts: dict[tuple[int, int], int],
    rng: np.random.Generator | None,
) -> tuple[int, int]:
    if strategy == RCC:
        return min_correlation_pair(frontier_values)
    if strategy == RAND:
        if rng is None:
            raise ValueError("RAND needs the trial's random stream")
        pairs = sorted(counts)
        return pairs[int(rng.integers(len(pairs)))]
    if strategy == OPT:
        best_pair, best = None, -1
        for pair in sorted(counts):
            if counts[pair] > best:
                best_pair, best = pair, counts[pair]
        assert best_pair is not None
        return best_pair
    raise ValueError(f"unknown strategy {strategy!r}")


def run_first_merge_comparison(config: TrialConfig) -> ExperimentReport:
    """Evaluate every strategy on the same instances and aggregate the stats.

    Competitive ratios divide by OPT's count; trials where OPT eliminates
    nothing are excluded from the ratio means and reported separately.  The
    win/tie/loss, matching-OPT and strictly-above-average fractions cover all
    trials.
    """
    strategies = [s for s in ALL_STRATEGIES if s in config.strategies]
    records: list[TrialRecord] = []
    for trial in range(config.trials):
        rng = trial_generator(config.seed, trial)
        if config.pooled:
            m, n = POOLED_GRID[int(rng.integers(len(POOLED_GRID)))]
        else:
            m, n = config.m, config.n
        instance = generate_instance(m, n, rng)
        frontier = instance.W[survivor_indices(instance.W, config.epsilon)]
        size = frontier.shape[0]
        if size < 2:
            counts_by_pair: dict[tuple[int, int], int] = {
                pair: 0 for pair in _column_pairs(n)
            }
        else:
            counts_by_pair = pair_elimination_counts(frontier, instance.k, config.epsilon)
        pairs: dict[str, tuple[int, int]] = {}
        counts: dict[str, int] = {}
        for strategy in strategies:
            if size < 2:
                pairs[strategy] = (0, 1)
                counts[strategy] = 0
                continue
            pair = _select_pair(strategy, frontier, counts_by_pair, rng)
            pairs[strategy] = pair
            counts[strategy] = counts_by_pair[pair]
        opt_count = max(counts_by_pair.values()) if size >= 2 else 0
        pair_average = float(np.mean(list(counts_by_pair.values())))
        ratios: dict[str, float | None] = {
            s: (counts[s] / opt_count if opt_count > 0 else None) for s in strategies
        }
        records.append(
            TrialRecord(
                trial=trial,
                m=m,
                n=n,
                frontier_size=size,
                counts=counts,
                pairs=pairs,
                opt_count=opt_count,
                pair_average=pair_average,
                ratios=ratios,
            )
        )
    return _aggregate(config, strategies, records)


def _aggregate(
    config: TrialConfig, strategies: list[str], records: list[TrialRecord]
) -> ExperimentReport:
    total = len(records)
    excluded = sum(1 for r in records if r.opt_count == 0)
    mean_ratio = {}
    for s in strategies:
        included = [r.ratios[s] for r in records if r.ratios[s] is not None]
        mean_ratio[s] = float(np.mean(included)) if included else float("nan")
    matchups: dict[str, dict[str, int]] = {}
    for index, a in enumerate(strategies):
        for b in strategies[index + 1 :]:
            wins = sum(1 for r in records if r.counts[a] > r.counts[b])
            ties = sum(1 for r in records if r.counts[a] == r.counts[b])
            matchups[f"{a}_vs_{b}"] = {
                "win": wins,
                "tie": ties,
                "loss": total - wins - ties,
            }
    fraction_matching_opt = {
        s: sum(1 for r in records if r.counts[s] == r.opt_count) / total
        for s in strategies
    }
    fraction_above_average = {
        s: sum(1 for r in records if strictly_above_average(r.counts[s], r.pair_average))
        / total
        for s in strategies
    }
    return ExperimentReport(
        config=config,
        mean_ratio=mean_ratio,
        matchups=matchups,
        fraction_matching_opt=fraction_matching_opt,
        fraction_above_average=fraction_above_average,
        excluded_trials=excluded,
        trials=tuple(records),
    )


def strictly_above_average(count: int, pair_average: float) -> bool:
    """Whether a strategy beat the all-pairs average; the comparison is strict."""
    return count > pair_average


def run_anytime_experiment(config: TrialConfig) -> AnytimeReport:
    """Frontier size after 0..n-1 true-ratio merges, averaged over trials.

    Supported strategies are RCC and RAND; RAND redraws its pair uniformly at
    each step from the trial's stream.  Once a single plan survives, later
    steps keep that size.
    """
    if config.pooled:
        raise ValueError("anytime runs need fixed m and n")
    strategies = [s for s in (RCC, RAND) if s in config.strategies]
    if set(config.strategies) - {RCC, RAND}:
        raise ValueError("anytime runs support only RCC and RAND")
    m, n = config.m, config.n
    sums = {s: np.zeros(n) for s in strategies}
    argmax_sizes = 0.0
    for trial in range(config.trials):
        rng = trial_generator(config.seed, trial)
        instance = generate_instance(m, n, rng)
        initial = survivor_indices(instance.W, config.epsilon)
        frontier0 = instance.W[initial]
        utilities = frontier0 @ instance.k
        argmax_sizes += int(np.sum(utilities == utilities.max()))
        for strategy in strategies:
            sizes = _anytime_sizes(frontier0, instance.k, strategy, rng, config.epsilon)
            sums[strategy] += np.asarray(sizes, dtype=float)
    curves = {
        s: tuple(float(x) for x in sums[s] / config.trials) for s in strategies
    }
    return AnytimeReport(
        config=config,
        curves=curves,
        mean_argmax_size=argmax_sizes / config.trials,
        trials=config.trials,
    )


def _anytime_sizes(
    frontier_values: np.ndarray,
    k: np.ndarray,
    strategy: str,
    rng: np.random.Generator,
    epsilon: float,
) -> list[int]:
    values = frontier_values.copy()
    weights = k.copy()
    sizes = [values.shape[0]]
    for _ in range(len(k) - 1):
        if values.shape[0] < 2:
            sizes.append(values.shape[0])
            # Keep the column bookkeeping moving so weights stay aligned.
            values = _merged_values(values, weights, 0, 1)
            weights = np.delete(weights, 0)
            continue
        if strategy == RCC:
            i, j = min_correlation_pair(values)
        else:
            pairs = _column_pairs(values.shape[1])
            i, j = pairs[int(rng.integers(len(pairs)))]
        values = _merged_values(values, weights, i, j)
        weights = np.delete(weights, i)
        values = values[survivor_indices(values, epsilon)]
        sizes.append(values.shape[0])
    return sizes
