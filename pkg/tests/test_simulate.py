"""Strategy-comparison harness: determinism, strategy contracts, aggregation."""

from __future__ import annotations

import numpy as np
import pytest

from lazyelicit.frontier import survivor_indices
from lazyelicit.simulate import (
    OPT,
    POOLED_GRID,
    RAND,
    RCC,
    Instance,
    TrialConfig,
    first_merge_eliminations,
    generate_instance,
    pair_elimination_counts,
    run_anytime_experiment,
    run_first_merge_comparison,
    trial_generator,
)


class TestTrialConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            TrialConfig(trials=0, seed=1)
        with pytest.raises(ValueError):
            TrialConfig(trials=1, seed=1, m=1, n=4)
        with pytest.raises(ValueError):
            TrialConfig(trials=1, seed=1, m=10)
        with pytest.raises(ValueError):
            TrialConfig(trials=1, seed=1, strategies=("RCC", "BOGUS"))

    def test_pooled_flag(self):
        assert TrialConfig(trials=1, seed=1).pooled
        assert not TrialConfig(trials=1, seed=1, m=10, n=4).pooled


class TestGenerateInstance:
    def test_deterministic_given_the_stream(self):
        a = generate_instance(3, 2, trial_generator(7, 0))
        b = generate_instance(3, 2, trial_generator(7, 0))
        assert np.array_equal(a.k, b.k)
        assert np.array_equal(a.W, b.W)

    def test_ranges_and_normalization(self):
        rng = trial_generator(11, 4)
        for _ in range(20):
            instance = generate_instance(10, 5, rng)
            assert np.all(instance.W >= 0) and np.all(instance.W <= 1)
            assert np.all(instance.k > 0)
            assert instance.k.sum() == pytest.approx(1.0, abs=1e-12)

    def test_streams_differ_across_trials(self):
        a = generate_instance(3, 2, trial_generator(7, 0))
        b = generate_instance(3, 2, trial_generator(7, 1))
        assert not np.array_equal(a.W, b.W)


class TestFirstMerge:
    def constructed_instance(self) -> Instance:
        # Merging the first two columns with unit ratio exposes two dominated
        # plans; the other pairs expose none.
        k = np.array([1 / 3, 1 / 3, 1 / 3])
        W = np.array(
            [
                [0.8, 0.1, 0.5],
                [0.1, 0.7, 0.45],
                [0.35, 0.45, 0.4],
                [0.2, 0.2, 0.9],
            ]
        )
        return Instance(k=k, W=W)

    def test_opt_finds_the_constructed_pair(self):
        instance = self.constructed_instance()
        counts = pair_elimination_counts(instance.W, instance.k)
        assert counts == {(0, 1): 2, (0, 2): 0, (1, 2): 0}
        assert first_merge_eliminations(instance, OPT) == 2

    def test_two_columns_leave_no_choice(self):
        rng = trial_generator(3, 0)
        instance = generate_instance(12, 2, rng)
        rcc = first_merge_eliminations(instance, RCC)
        opt = first_merge_eliminations(instance, OPT)
        rand = first_merge_eliminations(instance, RAND, rng=trial_generator(3, 1))
        assert rcc == opt == rand

    def test_opt_bounds_every_strategy(self):
        for trial in range(30):
            rng = trial_generator(13, trial)
            instance = generate_instance(20, 4, rng)
            opt = first_merge_eliminations(instance, OPT)
            assert first_merge_eliminations(instance, RCC) <= opt
            assert first_merge_eliminations(instance, RAND, rng=rng) <= opt

    def test_tiny_frontier_counts_zero(self):
        instance = Instance(k=np.array([0.5, 0.5]), W=np.array([[0.9, 0.9], [0.1, 0.2]]))
        assert first_merge_eliminations(instance, OPT) == 0

    def test_rand_requires_a_stream(self):
        instance = self.constructed_instance()
        with pytest.raises(ValueError):
            first_merge_eliminations(instance, RAND)


class TestComparisonRun:
    def test_single_trial_matches_a_manual_replay(self):
        config = TrialConfig(trials=1, seed=5, m=8, n=3)
        report = run_first_merge_comparison(config)
        record = report.trials[0]

        # Replay the trial's stream draws by hand.
        rng = trial_generator(5, 0)
        raw = rng.random(3)
        k = raw / raw.sum()
        W = rng.random((8, 3))
        frontier = W[survivor_indices(W)]
        counts = pair_elimination_counts(frontier, k)
        pairs = sorted(counts)
        rand_pair = pairs[int(rng.integers(len(pairs)))]
        opt = max(counts.values())

        assert record.frontier_size == frontier.shape[0]
        assert record.opt_count == opt
        assert record.pairs["RAND"] == rand_pair
        assert record.counts["RAND"] == counts[rand_pair]
        assert record.counts["OPT"] == opt
        assert record.pair_average == pytest.approx(np.mean(list(counts.values())))

    def test_deterministic_reports(self):
        config = TrialConfig(trials=20, seed=123, m=15, n=4)
        first = run_first_merge_comparison(config)
        second = run_first_merge_comparison(config)
        assert first.to_dict() == second.to_dict()

    def test_ratios_live_in_the_unit_interval(self):
        config = TrialConfig(trials=40, seed=9, m=12, n=4)
        report = run_first_merge_comparison(config)
        for record in report.trials:
            for strategy, ratio in record.ratios.items():
                if ratio is not None:
                    assert 0.0 <= ratio <= 1.0
            assert record.counts["RCC"] <= record.opt_count
            assert record.counts["RAND"] <= record.opt_count

    def test_pooled_runs_draw_dimensions_from_the_grid(self):
        config = TrialConfig(trials=60, seed=2)
        report = run_first_merge_comparison(config)
        seen = {(r.m, r.n) for r in report.trials}
        assert seen <= set(POOLED_GRID)
        assert len(seen) > 5

    def test_matchup_counts_partition_the_trials(self):
        config = TrialConfig(trials=30, seed=77, m=20, n=5)
        report = run_first_merge_comparison(config)
        for cell in report.matchups.values():
            assert cell["win"] + cell["tie"] + cell["loss"] == 30


class TestAnytime:
    def test_curves_are_nonincreasing_and_reach_the_argmax_set(self):
        config = TrialConfig(trials=40, seed=21, m=20, n=4, strategies=(RCC, RAND))
        report = run_anytime_experiment(config)
        for curve in report.curves.values():
            assert len(curve) == 4
            assert all(b <= a for a, b in zip(curve, curve[1:]))
            assert curve[-1] == pytest.approx(report.mean_argmax_size)

    def test_deterministic(self):
        config = TrialConfig(trials=10, seed=4, m=12, n=3, strategies=(RCC, RAND))
        assert run_anytime_experiment(config).to_dict() == run_anytime_experiment(
            config
        ).to_dict()

    def test_rejects_pooled_and_opt(self):
        with pytest.raises(ValueError):
            run_anytime_experiment(TrialConfig(trials=1, seed=1, strategies=(RCC,)))
        with pytest.raises(ValueError):
            run_anytime_experiment(
                TrialConfig(trials=1, seed=1, m=10, n=3, strategies=(RCC, OPT))
            )

    def test_rows_cover_each_step_and_strategy(self):
        config = TrialConfig(trials=5, seed=8, m=10, n=3, strategies=(RCC, RAND))
        report = run_anytime_experiment(config)
        rows = report.rows()
        assert len(rows) == 2 * 3
        assert {row[1] for row in rows} == {"RCC", "RAND"}
