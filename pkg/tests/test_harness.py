"""Harness tests: instance sampling, aggregation, config parsing, determinism."""

import numpy as np
import pytest

from specopt.harness import (
    ConfigError,
    ExperimentConfig,
    aggregate_stats,
    run_trials,
    sample_instance,
    substream,
)


class TestSampling:
    def test_same_seed_same_instance(self):
        a1 = sample_instance(4, 3, substream(42, 0, 0))
        a2 = sample_instance(4, 3, substream(42, 0, 0))
        for x, y in zip(a1, a2):
            assert np.array_equal(x, y)

    def test_different_trials_differ(self):
        A0, _, _ = sample_instance(4, 3, substream(42, 0, 0))
        A1, _, _ = sample_instance(4, 3, substream(42, 1, 0))
        assert not np.array_equal(A0, A1)

    def test_documented_draw_order(self):
        # A row-major first, then b, then x0, from one stream
        rng = substream(7, 0, 0)
        flat = rng.standard_normal(4 * 3 + 4 + 3)
        A, b, x0 = sample_instance(4, 3, substream(7, 0, 0))
        assert np.array_equal(A.ravel(order="C"), flat[:12])
        assert np.array_equal(b, flat[12:16])
        assert np.array_equal(x0, flat[16:])

    def test_moments(self):
        rng = substream(0, 0, 0)
        draws = rng.standard_normal(1_000_000)
        assert abs(draws.mean()) < 0.01
        assert abs(draws.var() - 1.0) < 0.01


class TestAggregateStats:
    def test_three_values(self):
        assert aggregate_stats([1.0, 2.0, 3.0]) == (2.0, 2.0, 1.0)

    def test_single_value(self):
        assert aggregate_stats([5.0]) == (5.0, 5.0, 0.0)

    def test_even_count_midpoint_median(self):
        mean, median, stddev = aggregate_stats([1.0, 2.0, 3.0, 4.0])
        assert (mean, median) == (2.5, 2.5)
        assert stddev == pytest.approx(1.2909944487358056, abs=1e-15)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            aggregate_stats([])


class TestConfig:
    BASE = {"m": 3, "n": 2, "lambda1": 0.0, "lambda2": 1.0,
            "methods": ["GD"], "seed": 1}

    def test_defaults(self):
        cfg = ExperimentConfig.from_dict(dict(self.BASE))
        assert (cfg.trials, cfg.max_iters, cfg.switch_k, cfg.schedule_c) == (20, 100, 10, 4.0)

    def test_unknown_field_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(dict(self.BASE, lr=0.1))

    def test_missing_field_rejected(self):
        raw = dict(self.BASE)
        del raw["seed"]
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(raw)

    def test_unknown_method_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(dict(self.BASE, methods=["SGD"]))

    def test_invalid_values_rejected(self):
        for patch in ({"m": 0}, {"lambda1": -1.0}, {"trials": 0}, {"seed": -1}):
            with pytest.raises(ConfigError):
                ExperimentConfig.from_dict(dict(self.BASE, **patch))


class TestRunTrials:
    def _cfg(self, **kw):
        base = {"m": 4, "n": 3, "lambda1": 0.1, "lambda2": 1.0, "seed": 11,
                "trials": 3, "max_iters": 25,
                "methods": ["SPEG-s", "S-SPEG", "H-SPEG", "GD", "Adam"]}
        base.update(kw)
        return ExperimentConfig.from_dict(base)

    def test_single_trial_stats_equal_run_final(self):
        cfg = self._cfg(methods=["GD"], trials=1, lambda1=0.0)
        stats, records = run_trials(cfg)
        ms = stats.per_method["GD"]
        assert ms.count == 1 and ms.failed == 0
        assert ms.mean == ms.median == records["GD"][0].final_f_best
        assert ms.stddev == 0.0

    def test_rerun_is_identical(self):
        cfg = self._cfg()
        s1, r1 = run_trials(cfg)
        s2, r2 = run_trials(cfg)
        for method in cfg.methods:
            assert s1.per_method[method].finals == s2.per_method[method].finals
            assert s1.per_method[method].trajectory == s2.per_method[method].trajectory
            for a, b in zip(r1[method], r2[method]):
                assert np.array_equal(a.f_current, b.f_current)

    def test_parallel_matches_serial(self):
        cfg = self._cfg()
        s1, _ = run_trials(cfg, threads=1)
        s4, _ = run_trials(cfg, threads=4)
        for method in cfg.methods:
            assert s1.per_method[method].finals == s4.per_method[method].finals

    def test_methods_share_instances(self):
        # paired comparison: the first recorded value is f(x0) for every method
        cfg = self._cfg()
        _, records = run_trials(cfg)
        for t in range(cfg.trials):
            starts = {m: records[m][t].f_current[0] for m in cfg.methods}
            assert len(set(starts.values())) == 1

    def test_method_streams_independent_of_listing_order(self):
        s1, _ = run_trials(self._cfg(methods=["S-SPEG", "H-SPEG"]))
        s2, _ = run_trials(self._cfg(methods=["H-SPEG", "S-SPEG"]))
        assert s1.per_method["S-SPEG"].finals == s2.per_method["S-SPEG"].finals
        assert s1.per_method["H-SPEG"].finals == s2.per_method["H-SPEG"].finals

    def test_failed_cells_excluded_and_counted(self):
        # lambda2 = 1e6 makes constant-step GD diverge on every trial
        cfg = self._cfg(methods=["GD", "SPEG-s"], lambda2=1e6)
        stats, records = run_trials(cfg)
        gd = stats.per_method["GD"]
        assert gd.failed == cfg.trials and gd.count == 0
        assert all(rec.status == "numerical_failure" for rec in records["GD"])
        ok = stats.per_method["SPEG-s"]
        assert ok.failed == 0 and len(ok.finals) == cfg.trials

    def test_trajectory_arrays_cover_every_iteration(self):
        cfg = self._cfg(methods=["SPEG-s"], max_iters=15)
        stats, records = run_trials(cfg)
        traj = stats.per_method["SPEG-s"].trajectory
        width = max(len(r) for r in records["SPEG-s"])
        assert len(traj["mean"]) == len(traj["median"]) == len(traj["stddev"]) == width
        series = np.array([list(r.f_best) + [r.final_f_best] * (width - len(r))
                           for r in records["SPEG-s"]])
        assert np.allclose(traj["mean"], series.mean(axis=0), rtol=1e-15)
