"""Seeded multi-trial experiment runner and statistics aggregation.

Randomness comes from counter-based Philox streams keyed through numpy's
SeedSequence: stream (seed, trial, 0) samples the problem instance and
starting point, stream (seed, trial, 1 + i) drives the draws of the method
with canonical index i.  Normal variates use the generator's ziggurat
sampler.  Every method within a trial consumes the identical instance and
starting point, so comparisons are paired; trials are independent and safe
to run concurrently.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .objectives import ElasticNetProblem
from .optimizers import (
    DEFAULT_ETA,
    RunRecord,
    StepSchedule,
    adam_run,
    gd_run,
    hspeg_run,
    speg_run,
    sspeg_run,
)

METHOD_NAMES = ("SPEG-s", "SPEG-g", "S-SPEG", "H-SPEG", "GD", "Adam")

GD_STEP = 1e-3
ADAM_LR = 1e-2
GEOMETRIC_RATIO = 0.5

_CONFIG_FIELDS = {
    "m", "n", "lambda1", "lambda2", "trials", "max_iters",
    "methods", "seed", "switch_k", "schedule_c",
}
_REQUIRED_FIELDS = {"m", "n", "lambda1", "lambda2", "methods", "seed"}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    m: int
    n: int
    lambda1: float
    lambda2: float
    methods: tuple[str, ...]
    seed: int
    trials: int = 20
    max_iters: int = 100
    switch_k: int = 10
    schedule_c: float = 4.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.m < 1 or self.n < 1:
            raise ConfigError("m and n must be positive integers")
        if self.lambda1 < 0.0 or self.lambda2 < 0.0:
            raise ConfigError("lambda1 and lambda2 must be nonnegative")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be at least 1")
        if self.switch_k < 0:
            raise ConfigError("switch_k must be nonnegative")
        if not self.schedule_c > 0.0:
            raise ConfigError("schedule_c must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must fit in 64 unsigned bits")
        if not self.methods:
            raise ConfigError("at least one method is required")
        for name in self.methods:
            if name not in METHOD_NAMES:
                raise ConfigError(f"unknown method {name!r}; valid: {', '.join(METHOD_NAMES)}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("duplicate method names")

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        unknown = set(raw) - _CONFIG_FIELDS
        if unknown:
            raise ConfigError(f"unknown config fields: {', '.join(sorted(unknown))}")
        missing = _REQUIRED_FIELDS - set(raw)
        if missing:
            raise ConfigError(f"missing config fields: {', '.join(sorted(missing))}")
        try:
            return cls(**raw)
        except TypeError as err:
            raise ConfigError(str(err)) from err

    def as_dict(self) -> dict:
        return {
            "m": self.m, "n": self.n,
            "lambda1": self.lambda1, "lambda2": self.lambda2,
            "trials": self.trials, "max_iters": self.max_iters,
            "methods": list(self.methods), "seed": self.seed,
            "switch_k": self.switch_k, "schedule_c": self.schedule_c,
        }


def substream(seed: int, trial: int, role: int) -> np.random.Generator:
    """Philox generator for the (trial, role) substream of a master seed."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial), int(role)))
    return np.random.Generator(np.random.Philox(ss))


def sample_instance(m: int, n: int, rng: np.random.Generator):
    """Draw one problem instance: A (row-major m x n), then b, then x0, all N(0, 1)."""
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    x0 = rng.standard_normal(n)
    return A, b, x0


def aggregate_stats(finals) -> tuple[float, float, float]:
    """(mean, median, sample standard deviation) of the final objective values.

    Median uses the midpoint convention for even counts; the deviation uses
    the n-1 divisor and is defined as zero for a single value.
    """
    finals = np.asarray(list(finals), dtype=float)
    if finals.size == 0:
        raise ValueError("cannot aggregate an empty sample")
    stddev = float(np.std(finals, ddof=1)) if finals.size > 1 else 0.0
    return float(np.mean(finals)), float(np.median(finals)), stddev


def run_method(method: str, problem: ElasticNetProblem, x0, cfg: ExperimentConfig,
               rng: np.random.Generator) -> RunRecord:
    """Run one configured method on one instance."""
    diminishing = StepSchedule.normalized_diminishing(cfg.schedule_c)
    if method == "SPEG-s":
        return speg_run(problem, x0, diminishing, cfg.max_iters, DEFAULT_ETA)
    if method == "SPEG-g":
        return speg_run(problem, x0, StepSchedule.geometric(GEOMETRIC_RATIO), cfg.max_iters, DEFAULT_ETA)
    if method == "S-SPEG":
        return sspeg_run(problem, x0, diminishing, cfg.max_iters, DEFAULT_ETA, rng)
    if method == "H-SPEG":
        return hspeg_run(problem, x0, diminishing, cfg.switch_k, cfg.max_iters, DEFAULT_ETA, rng)
    if method == "GD":
        return gd_run(problem, x0, GD_STEP, cfg.max_iters)
    if method == "Adam":
        return adam_run(problem, x0, ADAM_LR, cfg.max_iters)
    raise ConfigError(f"unknown method {method!r}")


@dataclass
class MethodStats:
    """Aggregated results of one method over the successful trials."""

    mean: float
    median: float
    stddev: float
    count: int
    failed: int
    finals: list[float]
    trajectory: dict[str, list[float]] = field(default_factory=dict)


@dataclass
class TrialStats:
    per_method: dict[str, MethodStats]


def _run_trial(cfg: ExperimentConfig, trial: int) -> dict[str, RunRecord]:
    A, b, x0 = sample_instance(cfg.m, cfg.n, substream(cfg.seed, trial, 0))
    problem = ElasticNetProblem(A, b, cfg.lambda1, cfg.lambda2)
    out: dict[str, RunRecord] = {}
    for method in cfg.methods:
        rng = substream(cfg.seed, trial, 1 + METHOD_NAMES.index(method))
        out[method] = run_method(method, problem, x0, cfg, rng)
    return out


def _aggregate(cfg: ExperimentConfig, records: dict[str, list[RunRecord]]) -> TrialStats:
    per_method: dict[str, MethodStats] = {}
    for method in cfg.methods:
        runs = records[method]
        ok = [r for r in runs if r.status != "numerical_failure"]
        failed = len(runs) - len(ok)
        if ok:
            mean, median, stddev = aggregate_stats([r.final_f_best for r in ok])
            finals = [r.final_f_best for r in ok]
            width = max(len(r) for r in ok)
            series = np.empty((len(ok), width))
            for i, r in enumerate(ok):
                series[i, : len(r)] = r.f_best
                series[i, len(r):] = r.f_best[-1]  # stopped runs hold their best value
            traj = {
                "mean": np.mean(series, axis=0).tolist(),
                "median": np.median(series, axis=0).tolist(),
                "stddev": (np.std(series, axis=0, ddof=1) if len(ok) > 1
                           else np.zeros(width)).tolist(),
            }
        else:
            mean = median = stddev = float("nan")
            finals = []
            traj = {"mean": [], "median": [], "stddev": []}
        per_method[method] = MethodStats(mean, median, stddev, len(ok), failed, finals, traj)
    return TrialStats(per_method)


def default_threads() -> int:
    env = os.environ.get("SPECOPT_THREADS")
    if env:
        try:
            threads = int(env)
        except ValueError:
            raise ConfigError(f"SPECOPT_THREADS must be an integer, got {env!r}") from None
        if threads < 1:
            raise ConfigError("SPECOPT_THREADS must be at least 1")
        return threads
    return os.cpu_count() or 1


def run_trials(cfg: ExperimentConfig, threads: int | None = None):
    """Execute every configured method over all trials.

    Returns (TrialStats, records) where records maps method name to the list
    of RunRecords in trial order.  Failed cells (numerical_failure) stay in
    the records but are excluded from the aggregates.
    """
    threads = default_threads() if threads is None else threads
    if threads > 1 and cfg.trials > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_trial = list(pool.map(lambda t: _run_trial(cfg, t), range(cfg.trials)))
    else:
        per_trial = [_run_trial(cfg, t) for t in range(cfg.trials)]
    records = {method: [per_trial[t][method] for t in range(cfg.trials)] for method in cfg.methods}
    return _aggregate(cfg, records), records
