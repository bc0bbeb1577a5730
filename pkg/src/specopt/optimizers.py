"""Specular-gradient optimizers, classical baselines, schedules, and run records.

All runs share one iteration loop: at iterate x_k the step direction and the
objective value are evaluated and recorded, the stop conditions are checked,
and the update x_{k+1} = x_k - h_k g_k is applied.  A run therefore records
one row per visited iterate, the last one carrying the gradient that
triggered the stop.  Methods are not descent methods, so the best iterate is
tracked separately.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .objectives import ElasticNetProblem
from .specular import HypothesisViolationError, specular_gradient

DEFAULT_ETA = 1e-12


@dataclass(frozen=True)
class StepSchedule:
    """Step-size rule h_k.

    normalized_diminishing(c):  h_k = c / ((k+1) ||g_k||)   (step length c/(k+1))
    geometric(ratio):           h_k = ratio^(k+1) / ||g_k|| (step length ratio^(k+1))
    constant(h):                h_k = h

    The diminishing lengths t_k = c/(k+1) are square-summable but not
    summable; the geometric lengths are summable, which is what makes that
    variant stall away from a minimizer.
    """

    kind: str
    parameter: float

    @classmethod
    def normalized_diminishing(cls, c: float) -> "StepSchedule":
        if not c > 0.0:
            raise ValueError("c must be positive")
        return cls("normalized_diminishing", float(c))

    @classmethod
    def geometric(cls, ratio: float) -> "StepSchedule":
        if not 0.0 < ratio < 1.0:
            raise ValueError("ratio must lie in (0, 1)")
        return cls("geometric", float(ratio))

    @classmethod
    def constant(cls, h: float) -> "StepSchedule":
        if not h > 0.0:
            raise ValueError("h must be positive")
        return cls("constant", float(h))

    def step_size(self, k: int, grad_norm: float) -> float:
        if self.kind == "normalized_diminishing":
            return self.parameter / ((k + 1) * grad_norm)
        if self.kind == "geometric":
            return self.parameter ** (k + 1) / grad_norm
        return self.parameter


@dataclass
class RunRecord:
    """Per-iteration trajectory of one optimizer run.

    Row k holds the objective value, running best value, and step-direction
    norm at iterate x_k.  ``h_trace`` holds the step sizes actually applied
    (one fewer entry than rows when the run stopped cleanly).
    """

    iters: np.ndarray
    f_current: np.ndarray
    f_best: np.ndarray
    grad_norm: np.ndarray
    wall_time_ms: np.ndarray
    status: str
    x_best: np.ndarray
    h_trace: np.ndarray

    def __len__(self) -> int:
        return self.iters.size

    @property
    def final_f_best(self) -> float:
        return float(self.f_best[-1])


def _run_loop(value_fn, direction_fn, sched: StepSchedule, x0, max_iters: int, eta: float) -> RunRecord:
    """Shared iteration engine.  direction_fn(k, x) -> (step_vector, grad_norm)."""
    if max_iters < 0:
        raise ValueError("max_iters must be nonnegative")
    x = np.array(x0, dtype=float, copy=True)
    start = time.perf_counter()
    ks: list[int] = []
    fc: list[float] = []
    fb: list[float] = []
    gn: list[float] = []
    wt: list[float] = []
    h_trace: list[float] = []
    f_best = math.inf
    x_best = x.copy()
    status = "max_iters"
    k = 0
    while True:
        try:
            g, gnorm = direction_fn(k, x)
        except HypothesisViolationError:
            # the iterate diverged far enough to promote a smooth slope to
            # infinity; report the run as failed, keeping the record so far
            g, gnorm = None, math.inf
        f = value_fn(x)
        if f < f_best:
            f_best = f
            x_best = x.copy()
        ks.append(k)
        fc.append(f)
        fb.append(f_best)
        gn.append(gnorm)
        wt.append((time.perf_counter() - start) * 1e3)
        if not (math.isfinite(f) and math.isfinite(gnorm)):
            status = "numerical_failure"
            break
        if gnorm <= eta:
            status = "stationary"
            break
        if k >= max_iters:
            status = "max_iters"
            break
        h = sched.step_size(k, gnorm)
        x = x - h * g
        h_trace.append(h)
        k += 1
    return RunRecord(
        iters=np.asarray(ks, dtype=int),
        f_current=np.asarray(fc),
        f_best=np.asarray(fb),
        grad_norm=np.asarray(gn),
        wall_time_ms=np.asarray(wt),
        status=status,
        x_best=x_best,
        h_trace=np.asarray(h_trace),
    )


def speg_run(obj, x0, sched: StepSchedule, max_iters: int, eta: float = DEFAULT_ETA) -> RunRecord:
    """Specular gradient method: x_{k+1} = x_k - h_k grad_s f(x_k).

    Stops at the iteration cap or once ||grad_s f(x_k)|| <= eta (a stationary
    point; with a gradient-normalized schedule this also avoids dividing by
    zero).
    """

    def direction(k, x):
        g = specular_gradient(obj, x)
        return g, float(np.linalg.norm(g))

    return _run_loop(lambda x: float(obj.value(x)), direction, sched, x0, max_iters, eta)


def gd_run(obj, x0, h: float, max_iters: int) -> RunRecord:
    """Constant-step gradient descent along the specular gradient.

    At smooth points the specular gradient equals the classical gradient, so
    this is plain gradient descent wherever the objective is differentiable.
    """
    return speg_run(obj, x0, StepSchedule.constant(h), max_iters, eta=0.0)


def adam_run(obj, x0, lr: float, max_iters: int,
             beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> RunRecord:
    """Adam with bias correction, driven by the specular gradient."""
    if not lr > 0.0:
        raise ValueError("lr must be positive")
    x0 = np.asarray(x0, dtype=float)
    moment = np.zeros_like(x0)
    second = np.zeros_like(x0)

    def direction(k, x):
        nonlocal moment, second
        g = specular_gradient(obj, x)
        moment = beta1 * moment + (1.0 - beta1) * g
        second = beta2 * second + (1.0 - beta2) * g * g
        m_hat = moment / (1.0 - beta1 ** (k + 1))
        v_hat = second / (1.0 - beta2 ** (k + 1))
        return m_hat / (np.sqrt(v_hat) + eps), float(np.linalg.norm(g))

    return _run_loop(lambda x: float(obj.value(x)), direction, StepSchedule.constant(lr), x0, max_iters, eta=0.0)


def sspeg_run(problem: ElasticNetProblem, x0, sched: StepSchedule, max_iters: int,
              eta: float = DEFAULT_ETA, rng: np.random.Generator | None = None) -> RunRecord:
    """Stochastic specular gradient method over the sample decomposition.

    Each iteration draws a sample index uniformly (with replacement), steps
    along the specular gradient of that component, and normalizes the step by
    the component gradient norm.  Objective values are those of the full
    problem, so best-iterate tracking is exact at O(m n) cost per iteration.
    """
    if rng is None:
        raise ValueError("sspeg_run needs a seeded random generator")
    m = problem.m

    def direction(k, x):
        j = int(rng.integers(m))
        g = specular_gradient(problem.component(j), x)
        return g, float(np.linalg.norm(g))

    return _run_loop(lambda x: float(problem.value(x)), direction, sched, x0, max_iters, eta)


def hspeg_run(problem: ElasticNetProblem, x0, sched: StepSchedule, switch_k: int = 10,
              max_iters: int = 100, eta: float = DEFAULT_ETA,
              rng: np.random.Generator | None = None) -> RunRecord:
    """Hybrid method: full specular gradient for the first switch_k steps, stochastic after.

    Iteration numbering and the step schedule continue across the switch.
    switch_k >= max_iters degenerates to the full method (the generator is
    never consulted); switch_k = 0 degenerates to the stochastic one.
    """
    if switch_k < 0:
        raise ValueError("switch_k must be nonnegative")
    if switch_k >= max_iters:
        return speg_run(problem, x0, sched, max_iters, eta)
    if switch_k == 0:
        return sspeg_run(problem, x0, sched, max_iters, eta, rng)
    if rng is None:
        raise ValueError("hspeg_run needs a seeded random generator")
    m = problem.m

    def direction(k, x):
        if k < switch_k:
            g = specular_gradient(problem, x)
        else:
            j = int(rng.integers(m))
            g = specular_gradient(problem.component(j), x)
        return g, float(np.linalg.norm(g))

    return _run_loop(lambda x: float(problem.value(x)), direction, sched, x0, max_iters, eta)


@dataclass(frozen=True)
class EuclideanBall:
    """Closed ball {x : ||x - center|| <= radius}."""

    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        center = np.asarray(self.center, dtype=float)
        if not self.radius > 0.0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    def project(self, x: np.ndarray) -> np.ndarray:
        offset = x - self.center
        dist = float(np.linalg.norm(offset))
        if dist <= self.radius:
            return np.array(x, dtype=float)
        return self.center + offset * (self.radius / dist)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box {x : lo <= x <= hi} (coordinatewise)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self) -> None:
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("box bounds must satisfy lo <= hi coordinatewise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def project(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lo, self.hi)


def projected_speg_step(x, g, h: float, constraint) -> np.ndarray:
    """One projected update: the orthogonal projection of x - h g onto the set."""
    if not h > 0.0:
        raise ValueError("step size must be positive")
    x = np.asarray(x, dtype=float)
    g = np.asarray(g, dtype=float)
    return constraint.project(x - h * g)


def basic_inequality_bound(x0, xstar, schedule_trace) -> np.ndarray:
    """Best-iterate suboptimality bounds of the normalized subgradient analysis.

    Entry k is (||x0 - xstar||^2 + sum_{l<=k} h_l^2 ||g_l||^2) / (2 sum_{l<=k} h_l),
    valid against f(best iterate among x_0..x_k) - f(xstar) when xstar is a
    minimizer.  schedule_trace is a sequence of (h_k, grad_norm_k) pairs.
    """
    trace = list(schedule_trace)
    if not trace:
        raise ValueError("schedule trace must be nonempty")
    x0 = np.asarray(x0, dtype=float)
    xstar = np.asarray(xstar, dtype=float)
    r2 = float(np.dot(x0 - xstar, x0 - xstar))
    hs = np.asarray([h for h, _ in trace], dtype=float)
    gs = np.asarray([g for _, g in trace], dtype=float)
    num = r2 + np.cumsum(hs * hs * gs * gs)
    den = 2.0 * np.cumsum(hs)
    return num / den
