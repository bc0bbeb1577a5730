"""Invariant suites behind the ``check`` command.

Each suite draws its own deterministic random sample, verifies one family of
identities or inequalities, and reports the worst violation it saw.  The
``samples`` argument scales the sampling effort (the fast level uses 1e2,
the full level 1e4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specular
from .objectives import DiagonalLasso, ElasticNetProblem, catalog_1d_names, test_function_1d
from .optimizers import StepSchedule, basic_inequality_bound, speg_run
from .scalar import afun, afun_tan_form, bfun
from .specular import fd_specular_directional, specular_from_one_sided, specular_gradient


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _slopes(rng: np.random.Generator, size: int) -> np.ndarray:
    """Signed log-uniform slopes covering magnitudes 1e-6 .. 1e6."""
    mag = 10.0 ** rng.uniform(-6.0, 6.0, size)
    return np.where(rng.random(size) < 0.5, -mag, mag)


def scalar_identities(samples: int, rng: np.random.Generator) -> SuiteResult:
    alphas = _slopes(rng, samples)
    betas = _slopes(rng, samples)
    cs = 10.0 ** rng.uniform(-6.0, 6.0, samples)
    worst = 0.0
    for alpha, beta, c in zip(alphas, betas, cs):
        val = afun(alpha, beta)
        if afun(beta, alpha) != val:
            return SuiteResult("scalar-identities", False, f"symmetry broken at ({alpha}, {beta})")
        if not min(alpha, beta) <= val <= max(alpha, beta):
            return SuiteResult("scalar-identities", False, f"betweenness broken at ({alpha}, {beta})")
        if abs(val) > abs(alpha + beta) / 2.0 + 1e-12:
            return SuiteResult("scalar-identities", False, f"magnitude bound broken at ({alpha}, {beta})")
        err = abs(val - afun_tan_form(alpha, beta)) / (1.0 + abs(val))
        scaled = bfun(alpha, beta, c)
        err = max(err, abs(scaled - afun(alpha / c, beta / c)) / (1.0 + abs(scaled)))
        worst = max(worst, err)
    passed = worst <= 1e-9
    return SuiteResult("scalar-identities", passed, f"worst relative form error {worst:.3e}")


def _random_instance(rng: np.random.Generator, max_mn: int = 12) -> ElasticNetProblem:
    m = int(rng.integers(1, max_mn))
    n = int(rng.integers(1, max_mn))
    lam1 = float(rng.uniform(0.0, 2.0))
    lam2 = float(rng.uniform(0.0, 2.0))
    return ElasticNetProblem(rng.standard_normal((m, n)), rng.standard_normal(m), lam1, lam2)


def ordering_lemma(samples: int, rng: np.random.Generator) -> SuiteResult:
    worst = -math.inf
    for _ in range(samples):
        p = _random_instance(rng)
        x = rng.standard_normal(p.n)
        v = rng.standard_normal(p.n)
        pair = p.one_sided(x, v)
        ds = specular_from_one_sided(pair, float(np.linalg.norm(v)))
        lower = p.value(x) - p.value(x - v)
        upper = p.value(x + v) - p.value(x)
        chain = (lower - pair.minus, pair.minus - ds, ds - pair.plus, pair.plus - upper)
        worst = max(worst, *chain)
    passed = worst <= 1e-9
    return SuiteResult("ordering-lemma", passed, f"worst chain violation {worst:.3e}")


def subgradient_inequality(samples: int, rng: np.random.Generator) -> SuiteResult:
    worst = -math.inf
    for _ in range(samples):
        p = _random_instance(rng)
        x = rng.standard_normal(p.n)
        w = rng.standard_normal(p.n)
        g = specular_gradient(p, x)
        fw = p.value(w)
        gap = p.value(x) + float(g @ (w - x)) - fw - 1e-8 * (1.0 + abs(fw))
        worst = max(worst, gap)
    passed = worst <= 0.0
    return SuiteResult("subgradient-inequality", passed, f"worst inequality slack {worst:.3e}")


def quasi_fermat(samples: int, rng: np.random.Generator) -> SuiteResult:
    """Directional bound |d_s f(x*)| <= ||v|| at exact soft-threshold minimizers."""
    worst = -math.inf
    n_problems = max(1, samples // 20)
    for _ in range(n_problems):
        n = int(rng.integers(2, 12))
        lasso = DiagonalLasso(rng.uniform(0.5, 2.0, n), rng.uniform(-3.0, 3.0, n), 1.0)
        xstar = lasso.minimizer()
        grad = specular_gradient(lasso, xstar)
        worst = max(worst, float(np.abs(grad).max()) - 1.0)  # coordinate directions
        for _ in range(20):
            v = rng.standard_normal(n)
            vnorm = float(np.linalg.norm(v))
            ds = specular_from_one_sided(lasso.one_sided(xstar, v), vnorm)
            worst = max(worst, abs(ds) - vnorm)
    passed = worst <= 1e-6
    return SuiteResult("quasi-fermat", passed, f"worst directional excess {worst:.3e}")


def quasi_mvt(samples: int, rng: np.random.Generator) -> SuiteResult:
    """Secant slopes sandwiched by grid extremes of the 1-D specular derivative."""
    intervals = max(2, samples // 25)
    grid_points = 10_000
    worst = -math.inf
    for name in catalog_1d_names():
        obj = test_function_1d(name)
        for _ in range(intervals):
            a, bb = np.sort(rng.uniform(-3.0, 3.0, 2))
            if bb - a < 1e-3:
                bb = a + 1e-3
            ts = np.linspace(a, bb, grid_points + 2)[1:-1]
            right, left = obj.lateral_slopes(ts)
            ds = specular.specular_from_one_sided_array(right, left, 1.0)
            secant = obj.value([bb]) - obj.value([a])
            slack = 1e-3 * (bb - a)
            lo = ds.min() * (bb - a)
            hi = ds.max() * (bb - a)
            worst = max(worst, lo - secant - slack, secant - hi - slack)
    passed = worst <= 0.0
    return SuiteResult("quasi-mvt", passed, f"worst sandwich excess {worst:.3e}")


def estimator_consistency(samples: int, rng: np.random.Generator) -> SuiteResult:
    pts = max(4, samples // 10)
    worst = 0.0
    for name in catalog_1d_names():
        obj = test_function_1d(name)
        xs = rng.uniform(-2.0, 2.0, pts)
        xs = np.where(np.abs(xs) < 1e-3, 0.0, xs)  # keep clear of the sub-step kink band
        for t in xs:
            analytic = specular_from_one_sided(obj.one_sided([t], [1.0]), 1.0)
            est = fd_specular_directional(lambda z: obj.value(z), [t], [1.0])
            worst = max(worst, abs(est.value - analytic))
    passed = worst <= 1e-5
    return SuiteResult("estimator-consistency", passed, f"worst |fd - analytic| {worst:.3e}")


def basic_inequality(samples: int, rng: np.random.Generator) -> SuiteResult:
    n_problems = max(2, samples // 50)
    iters = 2000
    worst = -math.inf
    for _ in range(n_problems):
        n = int(rng.integers(2, 12))
        lasso = DiagonalLasso(rng.uniform(0.5, 2.0, n), rng.uniform(-3.0, 3.0, n), 1.0)
        x0 = rng.standard_normal(n)
        record = speg_run(lasso, x0, StepSchedule.normalized_diminishing(4.0), iters)
        fstar = lasso.value(lasso.minimizer())
        bounds = basic_inequality_bound(x0, lasso.minimizer(),
                                        zip(record.h_trace, record.grad_norm[: record.h_trace.size]))
        gaps = record.f_best[: bounds.size] - fstar
        worst = max(worst, float((gaps - bounds).max()))
    passed = worst <= 1e-9
    return SuiteResult("basic-inequality", passed, f"worst bound violation {worst:.3e}")


SUITES = (
    scalar_identities,
    ordering_lemma,
    subgradient_inequality,
    quasi_fermat,
    quasi_mvt,
    estimator_consistency,
    basic_inequality,
)


def run_suites(level: str, seed: int = 20_260_810) -> list[SuiteResult]:
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    samples = 100 if level == "fast" else 10_000
    results = []
    for i, suite in enumerate(SUITES):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(i,))))
        results.append(suite(samples, rng))
    return results
