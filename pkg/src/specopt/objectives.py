"""Convex objective catalog with analytic one-sided directional-derivative oracles.

Every member exposes ``value(x)``, ``one_sided(x, v) -> OneSidedPair`` and a
``dimension``; the matrix-backed objectives additionally provide the
vectorized ``one_sided_basis(x)`` hook consumed by the gradient assembly.
The absolute-value penalty contributes, per coordinate i,

    d+(x_i, v_i) = sign(x_i) v_i  if x_i != 0  else |v_i|
    d-(x_i, v_i) = sign(x_i) v_i  if x_i != 0  else -|v_i|

where the x_i = 0 branch is dispatched on exact floating equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol, runtime_checkable

import numpy as np

from .specular import OneSidedPair


@runtime_checkable
class Objective(Protocol):
    """Convex function with an analytic one-sided directional-derivative oracle."""

    dimension: int

    def value(self, x) -> float: ...

    def one_sided(self, x, v) -> OneSidedPair: ...


def _abs_kink_terms(x: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    """Forward/backward contributions of sum_i |x_i| along v."""
    zero = x == 0.0
    signed = np.sign(x) * v
    plus = float(np.where(zero, np.abs(v), signed).sum())
    minus = float(np.where(zero, -np.abs(v), signed).sum())
    return plus, minus


@dataclass(frozen=True)
class ElasticNetProblem:
    """Least squares with ridge and lasso penalties.

    value(x) = ||A x - b||^2 / (2 m) + (lambda2 / 2) ||x||^2 + lambda1 ||x||_1
    """

    A: np.ndarray
    b: np.ndarray
    lambda1: float
    lambda2: float

    def __post_init__(self) -> None:
        A = np.ascontiguousarray(np.asarray(self.A, dtype=float))
        b = np.ascontiguousarray(np.asarray(self.b, dtype=float))
        if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
            raise ValueError("A must be a nonempty m x n matrix")
        if b.shape != (A.shape[0],):
            raise ValueError("b must have one entry per row of A")
        if not (self.lambda1 >= 0.0 and self.lambda2 >= 0.0):
            raise ValueError("regularization weights must be nonnegative")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "lambda1", float(self.lambda1))
        object.__setattr__(self, "lambda2", float(self.lambda2))

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def dimension(self) -> int:
        return self.A.shape[1]

    def _check_dim(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected a vector of dimension {self.n}, got shape {x.shape}")
        return x

    def value(self, x) -> float:
        x = self._check_dim(x)
        r = self.A @ x - self.b
        return float(0.5 * (r @ r) / self.m + 0.5 * self.lambda2 * (x @ x)
                     + self.lambda1 * np.abs(x).sum())

    def smooth_gradient(self, x) -> np.ndarray:
        """Gradient of the differentiable part: A^T (A x - b) / m + lambda2 x."""
        x = self._check_dim(x)
        return self.A.T @ (self.A @ x - self.b) / self.m + self.lambda2 * x

    def one_sided(self, x, v) -> OneSidedPair:
        x = self._check_dim(x)
        v = self._check_dim(v)
        gv = float(self.smooth_gradient(x) @ v)
        if self.lambda1 == 0.0:
            return OneSidedPair(gv, gv)
        kink_plus, kink_minus = _abs_kink_terms(x, v)
        return OneSidedPair(gv + self.lambda1 * kink_plus, gv + self.lambda1 * kink_minus)

    def one_sided_basis(self, x) -> tuple[np.ndarray, np.ndarray]:
        """One-sided partials along every e_i at once."""
        g = self.smooth_gradient(x)
        if self.lambda1 == 0.0:
            return g, g.copy()
        zero = x == 0.0
        sgn = np.sign(x)
        plus = g + self.lambda1 * np.where(zero, 1.0, sgn)
        minus = g + self.lambda1 * np.where(zero, -1.0, sgn)
        return plus, minus

    def component(self, j: int) -> "ElasticNetComponent":
        """Sample term f_j (0-based j) with the shared regularizers.

        f_j(x) = (a_j . x - b_j)^2 / 2 + (lambda2 / 2) ||x||^2 + lambda1 ||x||_1,
        so that the mean of the components reproduces value() exactly.
        """
        if not 0 <= j < self.m:
            raise IndexError(f"component index {j} out of range for m={self.m}")
        return ElasticNetComponent(self.A[j], float(self.b[j]), self.lambda1, self.lambda2)


@dataclass(frozen=True)
class ElasticNetComponent:
    """One squared residual plus the shared elastic-net regularizers."""

    a: np.ndarray
    bj: float
    lambda1: float
    lambda2: float

    @property
    def dimension(self) -> int:
        return self.a.shape[0]

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        r = float(self.a @ x) - self.bj
        return float(0.5 * r * r + 0.5 * self.lambda2 * (x @ x) + self.lambda1 * np.abs(x).sum())

    def smooth_gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.a * (float(self.a @ x) - self.bj) + self.lambda2 * x

    def one_sided(self, x, v) -> OneSidedPair:
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        gv = float(self.smooth_gradient(x) @ v)
        if self.lambda1 == 0.0:
            return OneSidedPair(gv, gv)
        kink_plus, kink_minus = _abs_kink_terms(x, v)
        return OneSidedPair(gv + self.lambda1 * kink_plus, gv + self.lambda1 * kink_minus)

    def one_sided_basis(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        g = self.smooth_gradient(x)
        if self.lambda1 == 0.0:
            return g, g.copy()
        zero = x == 0.0
        sgn = np.sign(x)
        return g + self.lambda1 * np.where(zero, 1.0, sgn), g + self.lambda1 * np.where(zero, -1.0, sgn)


def sum_abs(n: int) -> ElasticNetProblem:
    """The pure l1 objective sum_i |x_i| in dimension n (zero data term)."""
    return ElasticNetProblem(np.zeros((1, n)), np.zeros(1), 1.0, 0.0)


def diagonal_lasso_minimizer(d, b, lambda1: float) -> np.ndarray:
    """Closed-form minimizer of sum_i d_i (x_i - b_i)^2 / 2 + lambda1 |x_i|.

    Per coordinate: soft threshold x_i = sign(b_i) max(|b_i| - lambda1/d_i, 0).
    """
    d = np.asarray(d, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(d <= 0.0):
        raise ValueError("curvatures d must be strictly positive")
    if lambda1 < 0.0:
        raise ValueError("lambda1 must be nonnegative")
    return np.sign(b) * np.maximum(np.abs(b) - lambda1 / d, 0.0)


@dataclass(frozen=True)
class DiagonalLasso:
    """Separable strongly convex test problem with a known minimizer."""

    d: np.ndarray
    b: np.ndarray
    lambda1: float

    def __post_init__(self) -> None:
        d = np.asarray(self.d, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if d.ndim != 1 or d.shape != b.shape:
            raise ValueError("d and b must be vectors of equal length")
        if np.any(d <= 0.0):
            raise ValueError("curvatures d must be strictly positive")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "lambda1", float(self.lambda1))

    @property
    def dimension(self) -> int:
        return self.d.shape[0]

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.sum(0.5 * self.d * (x - self.b) ** 2) + self.lambda1 * np.abs(x).sum())

    def smooth_gradient(self, x) -> np.ndarray:
        return self.d * (np.asarray(x, dtype=float) - self.b)

    def one_sided(self, x, v) -> OneSidedPair:
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        gv = float(self.smooth_gradient(x) @ v)
        if self.lambda1 == 0.0:
            return OneSidedPair(gv, gv)
        kink_plus, kink_minus = _abs_kink_terms(x, v)
        return OneSidedPair(gv + self.lambda1 * kink_plus, gv + self.lambda1 * kink_minus)

    def one_sided_basis(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        g = self.smooth_gradient(x)
        if self.lambda1 == 0.0:
            return g, g.copy()
        zero = x == 0.0
        sgn = np.sign(x)
        return g + self.lambda1 * np.where(zero, 1.0, sgn), g + self.lambda1 * np.where(zero, -1.0, sgn)

    def minimizer(self) -> np.ndarray:
        return diagonal_lasso_minimizer(self.d, self.b, self.lambda1)


def _scalar(x) -> float:
    a = np.asarray(x, dtype=float).reshape(-1)
    if a.size != 1:
        raise ValueError("expected a one-dimensional point")
    return float(a[0])


@dataclass(frozen=True)
class PiecewiseScalar:
    """One-dimensional objective defined by a value function and its lateral slopes.

    ``left_slope(t)``/``right_slope(t)`` are the one-sided classical slopes
    just left/right of t; both accept scalars or arrays.
    """

    name: str
    fn: Callable
    left_slope: Callable
    right_slope: Callable
    dimension: int = field(default=1, init=False)

    def value(self, x) -> float:
        return float(self.fn(_scalar(x)))

    def one_sided(self, x, v) -> OneSidedPair:
        t = _scalar(x)
        w = _scalar(v)
        if w == 0.0:
            return OneSidedPair(0.0, 0.0)
        if w > 0.0:
            return OneSidedPair(w * float(self.right_slope(t)), w * float(self.left_slope(t)))
        return OneSidedPair(w * float(self.left_slope(t)), w * float(self.right_slope(t)))

    def one_sided_basis(self, x) -> tuple[np.ndarray, np.ndarray]:
        t = _scalar(x)
        return (np.array([float(self.right_slope(t))]), np.array([float(self.left_slope(t))]))

    def lateral_slopes(self, ts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized (right, left) slopes on a grid of points."""
        ts = np.asarray(ts, dtype=float)
        return np.asarray(self.right_slope(ts), dtype=float), np.asarray(self.left_slope(ts), dtype=float)


_CATALOG_1D: dict[str, PiecewiseScalar] = {
    "abs": PiecewiseScalar(
        "abs",
        fn=np.abs,
        left_slope=lambda t: np.where(t > 0.0, 1.0, -1.0),
        right_slope=lambda t: np.where(t >= 0.0, 1.0, -1.0),
    ),
    "maxaffine": PiecewiseScalar(
        "maxaffine",
        fn=lambda t: np.maximum(t, 2.0 * t),
        left_slope=lambda t: np.where(t > 0.0, 2.0, 1.0),
        right_slope=lambda t: np.where(t >= 0.0, 2.0, 1.0),
    ),
    "quad": PiecewiseScalar(
        "quad",
        fn=lambda t: t * t,
        left_slope=lambda t: 2.0 * t,
        right_slope=lambda t: 2.0 * t,
    ),
    "quadkink": PiecewiseScalar(
        "quadkink",
        fn=lambda t: 0.5 * t * t + np.abs(t),
        left_slope=lambda t: t + np.where(t > 0.0, 1.0, -1.0),
        right_slope=lambda t: t + np.where(t >= 0.0, 1.0, -1.0),
    ),
}


def test_function_1d(name: str) -> PiecewiseScalar:
    """Catalog lookup of the one-dimensional test objectives."""
    try:
        return _CATALOG_1D[name]
    except KeyError:
        raise ValueError(f"unknown test function {name!r}; choose from {sorted(_CATALOG_1D)}") from None


def catalog_1d_names() -> tuple[str, ...]:
    return tuple(sorted(_CATALOG_1D))
