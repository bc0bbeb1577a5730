"""Assembly of specular directional derivatives, gradients, and Jacobians.

Operations here take analytic one-sided derivatives (or raw function
evaluations, for the finite-difference estimator) and combine them through
the scalar kernels.  The zero direction has derivative zero by convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scalar import INFINITY_THRESHOLD, afun, afun_array, ensure_extended, promote_extended


class HypothesisViolationError(ValueError):
    """Both one-sided derivatives are infinite with the same sign."""


@dataclass(frozen=True)
class OneSidedPair:
    """Forward and backward directional derivatives, as extended reals."""

    plus: float
    minus: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "plus", ensure_extended(self.plus, "plus"))
        object.__setattr__(self, "minus", ensure_extended(self.minus, "minus"))


def specular_from_one_sided(pair: OneSidedPair, vnorm: float) -> float:
    """Specular directional derivative from a one-sided pair along a direction of norm vnorm.

    Finite magnitudes at or above INFINITY_THRESHOLD are promoted to +-inf
    before dispatch.  The result is always finite; a pair infinite with the
    same sign violates the existence hypothesis and is rejected.
    """
    vnorm = float(vnorm)
    if not vnorm > 0.0 or math.isinf(vnorm) or math.isnan(vnorm):
        raise ValueError("vnorm must be a positive finite real")
    plus = promote_extended(pair.plus)
    minus = promote_extended(pair.minus)
    if math.isinf(plus) and math.isinf(minus):
        if plus == minus:
            raise HypothesisViolationError(
                f"one-sided derivatives are both {plus:+g}; specular derivative does not exist"
            )
        return 0.0
    if plus == -minus:
        return 0.0
    if math.isinf(minus):
        return plus + math.copysign(math.hypot(vnorm, plus), minus)
    if math.isinf(plus):
        return minus + math.copysign(math.hypot(vnorm, minus), plus)
    return vnorm * afun(plus / vnorm, minus / vnorm)


def specular_from_one_sided_array(plus: np.ndarray, minus: np.ndarray, vnorm: float = 1.0) -> np.ndarray:
    """Vectorized assembly for arrays of one-sided values along unit-scale directions."""
    plus = np.asarray(plus, dtype=float)
    minus = np.asarray(minus, dtype=float)
    if np.abs(plus).max(initial=0.0) < INFINITY_THRESHOLD and np.abs(minus).max(initial=0.0) < INFINITY_THRESHOLD:
        return vnorm * afun_array(plus / vnorm, minus / vnorm)
    out = np.empty(plus.shape, dtype=float)
    flat_p, flat_m, flat_o = plus.ravel(), minus.ravel(), out.ravel()
    for i in range(flat_p.size):
        flat_o[i] = specular_from_one_sided(OneSidedPair(flat_p[i], flat_m[i]), vnorm)
    return out


def specular_directional(obj, x, v) -> float:
    """Specular derivative of an objective at x along v (zero for v = 0)."""
    v = np.asarray(v, dtype=float)
    vnorm = float(np.linalg.norm(v))
    if vnorm == 0.0:
        return 0.0
    return specular_from_one_sided(obj.one_sided(x, v), vnorm)


def specular_gradient(obj, x) -> np.ndarray:
    """Vector of specular partial derivatives along the standard basis.

    Uses the objective's vectorized ``one_sided_basis`` hook when present,
    otherwise queries ``one_sided`` coordinate by coordinate.
    """
    x = np.asarray(x, dtype=float)
    basis = getattr(obj, "one_sided_basis", None)
    if basis is not None:
        plus, minus = basis(x)
        return specular_from_one_sided_array(plus, minus, 1.0)
    n = obj.dimension
    grad = np.empty(n, dtype=float)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        try:
            grad[i] = specular_from_one_sided(obj.one_sided(x, e), 1.0)
        except HypothesisViolationError as err:
            raise HypothesisViolationError(f"coordinate {i}: {err}") from err
    return grad


def specular_jacobian(components, x) -> np.ndarray:
    """Stacked specular gradients: row j is the gradient of components[j] at x."""
    x = np.asarray(x, dtype=float)
    rows = []
    for j, comp in enumerate(components):
        try:
            rows.append(specular_gradient(comp, x))
        except HypothesisViolationError as err:
            raise HypothesisViolationError(f"component {j}, {err}") from err
    return np.vstack(rows)


def default_fd_schedule() -> list[float]:
    """Dyadic step schedule 2^-k for k = 10..24 (about 1e-3 down to 6e-8)."""
    return [2.0 ** -k for k in range(10, 25)]


@dataclass(frozen=True)
class FdEstimate:
    """Finite-difference estimate with its convergence diagnostics.

    ``agreement`` is the absolute difference between the last two schedule
    values; ``last_two`` carries them whether or not the schedule converged.
    """

    value: float
    agreement: float
    h: float
    converged: bool
    last_two: tuple[float, ...]


def fd_specular_directional(f, x, v, h_schedule=None, rtol: float = 1e-6) -> FdEstimate:
    """Estimate the specular directional derivative of a callable by finite differences.

    Walks a strictly decreasing step schedule, forming at each h the chord
    slopes s+ = (f(x+hv)-f(x))/(h|v|) and s- = (f(x)-f(x-hv))/(h|v|) and the
    finite-h value |v| tan(arctan(s+)/2 + arctan(s-)/2).  Accepts the first
    step at which two consecutive values agree to ``rtol``; otherwise returns
    a non-converged estimate carrying the last two values.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    vnorm = float(np.linalg.norm(v))
    if vnorm == 0.0:
        raise ValueError("direction must be nonzero")
    if h_schedule is None:
        h_schedule = default_fd_schedule()
    fx = float(f(x))
    estimates: list[float] = []
    for h in h_schedule:
        slope_plus = promote_extended((float(f(x + h * v)) - fx) / (h * vnorm))
        slope_minus = promote_extended((fx - float(f(x - h * v))) / (h * vnorm))
        est = vnorm * math.tan(0.5 * math.atan(slope_plus) + 0.5 * math.atan(slope_minus))
        estimates.append(est)
        if len(estimates) >= 2 and math.isclose(est, estimates[-2], rel_tol=rtol, abs_tol=1e-12):
            return FdEstimate(est, abs(est - estimates[-2]), h, True, (estimates[-2], est))
    agreement = abs(estimates[-1] - estimates[-2]) if len(estimates) >= 2 else math.inf
    return FdEstimate(estimates[-1], agreement, h_schedule[-1], False, tuple(estimates[-2:]))


def frechet_residual(obj, x, ell, w) -> float:
    """Gap between the chord-slope average at displacement w and the linear model ell.

    Returns |afun((f(x+w)-f(x))/|w|, (f(x)-f(x-w))/|w|) - <ell, w>/|w||.
    A sampled diagnostic: callers shrink w along fixed directions and check
    that the residual decays.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    w = np.atleast_1d(np.asarray(w, dtype=float))
    ell = np.atleast_1d(np.asarray(ell, dtype=float))
    wnorm = float(np.linalg.norm(w))
    if wnorm == 0.0:
        raise ValueError("displacement must be nonzero")
    fx = float(obj.value(x))
    forward = promote_extended((float(obj.value(x + w)) - fx) / wnorm)
    backward = promote_extended((fx - float(obj.value(x - w))) / wnorm)
    return abs(afun(forward, backward) - float(np.dot(ell, w)) / wnorm)
