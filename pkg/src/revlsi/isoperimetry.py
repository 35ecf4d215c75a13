"""Gaussian isoperimetric profile ``I = phi o Phi^{-1}`` and Bobkov's inequality.

Bobkov: for smooth ``f`` with values in ``[0, 1]``,
``|E_gamma grad f| <= I(E_gamma f)``, with smoothed half-spaces near-extremal.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr

from .density import ANALYTIC, CallableFunction, Density, RelativeFunction, as_mixture, describe
from .errors import OutOfRange, RangeViolation
from .functionals import DEFAULT_NODES, QuadratureRule, default_gamma_rule, gaussian_grid_rule, relative_moments
from .inequalities import InequalityReport, make_report

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
RANGE_TOL = 1e-12

# Acklam's rational approximation to the normal quantile (relative error ~1.2e-9)
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def gaussian_pdf(x):
    x = np.asarray(x, dtype=float)
    return INV_SQRT_2PI * np.exp(-0.5 * x * x)


def gaussian_cdf(x):
    """``Phi(x)`` through the complementary error function (``ndtr``)."""
    return ndtr(x)


def _acklam(t: np.ndarray) -> np.ndarray:
    out = np.empty_like(t)
    low = t < _P_LOW
    high = t > 1.0 - _P_LOW
    mid = ~(low | high)

    r = np.sqrt(-2.0 * np.log(t[low]))
    out[low] = (((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5]) / \
        ((((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0)

    u = t[mid] - 0.5
    s = u * u
    out[mid] = (((((_A[0] * s + _A[1]) * s + _A[2]) * s + _A[3]) * s + _A[4]) * s + _A[5]) * u / \
        (((((_B[0] * s + _B[1]) * s + _B[2]) * s + _B[3]) * s + _B[4]) * s + 1.0)

    r = np.sqrt(-2.0 * np.log1p(-t[high]))
    out[high] = -(((((_C[0] * r + _C[1]) * r + _C[2]) * r + _C[3]) * r + _C[4]) * r + _C[5]) / \
        ((((_D[0] * r + _D[1]) * r + _D[2]) * r + _D[3]) * r + 1.0)
    return out


def gaussian_quantile(t):
    """``Phi^{-1}(t)``: rational first guess, then two Newton steps on ``Phi``."""
    arr = np.asarray(t, dtype=float)
    if np.any(~((arr > 0) & (arr < 1))):
        raise OutOfRange("quantile argument must lie in (0, 1)")
    flat = arr.ravel()
    x = _acklam(flat)
    for _ in range(2):
        # work in the smaller tail so the residual keeps full relative precision
        upper = x > 0
        resid = np.where(upper, (1.0 - flat) - ndtr(-x), ndtr(x) - flat)
        x = x - resid / gaussian_pdf(x)
    out = x.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def isoperimetric_I(t):
    """``I(t) = phi(Phi^{-1}(t))`` with ``I(0) = I(1) = 0``."""
    arr = np.asarray(t, dtype=float)
    if np.any((arr < 0) | (arr > 1)) or np.any(~np.isfinite(arr)):
        raise OutOfRange("isoperimetric profile is defined on [0, 1]")
    inner = (arr > 0) & (arr < 1)
    out = np.zeros_like(arr)
    if np.any(inner):
        out[inner] = gaussian_pdf(gaussian_quantile(arr[inner]))
    return float(out) if out.ndim == 0 else out


class IsoperimetricProfile:
    """Namespace bundling ``Phi``, ``Phi^{-1}``, ``phi`` and ``I``."""

    cdf = staticmethod(gaussian_cdf)
    quantile = staticmethod(gaussian_quantile)
    pdf = staticmethod(gaussian_pdf)
    I = staticmethod(isoperimetric_I)


def check_bobkov(f: RelativeFunction, rule: QuadratureRule | None = None, nodes: int = DEFAULT_NODES,
                 tol: float | None = None) -> InequalityReport:
    """``|E_gamma grad f| <= I(E_gamma f)`` for ``f`` valued in ``[0, 1]``."""
    rule = default_gamma_rule(f, nodes) if rule is None else rule
    second = rule.refined()
    for r in (rule, second):
        v = f.value(r.nodes)
        if np.any(v < -RANGE_TOL) or np.any(v > 1.0 + RANGE_TOL):
            raise RangeViolation("Bobkov's inequality needs 0 <= f <= 1 on every quadrature node")

    def sides(r):
        m = relative_moments(f, r)
        mass = min(max(m.mass, 0.0), 1.0)
        return float(np.linalg.norm(m.mean_grad)), isoperimetric_I(mass)

    l1, r1 = sides(rule)
    l2, r2 = sides(second)
    return make_report("bobkov", l1, r1, f.label, max(abs(l1 - l2), abs(r1 - r2)), tol)


def smoothed_half_space(direction, offset: float = 0.0, eps: float = 1.0) -> CallableFunction:
    """``f(x) = Phi((u.x - offset) / eps)`` for a unit vector ``u``."""
    u = np.atleast_1d(np.asarray(direction, dtype=float))
    u = u / np.linalg.norm(u)
    if not eps > 0:
        raise ValueError("eps must be positive")
    return CallableFunction(
        u.size,
        lambda p: ndtr((p @ u - offset) / eps),
        lambda p: (gaussian_pdf((p @ u - offset) / eps) / eps)[:, None] * u,
        f"Phi((u.x-{offset:g})/{eps:g}) u={u.tolist()}",
    )


def logistic_function(direction, offset: float = 0.0, scale: float = 1.0) -> CallableFunction:
    """``f(x) = 1 / (1 + exp(-(w.x - offset) / scale))``."""
    w = np.atleast_1d(np.asarray(direction, dtype=float))

    def value(p):
        return 0.5 * (1.0 + np.tanh(0.5 * (p @ w - offset) / scale))

    def grad(p):
        s = value(p)
        return (s * (1.0 - s) / scale)[:, None] * w

    return CallableFunction(w.size, value, grad, f"logistic w={w.tolist()} b={offset:g} s={scale:g}")


def density_profile_function(g: Density) -> CallableFunction:
    """``f = g / M`` with ``M`` the sum of component peak heights, so ``0 <= f <= 1``."""
    if not isinstance(g, ANALYTIC):
        raise RangeViolation("density-derived test functions need an analytic density")
    mix = as_mixture(g)
    peak = sum(w * float(c.pdf(c.mean)) for w, c in zip(mix.weights, mix.components))
    return CallableFunction(
        g.n,
        lambda p: g.pdf(p) / peak,
        lambda p: g.grad(p) / peak,
        f"g/M for {describe(g)}",
    )


def half_space_gap(eps: float, offset: float = 0.0, n: int = 1, points: int = 4097) -> float:
    """Relative Bobkov gap ``(rhs - lhs) / rhs`` for a smoothed half-space.

    Uses a fine trapezoid rule because the integrand is ``eps``-narrow.
    """
    f = smoothed_half_space(np.eye(n)[0], offset, eps)
    rep = check_bobkov(f, rule=gaussian_grid_rule(points, n))
    return rep.slack / rep.rhs
