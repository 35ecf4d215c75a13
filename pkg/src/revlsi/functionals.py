"""Quadrature rules and information functionals.

Every functional that is not available in closed form is computed at two
resolutions; the absolute difference is reported as ``estimated_error``.
The default Gauss-Hermite resolution is 64 points per axis (second pass 96).
Grid fields are compared against their stride-2 subgrid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .density import (
    ANALYTIC,
    DEFAULT_GRID_POINTS,
    EPS_FLOOR,
    LOG_2PI,
    MAX_GRID_DIM,
    DensityRatioFunction,
    Density,
    GaussianSpec,
    GridField,
    GridFunction,
    MixtureSpec,
    RelativeFunction,
    as_mixture,
    default_box,
    safe_log,
    xlogx,
)
from .errors import DegenerateSupport, LabError, UnsupportedDimension, UnsupportedRepresentation, ZeroMass

DEFAULT_NODES = 64
MASK_RATIO = 1e-12
MASK_MASS = 1e-6

GAUSSIAN = "gaussian"
LEBESGUE = "lebesgue"
DENSITY = "density"


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights approximating integrals against ``measure``.

    ``measure`` is ``"gaussian"`` (gamma_n), ``"lebesgue"`` (dx on a box) or
    ``"density"`` (h dx for the analytic density stored in ``source``).
    """

    nodes: np.ndarray
    weights: np.ndarray
    measure: str
    points: int
    family: str = "hermite"
    source: object = None

    def __post_init__(self):
        if self.nodes.shape[0] != self.weights.shape[0]:
            raise LabError("node and weight counts differ")

    @property
    def n(self) -> int:
        return self.nodes.shape[1]

    def integrate(self, values) -> float:
        return float(self.weights @ np.asarray(values))

    def refined(self) -> "QuadratureRule":
        """The second-resolution rule used for error estimates."""
        finer = self.points * 3 // 2
        if self.family == "hermite":
            return gauss_hermite_rule(min(finer, 256), self.n)
        if self.family == "density":
            return density_rule(self.source, finer)
        if self.family == "gamma-grid":
            return gaussian_grid_rule(2 * (finer // 2) + 1, self.n, self.source)
        if self.family == "field":
            return field_rule(self.source.coarsened(), self.measure)
        raise LabError(f"cannot refine a {self.family!r} rule")


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    estimated_error: float = 0.0

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class RelativeMoments:
    """Integrals of ``f``-dependent quantities against a rule's measure."""

    mass: float
    f_log_f: float
    mean_grad: np.ndarray
    grad_sq_over_f: float

    @property
    def entropy(self) -> float:
        if not self.mass > 0:
            raise ZeroMass("integral of f vanishes")
        return self.f_log_f - self.mass * math.log(self.mass)


def _readonly(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def _tensor(nodes_1d, weights_1d, n):
    mesh = np.meshgrid(*([nodes_1d] * n), indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=-1)
    wmesh = np.meshgrid(*([weights_1d] * n), indexing="ij")
    weights = np.prod(np.stack([m.ravel() for m in wmesh]), axis=0)
    return nodes, weights


@lru_cache(maxsize=64)
def gauss_hermite_rule(points_per_axis: int, n: int) -> QuadratureRule:
    """Tensor-product Gauss-Hermite rule for the standard Gaussian ``gamma_n``.

    Exact for polynomials of per-axis degree up to ``2 * points_per_axis - 1``.
    """
    if not 2 <= points_per_axis <= 256:
        raise LabError("points_per_axis must lie in [2, 256]")
    if not 1 <= n <= MAX_GRID_DIM:
        raise UnsupportedDimension(f"quadrature supports 1 <= n <= {MAX_GRID_DIM}, got {n}")
    z, w = np.polynomial.hermite_e.hermegauss(points_per_axis)
    w = w / math.sqrt(2.0 * math.pi)
    nodes, weights = _tensor(z, w / w.sum(), n)
    return QuadratureRule(_readonly(nodes), _readonly(weights), GAUSSIAN, points_per_axis)


def density_rule(h: Density, points_per_axis: int | None = None) -> QuadratureRule:
    """Cell-volume rule on the default box of ``h``, weighted by ``h``.

    Integrands such as ``log h`` for a mixture are smooth but far from
    polynomial, where the box rule converges much faster than Gauss-Hermite.
    """
    if not isinstance(h, ANALYTIC):
        raise UnsupportedRepresentation("density rules need an analytic density")
    n = h.n
    if not 1 <= n <= MAX_GRID_DIM:
        raise UnsupportedDimension(f"quadrature supports 1 <= n <= {MAX_GRID_DIM}, got {n}")
    points = DEFAULT_GRID_POINTS[n] if points_per_axis is None else int(points_per_axis)
    if points < 8:
        raise LabError("density rules need at least 8 points per axis")
    lo, hi = default_box(h)
    template = GridField(lo, hi, np.zeros((points,) * n))
    nodes = template.points
    weights = template.cell_volumes.ravel() * h.pdf(nodes)
    return QuadratureRule(nodes, weights, DENSITY, points, "density", h)


def gaussian_grid_rule(points_per_axis: int = 4097, n: int = 1, half_width: float = 12.0) -> QuadratureRule:
    """Trapezoid rule on ``[-half_width, half_width]^n`` weighted by the gamma_n density.

    Suited to integrands with features much narrower than the Gauss-Hermite
    node spacing (e.g. smoothed half-spaces).
    """
    if not 1 <= n <= MAX_GRID_DIM:
        raise UnsupportedDimension(f"quadrature supports 1 <= n <= {MAX_GRID_DIM}, got {n}")
    x = np.linspace(-half_width, half_width, points_per_axis)
    w = np.full(points_per_axis, x[1] - x[0])
    w[0] = w[-1] = 0.5 * w[0]
    w = w * np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    nodes, weights = _tensor(x, w, n)
    return QuadratureRule(nodes, weights, GAUSSIAN, points_per_axis, "gamma-grid", half_width)


def field_rule(fld: GridField, measure: str = LEBESGUE) -> QuadratureRule:
    """Cell-volume rule on a grid field's own nodes (optionally gamma-weighted)."""
    w = fld.cell_volumes.ravel()
    if measure == GAUSSIAN:
        pts = fld.points
        w = w * np.exp(-0.5 * np.sum(pts * pts, axis=1) - 0.5 * fld.n * LOG_2PI)
    return QuadratureRule(fld.points, w, measure, max(fld.shape), "field", fld)


def default_gamma_rule(f: RelativeFunction, nodes: int = DEFAULT_NODES,
                       grid: int | None = None) -> QuadratureRule:
    if isinstance(f, DensityRatioFunction):
        return density_rule(f.h, grid)
    if isinstance(f, GridFunction):
        return field_rule(f.field, GAUSSIAN)
    return gauss_hermite_rule(nodes, f.n)


def relative_moments(f: RelativeFunction, rule: QuadratureRule) -> RelativeMoments:
    """Integrate ``f``, ``f log f``, ``grad f`` and ``|grad f|^2 / f`` against the rule."""
    if rule.n != f.n:
        raise LabError(f"rule dimension {rule.n} differs from function dimension {f.n}")
    x = rule.nodes
    w = rule.weights
    if rule.measure == DENSITY:
        # f = h / gamma_n and the rule integrates against h, so every
        # gamma-integral of f * phi becomes an h-integral of phi.
        if not isinstance(f, DensityRatioFunction) or f.h is not rule.source:
            raise LabError("density rules only integrate the ratio function of their own density")
        lf = f.log_value(x)
        gl = f.grad_log(x)
        return RelativeMoments(float(w.sum()), float(w @ lf), w @ gl, float(w @ np.sum(gl * gl, axis=1)))
    v = f.value(x)
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise LabError("relative function is negative or non-finite on quadrature nodes")
    g = f.grad(x)
    ratio = np.sum(g * g, axis=1) / np.maximum(v, EPS_FLOOR)
    return RelativeMoments(float(w @ v), float(w @ xlogx(v)), w @ g, float(w @ ratio))


def relative_entropy(f: RelativeFunction | GridField, rule: QuadratureRule | None = None,
                     nodes: int = DEFAULT_NODES) -> FunctionalValue:
    """``Ent_mu(f) = int f log f dmu - (int f dmu) log int f dmu``.

    Relative functions default to ``mu = gamma_n``; a grid field is taken
    against Lebesgue measure on its box.
    """
    if isinstance(f, GridField):
        return FunctionalValue(*_pair(_lebesgue_entropy, f, f.coarsened))
    if rule is None:
        rule = default_gamma_rule(f, nodes)
    first = relative_moments(f, rule).entropy
    second = relative_moments(f, rule.refined()).entropy
    return FunctionalValue(first, abs(first - second))


def _lebesgue_entropy(fld: GridField) -> float:
    w = fld.cell_volumes
    mass = float(np.sum(w * fld.values))
    if not mass > 0:
        raise ZeroMass("grid field has zero mass")
    return float(np.sum(w * xlogx(fld.values))) - mass * math.log(mass)


def _pair(fn, first, second):
    """Value at ``first`` and its distance to the value at ``second``.

    ``second`` may be a zero-argument callable so that failures of the primary
    evaluation surface before the comparison object is built.
    """
    a = fn(first)
    b = fn(second() if callable(second) else second)
    return a, abs(a - b)


def shannon_entropy(g: Density, grid: int | None = None) -> FunctionalValue:
    """``H = -int g log g dx`` in nats."""
    if isinstance(g, GaussianSpec):
        return FunctionalValue(0.5 * g.n * (1.0 + LOG_2PI) + 0.5 * g.logdet, 0.0)
    if isinstance(g, MixtureSpec):
        def neg_expected_log(rule):
            return -rule.integrate(g.logpdf(rule.nodes))
        rule = density_rule(g, grid)
        return FunctionalValue(*_pair(neg_expected_log, rule, rule.refined))
    if isinstance(g, GridField):
        ent = relative_entropy(g)
        return FunctionalValue(-ent.value, ent.estimated_error)
    raise UnsupportedRepresentation(f"no entropy for {type(g).__name__}")


def entropy_power_from_entropy(h: float, n: int) -> float:
    return math.exp(2.0 * h / n) / (2.0 * math.pi * math.e)


def entropy_power(g: Density, grid: int | None = None) -> FunctionalValue:
    """``N = exp(2 H / n) / (2 pi e)``; equals 1 for the standard Gaussian."""
    h = shannon_entropy(g, grid)
    val = entropy_power_from_entropy(h.value, g.n)
    return FunctionalValue(val, val * (2.0 / g.n) * h.estimated_error)


def mean(g: Density) -> np.ndarray:
    if isinstance(g, GaussianSpec):
        return np.array(g.mean)
    if isinstance(g, MixtureSpec):
        return sum(w * c.mean for w, c in zip(g.weights, g.components))
    return _grid_moments(g)[0]


def _grid_moments(g: GridField):
    w = (g.cell_volumes * g.values).ravel()
    mass = w.sum()
    if not mass > 0:
        raise ZeroMass("grid field has zero mass")
    pts = g.points
    m = (w @ pts) / mass
    d = pts - m
    cov = (d * w[:, None]).T @ d / mass
    return m, 0.5 * (cov + cov.T)


def covariance(g: Density) -> np.ndarray:
    """Covariance matrix; closed form for Gaussians and mixtures."""
    if isinstance(g, GaussianSpec):
        return np.array(g.cov)
    if isinstance(g, MixtureSpec):
        m = mean(g)
        second = sum(w * (c.cov + np.outer(c.mean, c.mean)) for w, c in zip(g.weights, g.components))
        cov = second - np.outer(m, m)
        return 0.5 * (cov + cov.T)
    if isinstance(g, GridField):
        return _grid_moments(g)[1]
    raise UnsupportedRepresentation(f"no covariance for {type(g).__name__}")


def _masked_outer(vectors, weights, keep):
    v = vectors[keep]
    J = (v * weights[keep][:, None]).T @ v
    return 0.5 * (J + J.T)


def _fisher_mixture(g: MixtureSpec, rule: QuadratureRule) -> np.ndarray:
    dens = g.pdf(rule.nodes)
    keep = dens >= MASK_RATIO * dens.max()
    lost = float(rule.weights[~keep].sum())
    if lost > MASK_MASS:
        raise DegenerateSupport(f"masked nodes carry mass {lost:.3g}")
    return _masked_outer(g.grad_log(rule.nodes), rule.weights, keep)


def _fisher_grid(g: GridField, form: str = "log") -> np.ndarray:
    vals = g.values
    cell = g.cell_volumes
    mass = float(np.sum(cell * vals))
    if not mass > 0:
        raise ZeroMass("grid field has zero mass")
    keep = vals >= MASK_RATIO * vals.max()
    lost = float(np.sum((cell * vals)[~keep])) / mass
    if lost > MASK_MASS:
        raise DegenerateSupport(f"masked cells carry mass {lost:.3g}")
    if form == "log":
        grads = g.node_gradients(safe_log(vals))
        weights = cell * vals / mass
    elif form == "sqrt":
        grads = 2.0 * g.node_gradients(np.sqrt(vals))
        weights = cell / mass
    else:
        raise LabError(f"unknown Fisher form {form!r}")
    vecs = grads.reshape(g.n, -1).T
    return _masked_outer(vecs, weights.ravel(), keep.ravel())


def fisher_matrix(g: Density, grid: int | None = None, form: str = "log") -> np.ndarray:
    """``J_m = int grad log g grad log g^T g dx``; equals ``K^{-1}`` for Gaussians.

    Nodes with ``g < 1e-12 max g`` are dropped; if they carry more than
    ``1e-6`` of the mass :class:`DegenerateSupport` is raised.  On grids
    ``form="sqrt"`` evaluates ``4 int grad sqrt g grad sqrt g^T dx`` instead.
    """
    if isinstance(g, GaussianSpec):
        return np.array(g.precision)
    if isinstance(g, MixtureSpec):
        return _fisher_mixture(g, density_rule(g, grid))
    if isinstance(g, GridField):
        return _fisher_grid(g, form)
    raise UnsupportedRepresentation(f"no Fisher information for {type(g).__name__}")


def fisher_scalar(g: Density, grid: int | None = None) -> FunctionalValue:
    """``J = Tr J_m``."""
    if isinstance(g, GaussianSpec):
        return FunctionalValue(float(np.trace(g.precision)), 0.0)
    if isinstance(g, MixtureSpec):
        rule = density_rule(g, grid)
        return FunctionalValue(*_pair(lambda r: float(np.trace(_fisher_mixture(g, r))), rule, rule.refined))
    if isinstance(g, GridField):
        return FunctionalValue(*_pair(lambda fld: float(np.trace(_fisher_grid(fld))), g, g.coarsened))
    raise UnsupportedRepresentation(f"no Fisher information for {type(g).__name__}")


def fisher_matrix_error(g: Density, grid: int | None = None) -> float:
    """Largest entry change of ``J_m`` between the two resolutions."""
    if isinstance(g, GaussianSpec):
        return 0.0
    if isinstance(g, MixtureSpec):
        rule = density_rule(g, grid)
        return float(np.max(np.abs(_fisher_mixture(g, rule) - _fisher_mixture(g, rule.refined()))))
    return float(np.max(np.abs(_fisher_grid(g) - _fisher_grid(g.coarsened()))))
