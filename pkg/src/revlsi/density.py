"""Probability densities on R^n and positive functions relative to the standard Gaussian.

Three density representations are supported:

* :class:`GaussianSpec` -- mean vector and covariance matrix,
* :class:`MixtureSpec` -- finite Gaussian mixture,
* :class:`GridField` -- non-negative samples on a uniform box grid (n <= 3).

A :class:`RelativeFunction` is a positive function ``f`` that is integrated
against the standard Gaussian measure ``gamma_n``.  The relation
``f * dgamma_n = h * dx`` links both worlds (see :func:`relative_to_pdf`).

All objects are immutable once built.  Points are passed as arrays of shape
``(n,)`` or ``(m, n)``; evaluation is vectorised over the leading axis.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence, Union

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.special import logsumexp, ndtr

from .errors import (
    DimensionMismatch,
    DivergentIntegral,
    InsufficientCoverage,
    LabError,
    OutOfDomain,
    UnsupportedDimension,
    UnsupportedRepresentation,
    ZeroMass,
)

EPS_DET = 1e-10
EPS_FLOOR = 1e-300
LOG_2PI = math.log(2.0 * math.pi)
MAX_GRID_DIM = 3
DEFAULT_GRID_POINTS = {1: 257, 2: 129, 3: 65}
DEFAULT_BOX_SIGMAS = 8.0


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _as_points(x, n: int) -> tuple[np.ndarray, bool]:
    """Return ``(points of shape (m, n), was_single_point)``."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim <= 1
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        pts = pts.reshape(1, -1) if pts.shape[0] == n else pts.reshape(-1, 1)
        single = pts.shape[0] == 1
    if pts.shape[-1] != n:
        raise DimensionMismatch(f"expected points of dimension {n}, got shape {np.shape(x)}")
    return pts, single


def safe_log(v):
    """Logarithm with values below ``EPS_FLOOR`` clamped (inside the log only)."""
    return np.log(np.maximum(v, EPS_FLOOR))


def xlogx(v):
    """``v log v`` with the convention ``0 log 0 = 0``."""
    v = np.asarray(v, dtype=float)
    return np.where(v > 0, v * safe_log(v), 0.0)


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GaussianSpec:
    """Gaussian density N(mean, cov)."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _frozen(np.atleast_1d(self.mean))
        cov = _frozen(np.atleast_2d(self.cov))
        n = mean.shape[0]
        if mean.ndim != 1 or cov.shape != (n, n):
            raise DimensionMismatch(f"mean {mean.shape} and covariance {cov.shape} disagree")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > 1e-12 * scale:
            raise LabError("covariance is not symmetric")
        if not np.all(np.isfinite(cov)) or not np.all(np.isfinite(mean)):
            raise LabError("non-finite Gaussian parameters")
        if np.min(np.linalg.eigvalsh(cov)) <= EPS_DET:
            raise LabError("covariance is not positive definite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n(self) -> int:
        return self.mean.shape[0]

    @cached_property
    def chol(self) -> np.ndarray:
        return np.linalg.cholesky(self.cov)

    @cached_property
    def precision(self) -> np.ndarray:
        p = np.linalg.inv(self.cov)
        return 0.5 * (p + p.T)

    @cached_property
    def logdet(self) -> float:
        return 2.0 * float(np.sum(np.log(np.diag(self.chol))))

    def logpdf(self, x) -> np.ndarray:
        pts, single = _as_points(x, self.n)
        d = pts - self.mean
        maha = np.einsum("mi,ij,mj->m", d, self.precision, d)
        out = -0.5 * (maha + self.n * LOG_2PI + self.logdet)
        return out[0] if single else out

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    def grad_log(self, x) -> np.ndarray:
        pts, single = _as_points(x, self.n)
        out = -(pts - self.mean) @ self.precision
        return out[0] if single else out

    def grad(self, x) -> np.ndarray:
        pts, single = _as_points(x, self.n)
        out = self.pdf(pts)[:, None] * self.grad_log(pts)
        return out[0] if single else out


@dataclass(frozen=True, eq=False)
class MixtureSpec:
    """Finite mixture of Gaussians sharing one dimension."""

    weights: np.ndarray
    components: tuple

    def __post_init__(self):
        w = _frozen(np.atleast_1d(self.weights))
        comps = tuple(self.components)
        if not comps:
            raise LabError("a mixture needs at least one component")
        if w.shape != (len(comps),):
            raise LabError("weight and component counts differ")
        if np.any(w <= 0) or abs(float(np.sum(w)) - 1.0) > 1e-12:
            raise LabError("mixture weights must be positive and sum to 1")
        if len({c.n for c in comps}) != 1:
            raise DimensionMismatch("mixture components have different dimensions")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", comps)

    @property
    def n(self) -> int:
        return self.components[0].n

    def _component_logpdfs(self, pts: np.ndarray) -> np.ndarray:
        return np.stack([np.log(w) + c.logpdf(pts) for w, c in zip(self.weights, self.components)])

    def logpdf(self, x) -> np.ndarray:
        pts, single = _as_points(x, self.n)
        out = logsumexp(self._component_logpdfs(pts), axis=0)
        return out[0] if single else out

    def pdf(self, x) -> np.ndarray:
        return np.exp(self.logpdf(x))

    def grad_log(self, x) -> np.ndarray:
        pts, single = _as_points(x, self.n)
        lp = self._component_logpdfs(pts)
        resp = np.exp(lp - logsumexp(lp, axis=0))
        out = sum(r[:, None] * c.grad_log(pts) for r, c in zip(resp, self.components))
        return out[0] if single else out

    def grad(self, x) -> np.ndarray:
        pts, single = _as_points(x, self.n)
        out = self.pdf(pts)[:, None] * self.grad_log(pts)
        return out[0] if single else out


@dataclass(frozen=True, eq=False)
class GridField:
    """Non-negative samples on a uniform grid over the box ``[lo, hi]``.

    Grid nodes include both box faces.  ``values`` has one axis per
    dimension (row-major when flattened).  Integrals use the node-centred
    Riemann sum whose cells are clipped to the box, i.e. half cells on faces.
    """

    lo: np.ndarray
    hi: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        lo = _frozen(np.atleast_1d(self.lo))
        hi = _frozen(np.atleast_1d(self.hi))
        vals = _frozen(self.values)
        n = lo.shape[0]
        if n > MAX_GRID_DIM or n < 1:
            raise UnsupportedDimension(f"grid fields support 1 <= n <= {MAX_GRID_DIM}, got {n}")
        if hi.shape != (n,) or vals.ndim != n:
            raise DimensionMismatch("box corners and value array disagree on dimension")
        if np.any(hi <= lo):
            raise LabError("box upper corner must exceed lower corner")
        if min(vals.shape) < 8:
            raise LabError("grid fields need at least 8 points per axis")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise LabError("grid values must be finite and non-negative")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_flat(cls, lo, hi, shape, values) -> "GridField":
        shape = tuple(int(s) for s in shape)
        vals = np.asarray(values, dtype=float)
        if vals.size != int(np.prod(shape)):
            raise LabError(f"grid shape {shape} needs {int(np.prod(shape))} values, got {vals.size}")
        return cls(lo, hi, vals.reshape(shape))

    @property
    def n(self) -> int:
        return self.lo.shape[0]

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def spacing(self) -> np.ndarray:
        return (self.hi - self.lo) / (np.array(self.shape) - 1)

    @cached_property
    def axes(self) -> list:
        return [np.linspace(a, b, k) for a, b, k in zip(self.lo, self.hi, self.shape)]

    @cached_property
    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    @cached_property
    def cell_volumes(self) -> np.ndarray:
        per_axis = []
        for h, k in zip(self.spacing, self.shape):
            w = np.full(k, h)
            w[0] = w[-1] = 0.5 * h
            per_axis.append(w)
        vol = per_axis[0]
        for w in per_axis[1:]:
            vol = np.multiply.outer(vol, w)
        return vol

    def mass(self) -> float:
        return float(np.sum(self.values * self.cell_volumes))

    def coarsened(self) -> "GridField":
        """Every other node along each axis; the box shrinks if a count is even."""
        vals = self.values[tuple(slice(None, None, 2) for _ in range(self.n))]
        hi = self.lo + self.spacing * 2 * (np.array(vals.shape) - 1)
        return GridField(self.lo, hi, vals)

    @cached_property
    def _interp(self) -> RegularGridInterpolator:
        return RegularGridInterpolator(tuple(self.axes), self.values, method="linear")

    def _check_inside(self, pts: np.ndarray) -> None:
        slack = 1e-12 * (self.hi - self.lo)
        if np.any(pts < self.lo - slack) or np.any(pts > self.hi + slack):
            raise OutOfDomain("evaluation point outside the grid box")

    def pdf(self, x) -> np.ndarray:
        pts, single = _as_points(x, self.n)
        self._check_inside(pts)
        out = self._interp(np.clip(pts, self.lo, self.hi))
        return out[0] if single else out

    def grad(self, x) -> np.ndarray:
        """Central differences with step = grid spacing, one-sided at faces."""
        pts, single = _as_points(x, self.n)
        self._check_inside(pts)
        pts = np.clip(pts, self.lo, self.hi)
        out = np.empty_like(pts)
        for i, h in enumerate(self.spacing):
            up = pts.copy()
            dn = pts.copy()
            up[:, i] = np.minimum(pts[:, i] + h, self.hi[i])
            dn[:, i] = np.maximum(pts[:, i] - h, self.lo[i])
            out[:, i] = (self._interp(up) - self._interp(dn)) / (up[:, i] - dn[:, i])
        return out[0] if single else out

    def node_gradients(self, values: np.ndarray | None = None) -> np.ndarray:
        """Finite-difference gradient at every node, shape ``(n,) + grid shape``.

        Fourth-order central stencil in the interior, second order one node
        from a face and one-sided on the faces.
        """
        vals = np.asarray(self.values if values is None else values, dtype=float)
        grads = np.gradient(vals, *self.spacing, edge_order=1)
        if self.n == 1:
            grads = [grads]
        out = np.stack(grads)
        for i, h in enumerate(self.spacing):
            v = np.moveaxis(vals, i, 0)
            g = np.moveaxis(out[i], i, 0)
            g[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
        return out


Density = Union[GaussianSpec, MixtureSpec, GridField]
ANALYTIC = (GaussianSpec, MixtureSpec)


def gaussian(mean, cov) -> GaussianSpec:
    return GaussianSpec(mean, cov)


def standard_gaussian(n: int) -> GaussianSpec:
    return GaussianSpec(np.zeros(n), np.eye(n))


def mixture(weights, components: Sequence[GaussianSpec]) -> MixtureSpec:
    return MixtureSpec(weights, tuple(components))


def as_mixture(d: Density) -> MixtureSpec:
    if isinstance(d, MixtureSpec):
        return d
    if isinstance(d, GaussianSpec):
        return MixtureSpec(np.ones(1), (d,))
    raise UnsupportedRepresentation("grid fields have no mixture form")


# ---------------------------------------------------------------------------
# relative functions
# ---------------------------------------------------------------------------


class RelativeFunction(ABC):
    """Positive function ``f: R^n -> R+`` integrated against ``gamma_n``."""

    n: int
    label: str

    @abstractmethod
    def value(self, x) -> np.ndarray: ...

    @abstractmethod
    def grad(self, x) -> np.ndarray: ...

    def log_value(self, x) -> np.ndarray:
        return safe_log(self.value(x))

    def grad_log(self, x) -> np.ndarray:
        pts, single = _as_points(x, self.n)
        out = self.grad(pts) / np.maximum(self.value(pts), EPS_FLOOR)[:, None]
        return out[0] if single else out

    def __call__(self, x):
        return self.value(x)


@dataclass(frozen=True, eq=False)
class ExpFunction(RelativeFunction):
    """``f(x) = exp(a.x + c)``."""

    a: np.ndarray
    c: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", _frozen(np.atleast_1d(self.a)))
        object.__setattr__(self, "c", float(self.c))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def label(self) -> str:
        return f"exp(a.x+c) a={self.a.tolist()} c={self.c!r}"

    def log_value(self, x):
        pts, single = _as_points(x, self.n)
        out = pts @ self.a + self.c
        return out[0] if single else out

    def value(self, x):
        return np.exp(self.log_value(x))

    def grad(self, x):
        pts, single = _as_points(x, self.n)
        out = np.exp(pts @ self.a + self.c)[:, None] * self.a
        return out[0] if single else out

    def grad_log(self, x):
        pts, single = _as_points(x, self.n)
        out = np.broadcast_to(self.a, pts.shape).copy()
        return out[0] if single else out


@dataclass(frozen=True, eq=False)
class CallableFunction(RelativeFunction):
    """Analytic function given by vectorised value and gradient callables.

    ``value_fn`` maps an ``(m, n)`` array to ``(m,)``; ``grad_fn`` to ``(m, n)``.
    """

    n: int
    value_fn: Callable
    grad_fn: Callable
    label: str = "callable"

    def value(self, x):
        pts, single = _as_points(x, self.n)
        out = np.asarray(self.value_fn(pts), dtype=float).reshape(pts.shape[0])
        return out[0] if single else out

    def grad(self, x):
        pts, single = _as_points(x, self.n)
        out = np.asarray(self.grad_fn(pts), dtype=float).reshape(pts.shape)
        return out[0] if single else out


@dataclass(frozen=True, eq=False)
class DensityRatioFunction(RelativeFunction):
    """``f = h / gamma_n = h(x) (2 pi)^{n/2} exp(|x|^2 / 2)`` for an analytic pdf ``h``.

    Evaluated in log space; quadratures of such ``f`` are taken against ``h``.
    """

    h: Density

    def __post_init__(self):
        if not isinstance(self.h, ANALYTIC):
            raise UnsupportedRepresentation("DensityRatioFunction needs an analytic density")

    @property
    def n(self) -> int:
        return self.h.n

    @property
    def label(self) -> str:
        return f"h/gamma for {describe(self.h)}"

    def log_value(self, x):
        pts, single = _as_points(x, self.n)
        out = self.h.logpdf(pts) + 0.5 * self.n * LOG_2PI + 0.5 * np.sum(pts * pts, axis=1)
        return out[0] if single else out

    def value(self, x):
        return np.exp(self.log_value(x))

    def grad_log(self, x):
        pts, single = _as_points(x, self.n)
        out = self.h.grad_log(pts) + pts
        return out[0] if single else out

    def grad(self, x):
        pts, single = _as_points(x, self.n)
        out = self.value(pts)[:, None] * self.grad_log(pts)
        return out[0] if single else out


@dataclass(frozen=True, eq=False)
class GridFunction(RelativeFunction):
    """Relative function sampled on a grid; integrated with the grid's own cells."""

    field: GridField

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def label(self) -> str:
        return f"grid function {self.field.shape}"

    def value(self, x):
        return self.field.pdf(x)

    def grad(self, x):
        return self.field.grad(x)


def _first(pts):
    return pts[:, 0]


def _unit(pts, i=0):
    e = np.zeros_like(pts)
    e[:, i] = 1.0
    return e


def named_function(name: str, n: int = 1) -> RelativeFunction:
    """Test functions used by the semigroup, CLT and CLI drivers."""
    if name == "const":
        return CallableFunction(n, lambda p: np.ones(p.shape[0]), np.zeros_like, "1")
    if name == "exp":
        return ExpFunction(np.eye(n)[0])
    if name == "tanh":
        return CallableFunction(
            n,
            lambda p: 1.0 + 0.5 * np.tanh(_first(p)),
            lambda p: (0.5 / np.cosh(_first(p)) ** 2)[:, None] * _unit(p),
            "1+0.5tanh(x1)",
        )
    if name == "quadratic":
        return CallableFunction(
            n,
            lambda p: 1.0 + 0.25 * np.sum(p * p, axis=1),
            lambda p: 0.5 * p,
            "1+0.25|x|^2",
        )
    if name == "square":
        return CallableFunction(
            n, lambda p: 1.0 + np.sum(p * p, axis=1), lambda p: 2.0 * p, "1+|x|^2"
        )
    if name == "sin":
        return CallableFunction(
            n,
            lambda p: 1.0 + 0.5 * np.sin(_first(p)),
            lambda p: (0.5 * np.cos(_first(p)))[:, None] * _unit(p),
            "1+0.5sin(x1)",
        )
    if name == "sin2":
        return CallableFunction(
            n,
            lambda p: 2.0 + np.sin(_first(p)),
            lambda p: np.cos(_first(p))[:, None] * _unit(p),
            "2+sin(x1)",
        )
    raise LabError(f"unknown test function {name!r}")


NAMED_FUNCTIONS = ("const", "exp", "tanh", "quadratic", "square", "sin", "sin2")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def evaluate(d: Density | RelativeFunction, x) -> np.ndarray:
    if isinstance(d, RelativeFunction):
        return d.value(x)
    return d.pdf(x)


def gradient(d: Density | RelativeFunction, x) -> np.ndarray:
    return d.grad(x)


def default_box(d: Density) -> tuple[np.ndarray, np.ndarray]:
    """Mean +- 8 standard deviations, unioned over mixture components."""
    if isinstance(d, GridField):
        return d.lo, d.hi
    lo, hi = [], []
    for c in as_mixture(d).components:
        half = DEFAULT_BOX_SIGMAS * np.sqrt(np.diag(c.cov))
        lo.append(c.mean - half)
        hi.append(c.mean + half)
    return np.min(lo, axis=0), np.max(hi, axis=0)


def tail_mass_bound(d: Density, lo, hi) -> float:
    """Upper bound (union over axes and components) on mass outside the box."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    total = 0.0
    mix = as_mixture(d)
    for w, c in zip(mix.weights, mix.components):
        sd = np.sqrt(np.diag(c.cov))
        below = ndtr((lo - c.mean) / sd)
        above = ndtr(-(hi - c.mean) / sd)
        total += w * float(np.sum(below + above))
    return total


def discretize(d: Density, box=None, shape=None) -> GridField:
    """Sample ``d`` on a uniform grid; the result is not normalised."""
    n = d.n
    if n > MAX_GRID_DIM:
        raise UnsupportedDimension(f"grids support n <= {MAX_GRID_DIM}")
    lo, hi = default_box(d) if box is None else (np.atleast_1d(box[0]), np.atleast_1d(box[1]))
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if lo.shape != (n,) or hi.shape != (n,):
        raise DimensionMismatch("box dimension differs from density dimension")
    if shape is None:
        shape = (DEFAULT_GRID_POINTS[n],) * n
    elif np.ndim(shape) == 0:
        shape = (int(shape),) * n
    shape = tuple(int(s) for s in shape)
    if isinstance(d, ANALYTIC):
        tail = tail_mass_bound(d, lo, hi)
        if tail > 1e-8:
            raise InsufficientCoverage(f"box misses up to {tail:.3g} of the mass")
    template = GridField(lo, hi, np.zeros(shape))
    return GridField(lo, hi, d.pdf(template.points).reshape(shape))


def normalize(g: GridField) -> GridField:
    m = g.mass()
    if not m > 0:
        raise ZeroMass("grid field has zero mass")
    return GridField(g.lo, g.hi, g.values / m)


def _gh_mass(f: RelativeFunction, points: int) -> float:
    from .functionals import gauss_hermite_rule

    rule = gauss_hermite_rule(points, f.n)
    return float(rule.weights @ f.value(rule.nodes))


def relative_to_pdf(f: RelativeFunction) -> Density:
    """The pdf ``h = f gamma_n / int f dgamma_n``.

    Closed form for exponential and density-ratio functions; otherwise a
    normalised grid field on the default box of ``gamma_n`` (mean 0, +-8).
    """
    if isinstance(f, ExpFunction):
        return GaussianSpec(f.a, np.eye(f.n))
    if isinstance(f, DensityRatioFunction):
        return f.h
    if isinstance(f, GridFunction):
        fld = f.field
        gam = np.exp(-0.5 * np.sum(fld.points**2, axis=1) - 0.5 * f.n * LOG_2PI)
        return normalize(GridField(fld.lo, fld.hi, fld.values * gam.reshape(fld.shape)))
    coarse = _gh_mass(f, 64)
    fine = _gh_mass(f, 96)
    if not np.isfinite(fine) or abs(coarse - fine) > 1e-6 * abs(fine) or fine <= 0:
        raise DivergentIntegral(f"int f dgamma unstable: {coarse!r} vs {fine!r}")
    n = f.n
    if n > MAX_GRID_DIM:
        raise UnsupportedDimension(f"grids support n <= {MAX_GRID_DIM}")
    template = GridField(-DEFAULT_BOX_SIGMAS * np.ones(n), DEFAULT_BOX_SIGMAS * np.ones(n),
                         np.zeros((DEFAULT_GRID_POINTS[n],) * n))
    pts = template.points
    vals = f.value(pts) * np.exp(-0.5 * np.sum(pts**2, axis=1) - 0.5 * n * LOG_2PI)
    return normalize(GridField(template.lo, template.hi, vals.reshape(template.shape)))


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------


def to_json(d: Density) -> dict:
    if isinstance(d, GaussianSpec):
        return {"type": "gaussian", "mean": d.mean.tolist(), "cov": d.cov.tolist()}
    if isinstance(d, MixtureSpec):
        return {
            "type": "mixture",
            "weights": d.weights.tolist(),
            "components": [{"mean": c.mean.tolist(), "cov": c.cov.tolist()} for c in d.components],
        }
    if isinstance(d, GridField):
        return {
            "type": "grid",
            "lo": d.lo.tolist(),
            "hi": d.hi.tolist(),
            "shape": list(d.shape),
            "values": d.values.ravel().tolist(),
        }
    raise UnsupportedRepresentation(f"cannot serialise {type(d).__name__}")


def from_json(obj: dict) -> Density:
    if not isinstance(obj, dict) or "type" not in obj:
        raise LabError("density spec must be an object with a 'type' field")
    try:
        kind = obj["type"]
        if kind == "gaussian":
            return GaussianSpec(obj["mean"], obj["cov"])
        if kind == "mixture":
            comps = [GaussianSpec(c["mean"], c["cov"]) for c in obj["components"]]
            return MixtureSpec(obj["weights"], tuple(comps))
        if kind == "grid":
            return GridField.from_flat(obj["lo"], obj["hi"], obj["shape"], obj["values"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, LabError):
            raise
        raise LabError(f"malformed {obj.get('type')!r} density spec: {exc}") from exc
    raise LabError(f"unknown density type {kind!r}")


def describe(d: Density) -> str:
    if isinstance(d, GaussianSpec):
        return f"gaussian n={d.n}"
    if isinstance(d, MixtureSpec):
        return f"mixture n={d.n} k={len(d.components)}"
    if isinstance(d, GridField):
        return f"grid n={d.n} shape={list(d.shape)}"
    return type(d).__name__
