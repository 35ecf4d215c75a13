"""Two-point inequality, entropy tensorization on the cube, and the CLT route.

On ``{-1, +1}`` with ``beta_p({+1}) = p`` the sharp two-point bound reads

    c(p) (f(+1) - f(-1))^2 <= Ent_beta(f) E_beta(f),
    c(p) = p^2 q^2 (log q - log p) / (q - p),   c(1/2) = 1/8.

Tensorizing over ``{-1, +1}^n`` and pushing ``F_n(x) = f((x_1+...+x_n)/sqrt n)``
through the central limit theorem yields the Gaussian reversed LSI.

Cube coordinates use index 0 for ``-1`` and index 1 for ``+1``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import binom

from .density import RelativeFunction, xlogx
from .errors import LabError, NonPositiveSample, NonPositiveValue
from .functionals import relative_moments, gauss_hermite_rule
from .inequalities import InequalityReport, make_report

MAX_TABLE_DIM = 16
MAX_SYM_DIM = 20000
SCAN_RANGE = (1e-3, 1e3)
TENSOR_TOL = 1e-12


@dataclass(frozen=True)
class BernoulliMeasure:
    """Measure on ``{-1, +1}`` with mass ``p`` at ``+1``."""

    p: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise LabError(f"Bernoulli parameter must lie in (0, 1), got {self.p!r}")

    @property
    def q(self) -> float:
        return 1.0 - self.p


def _phi(y):
    """``y log y - y + 1`` (>= 0), accurate near ``y = 1``."""
    u = np.asarray(y, dtype=float) - 1.0
    return np.where(u > -1.0, (1.0 + u) * np.log1p(np.maximum(u, -1.0 + 1e-300)) - u, 1.0)


@dataclass(frozen=True)
class TwoPointSides:
    delta_sq: float
    ent: float
    mean: float
    p: float

    @property
    def ratio(self) -> float:
        """``delta^2 / (Ent E)``; equals ``1 / c(p)`` in the near-constant limit only at p = 1/2."""
        prod = self.ent * self.mean
        return self.delta_sq / prod if prod > 0 else math.inf

    def satisfied(self, tol: float = 1e-12) -> bool:
        return bernoulli_optimal_constant(self.p) * self.delta_sq <= self.ent * self.mean + tol


def two_point_sides(fp: float, fm: float, p: float = 0.5) -> TwoPointSides:
    """Exact ``(f(+1) - f(-1))^2``, ``Ent_beta(f)`` and ``E_beta(f)``."""
    if not (fp > 0 and fm > 0):
        raise NonPositiveValue("two-point values must be positive")
    q = BernoulliMeasure(p).q
    mean = p * fp + q * fm
    ent = mean * float(p * _phi(fp / mean) + q * _phi(fm / mean))
    return TwoPointSides((fp - fm) ** 2, max(ent, 0.0), mean, p)


def bernoulli_optimal_constant(p: float) -> float:
    """``p^2 q^2 (log q - log p) / (q - p)``, continuous at ``p = 1/2``."""
    if p <= 0.0 or p >= 1.0:
        if p in (0.0, 1.0):
            return 0.0
        raise LabError(f"Bernoulli parameter must lie in [0, 1], got {p!r}")
    q = 1.0 - p
    d = q - p
    # (log q - log p) / (q - p) = 2 atanh(d) / d
    slope = 2.0 + 2.0 * d * d / 3.0 if abs(d) < 1e-6 else 2.0 * math.atanh(d) / d
    return p * p * q * q * slope


def _scan_ratio(p, fp, fm):
    q = 1.0 - p
    fp = np.asarray(fp, dtype=float)
    fm = np.asarray(fm, dtype=float)
    mean = p * fp + q * fm
    ent = mean * (p * _phi(fp / mean) + q * _phi(fm / mean))
    d2 = (fp - fm) ** 2
    degenerate = np.abs(fp - fm) <= 1e-7 * np.maximum(fp, fm)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = ent * mean / d2
    return np.where(degenerate, np.inf, r)


def scan_optimal_constant(p: float, grid_size: int = 401) -> float:
    """Brute-force ``inf Ent_beta(f) E_beta(f) / (f(+1) - f(-1))^2`` over ``[1e-3, 1e3]^2``.

    The log-spaced grid minimum is polished by a bounded scalar search
    along each coordinate between the neighbouring grid values.
    """
    BernoulliMeasure(p)
    if grid_size < 3:
        raise LabError("grid_size must be at least 3")
    lo, hi = math.log(SCAN_RANGE[0]), math.log(SCAN_RANGE[1])
    axis = np.exp(np.linspace(lo, hi, grid_size))
    ratios = _scan_ratio(p, axis[:, None], axis[None, :])
    i, j = np.unravel_index(np.argmin(ratios), ratios.shape)
    best = float(ratios[i, j])
    fp, fm = float(axis[i]), float(axis[j])
    step = (hi - lo) / (grid_size - 1)
    for _ in range(3):
        for coord in (0, 1):
            centre = math.log(fp if coord == 0 else fm)
            a, b = max(lo, centre - step), min(hi, centre + step)

            def objective(u):
                v = math.exp(u)
                r = _scan_ratio(p, v, fm) if coord == 0 else _scan_ratio(p, fp, v)
                return float(r)

            res = minimize_scalar(objective, bounds=(a, b), method="bounded", options={"xatol": 1e-10})
            if res.fun < best:
                best = float(res.fun)
                if coord == 0:
                    fp = math.exp(res.x)
                else:
                    fm = math.exp(res.x)
    return best


# ---------------------------------------------------------------------------
# functions on the cube
# ---------------------------------------------------------------------------


def binomial_weights(n: int, p: float = 0.5) -> np.ndarray:
    """``P(k successes)`` for ``k = 0..n``; scipy's pmf stays accurate to n = 20000."""
    return binom.pmf(np.arange(n + 1), n, p)


@dataclass(frozen=True, eq=False)
class CubeFunction:
    """Positive function on ``{-1, +1}^n`` under a product Bernoulli measure.

    Either ``table`` (shape ``(2,) * n``) or ``sym`` (length ``n + 1``, value
    as a function of the number of ``+1`` coordinates) is set.  ``ps`` holds
    the per-coordinate parameter; the symmetric form needs a common one.
    """

    n: int
    ps: tuple
    table: np.ndarray | None = None
    sym: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1:
            raise LabError("cube dimension must be >= 1")
        if (self.table is None) == (self.sym is None):
            raise LabError("give exactly one of a full table or a symmetric vector")
        ps = tuple(float(BernoulliMeasure(p).p) for p in self.ps)
        if len(ps) != self.n:
            raise LabError("one Bernoulli parameter per coordinate is required")
        object.__setattr__(self, "ps", ps)
        if self.table is not None:
            if self.n > MAX_TABLE_DIM:
                raise LabError(f"full tables support n <= {MAX_TABLE_DIM}")
            t = np.array(self.table, dtype=float).reshape((2,) * self.n)
            if np.any(~(t > 0)):
                raise NonPositiveValue("cube function values must be positive")
            t.setflags(write=False)
            object.__setattr__(self, "table", t)
        else:
            if self.n > MAX_SYM_DIM:
                raise LabError(f"symmetric vectors support n <= {MAX_SYM_DIM}")
            if len(set(ps)) != 1:
                raise LabError("the symmetric form needs identical coordinate measures")
            s = np.array(self.sym, dtype=float)
            if s.shape != (self.n + 1,):
                raise LabError(f"symmetric vector needs n + 1 = {self.n + 1} values")
            if np.any(~(s > 0)):
                raise NonPositiveValue("cube function values must be positive")
            s.setflags(write=False)
            object.__setattr__(self, "sym", s)

    @classmethod
    def from_table(cls, table, p: float | Sequence[float] = 0.5) -> "CubeFunction":
        t = np.asarray(table, dtype=float)
        n = int(round(math.log2(t.size)))
        if 2**n != t.size:
            raise LabError("table size must be a power of two")
        ps = (p,) * n if np.ndim(p) == 0 else tuple(p)
        return cls(n, ps, table=t)

    @classmethod
    def symmetric(cls, values, p: float = 0.5) -> "CubeFunction":
        v = np.asarray(values, dtype=float)
        return cls(v.size - 1, (p,) * (v.size - 1), sym=v)

    @property
    def is_symmetric(self) -> bool:
        return self.sym is not None

    def probabilities(self) -> np.ndarray:
        """Full product-measure table (table form only)."""
        prob = np.ones(())
        for p in self.ps:
            prob = np.multiply.outer(prob, np.array([1.0 - p, p]))
        return prob

    def to_table(self) -> "CubeFunction":
        if not self.is_symmetric:
            return self
        if self.n > MAX_TABLE_DIM:
            raise LabError(f"full tables support n <= {MAX_TABLE_DIM}")
        grids = np.indices((2,) * self.n).sum(axis=0)
        return CubeFunction(self.n, self.ps, table=self.sym[grids])

    def mean(self) -> float:
        if self.is_symmetric:
            return float(binomial_weights(self.n, self.ps[0]) @ self.sym)
        return float(np.sum(self.probabilities() * self.table))

    def entropy(self) -> float:
        if self.is_symmetric:
            w = binomial_weights(self.n, self.ps[0])
            m = float(w @ self.sym)
            return float(w @ xlogx(self.sym)) - m * math.log(m)
        prob = self.probabilities()
        m = float(np.sum(prob * self.table))
        return float(np.sum(prob * xlogx(self.table))) - m * math.log(m)

    def marginal(self, i: int) -> tuple[float, float]:
        """``(E f | x_i = +1, E f | x_i = -1)`` -- the function ``E_{mu_{not i}} f``."""
        if self.is_symmetric:
            w = binomial_weights(self.n - 1, self.ps[0])
            return float(w @ self.sym[1:]), float(w @ self.sym[:-1])
        prob = self.probabilities()
        cond = np.moveaxis(prob * self.table, i, 0)
        pi = self.ps[i]
        plus = float(cond[1].sum()) / pi
        minus = float(cond[0].sum()) / (1.0 - pi)
        return plus, minus

    def mean_gradient(self) -> np.ndarray:
        """``(E D_i f)_i`` with ``D_i f = (f(x_i=+1) - f(x_i=-1)) / 2``."""
        if self.is_symmetric:
            plus, minus = self.marginal(0)
            return np.full(self.n, 0.5 * (plus - minus))
        return np.array([0.5 * (a - b) for a, b in (self.marginal(i) for i in range(self.n))])


def tensorization_check(f: CubeFunction, tol: float = TENSOR_TOL) -> InequalityReport:
    """``sum_i Ent_{mu_i}(E_{mu_{not i}} f) <= Ent_mu(f)``."""
    if f.is_symmetric:
        f = f.to_table()
    lhs = 0.0
    for i in range(f.n):
        plus, minus = f.marginal(i)
        p = f.ps[i]
        m = p * plus + (1 - p) * minus
        lhs += float(p * xlogx(plus) + (1 - p) * xlogx(minus)) - m * math.log(m)
    return make_report("tensorization", lhs, f.entropy(), f"cube n={f.n} p={list(f.ps)}", 0.0, tol)


# ---------------------------------------------------------------------------
# CLT pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CltRow:
    n: int
    discrete_ent: float
    discrete_grad_sq: float
    gaussian_ent: float
    gaussian_grad_sq: float
    deficit_gap: float


CLT_HEADER = ("n", "discrete_ent", "discrete_grad_sq", "gaussian_ent", "gaussian_grad_sq", "deficit_gap")


def clt_cube_function(smooth_f: RelativeFunction, n: int) -> CubeFunction:
    """``F_n(x) = f((x_1 + ... + x_n) / sqrt n)`` in symmetric form."""
    if smooth_f.n != 1:
        raise LabError("the CLT pipeline needs a one-dimensional function")
    if not 1 <= n <= MAX_SYM_DIM:
        raise LabError(f"n must lie in [1, {MAX_SYM_DIM}]")
    k = np.arange(n + 1)
    lattice = (2 * k - n) / math.sqrt(n)
    vals = np.asarray(smooth_f.value(lattice.reshape(-1, 1)), dtype=float)
    if np.any(~(vals > 0)):
        raise NonPositiveSample("smooth_f is not positive on the lattice")
    return CubeFunction.symmetric(vals)


def clt_pipeline(smooth_f: RelativeFunction, n_list: Sequence[int], nodes: int = 96) -> list[CltRow]:
    """Discrete reversed-LSI quantities of ``F_n`` next to their Gaussian limits.

    ``discrete_grad_sq = |E D F_n|^2 = sum_i (E D_i F_n)^2`` and the deficits are
    ``2 Ent - |mean gradient|^2 / mean`` on either side.
    """
    gm = relative_moments(smooth_f, gauss_hermite_rule(nodes, 1))
    g_ent = gm.entropy
    g_grad = float(gm.mean_grad @ gm.mean_grad)
    g_deficit = 2.0 * g_ent - g_grad / gm.mass
    rows = []
    for n in n_list:
        F = clt_cube_function(smooth_f, int(n))
        d_ent = F.entropy()
        d_grad = float(np.sum(F.mean_gradient() ** 2))
        d_deficit = 2.0 * d_ent - d_grad / F.mean()
        rows.append(CltRow(int(n), d_ent, d_grad, g_ent, g_grad, abs(d_deficit - g_deficit)))
    return rows


def clt_csv(rows: Sequence[CltRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CLT_HEADER)
    for r in rows:
        d = asdict(r)
        w.writerow([str(d["n"])] + [f"{d[k]:.17g}" for k in CLT_HEADER[1:]])
    return buf.getvalue()
