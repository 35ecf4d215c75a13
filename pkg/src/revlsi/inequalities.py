"""One checker per Gaussian functional inequality.

Every checker returns an :class:`InequalityReport` oriented so that
``slack = rhs - lhs >= -tol`` means the inequality holds.  Unless given
explicitly, ``tol = 1e-7 + 10 * estimated_error``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .density import Density, ExpFunction, RelativeFunction, describe
from .errors import LabError, NonPositiveInput, UnsupportedRepresentation
from .functionals import (
    DEFAULT_NODES,
    QuadratureRule,
    RelativeMoments,
    covariance,
    default_gamma_rule,
    entropy_power,
    fisher_matrix,
    fisher_matrix_error,
    fisher_scalar,
    relative_moments,
    shannon_entropy,
)

BASE_TOL = 1e-7
TWO_PI_E = 2.0 * math.pi * math.e


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    tol: float
    inputs: str
    estimated_error: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def make_report(name: str, lhs: float, rhs: float, inputs: str = "",
                estimated_error: float = 0.0, tol: float | None = None) -> InequalityReport:
    lhs = float(lhs)
    rhs = float(rhs)
    err = float(abs(estimated_error))
    if tol is None:
        tol = BASE_TOL + 10.0 * err
    if not tol > 0:
        raise LabError("tolerance must be positive")
    slack = rhs - lhs
    return InequalityReport(name, lhs, rhs, slack, bool(slack >= -tol), float(tol), inputs, err)


def exp_witness(a) -> ExpFunction:
    """``f(x) = exp(a.x)``, the equality case of both Gaussian LSIs."""
    return ExpFunction(np.atleast_1d(np.asarray(a, dtype=float)))


def exp_moments(f: ExpFunction) -> RelativeMoments:
    """Closed-form gamma-moments of ``exp(a.x + c)`` via the Gaussian MGF."""
    a2 = float(f.a @ f.a)
    mass = math.exp(f.c + 0.5 * a2)
    return RelativeMoments(mass, (a2 + f.c) * mass, f.a * mass, a2 * mass)


def _moment_pair(f: RelativeFunction, method: str, rule: QuadratureRule | None, nodes: int,
                 grid: int | None = None):
    if method == "analytic":
        if not isinstance(f, ExpFunction):
            raise UnsupportedRepresentation("closed forms exist only for exponential witnesses")
        m = exp_moments(f)
        return m, m
    if method != "quadrature":
        raise LabError(f"unknown method {method!r}")
    rule = default_gamma_rule(f, nodes, grid) if rule is None else rule
    return relative_moments(f, rule), relative_moments(f, rule.refined())


def _paired(f, method, rule, nodes, sides, grid=None):
    m1, m2 = _moment_pair(f, method, rule, nodes, grid)
    l1, r1 = sides(m1)
    l2, r2 = sides(m2)
    return l1, r1, max(abs(l1 - l2), abs(r1 - r2))


def check_lsi_gross(f: RelativeFunction, method: str = "quadrature", rule: QuadratureRule | None = None,
                    nodes: int = DEFAULT_NODES, tol: float | None = None,
                    grid: int | None = None) -> InequalityReport:
    """``2 Ent_gamma(f) <= E_gamma(|grad f|^2 / f)``."""
    lhs, rhs, err = _paired(f, method, rule, nodes, lambda m: (2.0 * m.entropy, m.grad_sq_over_f), grid)
    return make_report("lsi_gross", lhs, rhs, f.label, err, tol)


def check_reversed_lsi(f: RelativeFunction, method: str = "quadrature", rule: QuadratureRule | None = None,
                       nodes: int = DEFAULT_NODES, tol: float | None = None,
                       grid: int | None = None) -> InequalityReport:
    """``|E_gamma grad f|^2 / E_gamma f <= 2 Ent_gamma(f)``."""
    def sides(m):
        return float(m.mean_grad @ m.mean_grad) / m.mass, 2.0 * m.entropy
    lhs, rhs, err = _paired(f, method, rule, nodes, sides, grid)
    return make_report("reversed_lsi", lhs, rhs, f.label, err, tol)


def check_euclidean_lsi(g: Density, grid: int | None = None, tol: float | None = None) -> InequalityReport:
    """``-H(g) <= (n/2) log(J(g) / (2 pi e n))``."""
    n = g.n
    h = shannon_entropy(g, grid)
    j = fisher_scalar(g, grid)
    rhs = 0.5 * n * math.log(j.value / (TWO_PI_E * n))
    err = h.estimated_error + 0.5 * n * j.estimated_error / j.value
    return make_report("euclidean_lsi", -h.value, rhs, describe(g), err, tol)


def check_nj(g: Density, grid: int | None = None, tol: float | None = None) -> InequalityReport:
    """``n <= N(X) J(X)``."""
    N = entropy_power(g, grid)
    j = fisher_scalar(g, grid)
    err = N.value * j.estimated_error + j.value * N.estimated_error
    return make_report("nj", g.n, N.value * j.value, describe(g), err, tol)


def _det_root(m: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(m)
    if sign <= 0:
        return 0.0
    return math.exp(logdet / m.shape[0])


def check_njj(g: Density, grid: int | None = None, tol: float | None = None) -> InequalityReport:
    """``1 <= N(X) |J_m(X)|^{1/n}``."""
    N = entropy_power(g, grid)
    jm = fisher_matrix(g, grid)
    root = _det_root(jm)
    jerr = fisher_matrix_error(g, grid)
    # |d det^{1/n}| <= det^{1/n} * ||J^{-1}|| * |dJ| to first order
    root_err = root * jerr * float(np.max(np.abs(np.linalg.inv(jm)))) * g.n if root > 0 else jerr
    err = N.value * root_err + root * N.estimated_error
    return make_report("njj", 1.0, N.value * root, describe(g), err, tol)


def check_entropy_trace(g: Density, grid: int | None = None, tol: float | None = None) -> InequalityReport:
    """``N(X) <= Tr K(X) / n``."""
    N = entropy_power(g, grid)
    return make_report("entropy_trace", N.value, np.trace(covariance(g)) / g.n, describe(g),
                       N.estimated_error, tol)


def check_reversed_euclidean(g: Density, grid: int | None = None, tol: float | None = None) -> InequalityReport:
    """``H(g) = -Ent_lambda(g) <= (n/2) log(2 pi e Tr K / n)``."""
    n = g.n
    h = shannon_entropy(g, grid)
    rhs = 0.5 * n * math.log(TWO_PI_E * np.trace(covariance(g)) / n)
    return make_report("reversed_euclidean", h.value, rhs, describe(g), h.estimated_error, tol)


def check_max_entropy_det(g: Density, grid: int | None = None, tol: float | None = None) -> InequalityReport:
    """``N(X) <= |K(X)|^{1/n}``."""
    N = entropy_power(g, grid)
    return make_report("max_entropy_det", N.value, _det_root(covariance(g)), describe(g),
                       N.estimated_error, tol)


def check_amgm(values, tol: float | None = None, inputs: str = "") -> InequalityReport:
    """Geometric mean <= arithmetic mean for positive reals."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0 or np.any(~np.isfinite(v)) or np.any(v <= 0):
        raise NonPositiveInput("AM-GM needs a non-empty list of positive reals")
    geo = math.exp(float(np.mean(np.log(v))))
    return make_report("amgm", geo, float(np.mean(v)), inputs or f"{v.size} values", 0.0, tol)


def check_covariance_amgm(g: Density, tol: float | None = None) -> InequalityReport:
    """AM-GM on the spectrum of ``K``: ``|K|^{1/n} <= Tr K / n``."""
    return check_amgm(np.linalg.eigvalsh(covariance(g)), tol, f"spectrum of K, {describe(g)}")


DENSITY_CHECKERS = {
    "euclidean_lsi": check_euclidean_lsi,
    "nj": check_nj,
    "njj": check_njj,
    "entropy_trace": check_entropy_trace,
    "reversed_euclidean": check_reversed_euclidean,
    "max_entropy_det": check_max_entropy_det,
}
