"""Equivalence machinery linking the four forms of the Gaussian maximum-entropy bound.

Linear maps act exactly on Gaussian and mixture parameters.  Scaling also
acts exactly on grid fields (box and values are rescaled); whitening grid
fields is refused because re-interpolation would swamp the 1e-6 agreement
the equivalence checks rely on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .density import (
    EPS_DET,
    LOG_2PI,
    DensityRatioFunction,
    Density,
    GaussianSpec,
    GridField,
    GridFunction,
    MixtureSpec,
    RelativeFunction,
    as_mixture,
    describe,
)
from .errors import NonPositiveTrace, SingularCovariance, UnsupportedRepresentation
from .functionals import covariance, shannon_entropy
from .inequalities import (
    InequalityReport,
    check_entropy_trace,
    check_max_entropy_det,
    check_reversed_euclidean,
    check_reversed_lsi,
    make_report,
)

EQUIVALENCE_TOL = 1e-6


def inverse_sqrt(K: np.ndarray) -> np.ndarray:
    """Symmetric ``K^{-1/2}`` from an eigendecomposition."""
    vals, vecs = np.linalg.eigh(0.5 * (K + K.T))
    if vals.min() <= EPS_DET:
        raise SingularCovariance(f"smallest covariance eigenvalue {vals.min():.3g} <= {EPS_DET}")
    return (vecs / np.sqrt(vals)) @ vecs.T


def linear_map(g: Density, M: np.ndarray) -> Density:
    """Law of ``M X`` for analytic ``g``."""
    M = np.atleast_2d(M)
    comps = [GaussianSpec(M @ c.mean, _sym(M @ c.cov @ M.T)) for c in as_mixture(g).components]
    if isinstance(g, GaussianSpec):
        return comps[0]
    return MixtureSpec(g.weights, tuple(comps))


def _sym(a):
    return 0.5 * (a + a.T)


def whiten(g: Density) -> Density:
    """Law of ``K^{-1/2} X``; its covariance is the identity."""
    if isinstance(g, GridField):
        raise UnsupportedRepresentation("whitening grid fields is not supported")
    return linear_map(g, inverse_sqrt(covariance(g)))


def scale_family(g: Density, alpha: float) -> Density:
    """``h_alpha(x) = alpha^n g(alpha x)``, the law of ``X / alpha``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if isinstance(g, GridField):
        return GridField(g.lo / alpha, g.hi / alpha, g.values * alpha**g.n)
    return linear_map(g, np.eye(g.n) / alpha)


def gauss_to_euclid_function(h: Density) -> RelativeFunction:
    """``f(x) = h(x) (2 pi)^{n/2} exp(|x|^2 / 2)``, so that ``f dgamma_n = h dx``."""
    if isinstance(h, GridField):
        pts = h.points
        factor = np.exp(0.5 * np.sum(pts * pts, axis=1) + 0.5 * h.n * LOG_2PI)
        return GridFunction(GridField(h.lo, h.hi, h.values * factor.reshape(h.shape)))
    return DensityRatioFunction(h)


def intermediate_bound_check(h: Density, grid: int | None = None, tol: float | None = None) -> InequalityReport:
    """``H(h) <= Tr K(h) / 2 + (n/2) log 2 pi`` (not scale invariant)."""
    ent = shannon_entropy(h, grid)
    rhs = 0.5 * float(np.trace(covariance(h))) + 0.5 * h.n * LOG_2PI
    return make_report("intermediate_bound", ent.value, rhs, describe(h), ent.estimated_error, tol)


class AlphaOptimum(NamedTuple):
    alpha: float
    bound: float


def scaled_bound(trK: float, n: int, alpha: float) -> float:
    """Intermediate bound on ``H(X)`` obtained through ``X / alpha``."""
    return 0.5 * trK / alpha**2 + n * math.log(alpha) + 0.5 * n * LOG_2PI


def optimal_alpha(trK: float, n: int) -> AlphaOptimum:
    """Minimiser ``sqrt(Tr K / n)`` of ``Tr K / (2 alpha^2) + n log alpha``."""
    if not trK > 0:
        raise NonPositiveTrace(f"trace must be positive, got {trK!r}")
    if n < 1:
        raise ValueError("dimension must be >= 1")
    alpha = math.sqrt(trK / n)
    return AlphaOptimum(alpha, scaled_bound(trK, n, alpha))


def derive_reversed_euclidean(h: Density, grid: int | None = None, tol: float | None = None) -> InequalityReport:
    """Reassemble ``H(h) <= (n/2) log(2 pi e Tr K / n)`` from the intermediate bound at ``alpha*``."""
    n = h.n
    alpha = optimal_alpha(float(np.trace(covariance(h))), n).alpha
    scaled = intermediate_bound_check(scale_family(h, alpha), grid)
    shift = n * math.log(alpha)
    return make_report("derive_reversed_euclidean", scaled.lhs + shift, scaled.rhs + shift,
                       describe(h), scaled.estimated_error, tol)


def amgm_reduce(K: np.ndarray) -> tuple[float, float]:
    """Geometric and arithmetic means of the spectrum of ``K``."""
    vals = np.linalg.eigvalsh(_sym(np.atleast_2d(K)))
    if vals.min() < 0:
        vals = np.maximum(vals, 0.0)
    geo = math.exp(float(np.mean(np.log(vals)))) if vals.min() > 0 else 0.0
    return geo, float(np.mean(vals))


@dataclass(frozen=True)
class EquivalenceBundle:
    """Reports for the four equivalent assertions plus the cross-form checks."""

    reports: dict
    transported_gap: float
    sign_agreement: bool
    consistent: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "reports": {k: r.to_dict() for k, r in self.reports.items()},
            "transported_gap": self.transported_gap,
            "sign_agreement": self.sign_agreement,
            "consistent": self.consistent,
            "details": self.details,
        }


def equivalence_roundtrip(g: Density, grid: int | None = None) -> EquivalenceBundle:
    """Evaluate (i) reversed LSI, (ii) reversed Euclidean, (iii) trace and (iv) det forms.

    Consistency requires that the trace form on ``whiten(g)``, transported
    back by ``|K|^{1/n}``, reproduces the det-form slack on ``g`` within
    1e-6, and that (ii) and (iii) agree in sign.
    """
    reports = {
        "i": check_reversed_lsi(gauss_to_euclid_function(g), grid=grid),
        "ii": check_reversed_euclidean(g, grid),
        "iii": check_entropy_trace(g, grid),
        "iv": check_max_entropy_det(g, grid),
    }
    white = whiten(g)
    reports["iii_whitened"] = check_entropy_trace(white, grid)
    det_root = reports["iv"].rhs
    transported = reports["iii_whitened"].slack * det_root
    gap = abs(transported - reports["iv"].slack)
    signs = (reports["ii"].slack >= -reports["ii"].tol) == (reports["iii"].slack >= -reports["iii"].tol)
    return EquivalenceBundle(
        reports=reports,
        transported_gap=gap,
        sign_agreement=bool(signs),
        consistent=bool(signs and gap <= EQUIVALENCE_TOL and all(r.satisfied for r in reports.values())),
        details={"det_root": det_root, "whitened": describe(white)},
    )
