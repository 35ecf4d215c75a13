"""Heat semigroup ``P_t f(x) = E f(x + sqrt(t) Y)``, ``Y ~ gamma_n``, and the entropy interpolation.

Along the flow,

    P_t(f log f) - P_t f log P_t f = 1/2 int_0^t P_s(|grad P_{t-s} f|^2 / P_{t-s} f) ds,

and Cauchy-Schwarz bounds the integrand below by ``|P_t grad f|^2 / P_t f``
and above by ``P_t(|grad f|^2 / f)``.  Both sides of the identity are
computed independently here; at ``(t, x) = (1, 0)`` the bounds are the two
sides of the reversed and the forward Gaussian LSI.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .density import EPS_FLOOR, CallableFunction, RelativeFunction, _as_points, xlogx
from .errors import DivergentIntegral, LabError
from .functionals import DEFAULT_NODES, gauss_hermite_rule, relative_entropy

DEFAULT_SLICES = 32
_CHUNK = 1 << 20


def _shifted(points: np.ndarray, t: float, nodes: int):
    """All ``x + sqrt(t) y_j`` as an ``(m, q, n)`` array, plus the weights."""
    rule = gauss_hermite_rule(nodes, points.shape[1])
    return points[:, None, :] + math.sqrt(t) * rule.nodes[None, :, :], rule.weights


def _apply(fn, points: np.ndarray, t: float, nodes: int) -> np.ndarray:
    """``P_t`` of a vectorised map ``fn: (k, n) -> (k, ...)`` at every point."""
    if t == 0:
        return fn(points)
    rule = gauss_hermite_rule(nodes, points.shape[1])
    q, n = rule.nodes.shape
    step = max(1, _CHUNK // q)
    out = []
    for start in range(0, points.shape[0], step):
        block = points[start:start + step]
        shifted = (block[:, None, :] + math.sqrt(t) * rule.nodes[None, :, :]).reshape(-1, n)
        vals = np.asarray(fn(shifted))
        vals = vals.reshape((block.shape[0], q) + vals.shape[1:])
        out.append(np.tensordot(rule.weights, vals, axes=([0], [1])))
    return np.concatenate(out)


def heat_apply(f: RelativeFunction, t: float, x, nodes: int = DEFAULT_NODES, check: bool = True):
    """``P_t f(x)`` by Gauss-Hermite quadrature in ``y``; ``P_0 f = f``.

    With ``check`` the 64- and 96-node values must agree to 1e-6 relative,
    otherwise :class:`DivergentIntegral` is raised.
    """
    if t < 0:
        raise LabError("t must be non-negative")
    pts, single = _as_points(x, f.n)
    out = _apply(f.value, pts, t, nodes)
    if check and t > 0:
        fine = _apply(f.value, pts, t, nodes * 3 // 2)
        if not np.all(np.isfinite(fine)) or np.any(np.abs(out - fine) > 1e-6 * np.maximum(np.abs(fine), 1.0)):
            raise DivergentIntegral("heat semigroup quadrature did not converge")
    return out[0] if single else out


def heat_apply_grad(f: RelativeFunction, t: float, x, nodes: int = DEFAULT_NODES):
    """``P_t grad f(x)``."""
    pts, single = _as_points(x, f.n)
    out = _apply(f.grad, pts, t, nodes)
    return out[0] if single else out


def heat_function(f: RelativeFunction, s: float, nodes: int = DEFAULT_NODES) -> CallableFunction:
    """``P_s f`` as a relative function, with gradient ``P_s grad f``."""
    return CallableFunction(
        f.n,
        lambda p: _apply(f.value, p, s, nodes),
        lambda p: _apply(f.grad, p, s, nodes),
        f"P_{s:g}[{f.label}]",
    )


def _fisher_density(f: RelativeFunction):
    def fn(p):
        g = f.grad(p)
        return np.sum(g * g, axis=1) / np.maximum(f.value(p), EPS_FLOOR)
    return fn


@dataclass(frozen=True)
class CommuteReport:
    finite_difference: list
    semigroup_of_gradient: list
    max_abs_diff: float
    agrees: bool


def heat_gradient_commute_check(f: RelativeFunction, t: float, x, nodes: int = DEFAULT_NODES,
                                step: float = 1e-5, tol: float = 1e-5) -> CommuteReport:
    """Compare ``grad P_t f`` (central differences) with ``P_t grad f``."""
    pts, _ = _as_points(x, f.n)
    x0 = pts[0]
    fd = np.empty(f.n)
    for i in range(f.n):
        e = np.zeros(f.n)
        e[i] = step
        up = _apply(f.value, (x0 + e)[None, :], t, nodes)[0]
        dn = _apply(f.value, (x0 - e)[None, :], t, nodes)[0]
        fd[i] = (up - dn) / (2 * step)
    pg = _apply(f.grad, x0[None, :], t, nodes)[0]
    diff = float(np.max(np.abs(fd - pg)))
    return CommuteReport(fd.tolist(), pg.tolist(), diff, diff <= tol * max(1.0, float(np.max(np.abs(pg)))))


def reversed_bound(f: RelativeFunction, t: float, x, nodes: int = DEFAULT_NODES) -> float:
    """``(t/2) |P_t grad f(x)|^2 / P_t f(x)``."""
    pts, _ = _as_points(x, f.n)
    g = _apply(f.grad, pts[:1], t, nodes)[0]
    return 0.5 * t * float(g @ g) / float(_apply(f.value, pts[:1], t, nodes)[0])


def forward_bound(f: RelativeFunction, t: float, x, nodes: int = DEFAULT_NODES) -> float:
    """``(t/2) P_t(|grad f|^2 / f)(x)``."""
    pts, _ = _as_points(x, f.n)
    return 0.5 * t * float(_apply(_fisher_density(f), pts[:1], t, nodes)[0])


def _production_terms(f: RelativeFunction, t: float, s: float, x0: np.ndarray, nodes: int):
    """Integrand and both Cauchy-Schwarz bounds at time ``s``, by nested quadrature."""
    r = t - s
    outer, w = _shifted(x0[None, :], s, nodes) if s > 0 else (x0[None, None, :], np.ones(1))
    z = outer.reshape(-1, f.n)
    if r > 0:
        pf = _apply(f.value, z, r, nodes)
        pg = _apply(f.grad, z, r, nodes)
        pfish = _apply(_fisher_density(f), z, r, nodes)
    else:
        pf = f.value(z)
        pg = f.grad(z)
        pfish = _fisher_density(f)(z)
    integrand = float(w @ (np.sum(pg * pg, axis=1) / np.maximum(pf, EPS_FLOOR)))
    mean_g = w @ pg
    lower = float(mean_g @ mean_g) / float(w @ pf)
    upper = float(w @ pfish)
    return integrand, lower, upper


def _simpson_weights(slices: int, t: float) -> np.ndarray:
    if slices % 2:
        raise LabError("Simpson's rule needs an even number of slices")
    c = np.ones(slices + 1)
    c[1:-1:2] = 4.0
    c[2:-1:2] = 2.0
    return c * (t / slices) / 3.0


@dataclass(frozen=True)
class SemigroupTrace:
    f_digest: str
    t: float
    x: list
    identity_lhs: float
    production_integral: float
    reversed_bound: float
    forward_bound: float
    s_grid: list
    integrand: list = field(default_factory=list)
    reversed_integrand: list = field(default_factory=list)
    forward_integrand: list = field(default_factory=list)

    @property
    def identity_gap(self) -> float:
        return abs(self.identity_lhs - self.production_integral)

    def pointwise_sandwich(self, tol: float = 1e-9) -> bool:
        return all(lo - tol * (1 + abs(lo)) <= v <= hi + tol * (1 + abs(hi))
                   for lo, v, hi in zip(self.reversed_integrand, self.integrand, self.forward_integrand))

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "integrand", "reversed_bound_integrand", "forward_bound_integrand"])
        for row in zip(self.s_grid, self.integrand, self.reversed_integrand, self.forward_integrand):
            w.writerow([f"{v:.17g}" for v in row])
        return buf.getvalue()


def interpolation_identity(f: RelativeFunction, t: float = 1.0, x=None, slices: int = DEFAULT_SLICES,
                           nodes: int = DEFAULT_NODES) -> SemigroupTrace:
    """Both sides of the entropy interpolation identity at ``(t, x)``.

    The right side is a composite Simpson integral over ``s in [0, t]``; at
    ``s = t`` the inner semigroup is the identity and ``|grad f|^2 / f`` is
    used directly.
    """
    if not t > 0:
        raise LabError("t must be positive")
    x0 = np.zeros(f.n) if x is None else _as_points(x, f.n)[0][0]
    pf = _apply(f.value, x0[None, :], t, nodes)[0]
    pflogf = _apply(lambda p: xlogx(f.value(p)), x0[None, :], t, nodes)[0]
    if not pf > 0:
        raise LabError("P_t f vanishes at x")
    lhs = float(pflogf - pf * math.log(pf))
    s_grid = np.linspace(0.0, t, slices + 1)
    terms = [_production_terms(f, t, float(s), x0, nodes) for s in s_grid]
    integrand, lower, upper = (np.array(col) for col in zip(*terms))
    weights = _simpson_weights(slices, t)
    integral = 0.5 * float(weights @ integrand)
    return SemigroupTrace(
        f_digest=f.label,
        t=float(t),
        x=x0.tolist(),
        identity_lhs=lhs,
        production_integral=integral,
        reversed_bound=reversed_bound(f, t, x0, nodes),
        forward_bound=forward_bound(f, t, x0, nodes),
        s_grid=s_grid.tolist(),
        integrand=integrand.tolist(),
        reversed_integrand=lower.tolist(),
        forward_integrand=upper.tolist(),
    )


@dataclass(frozen=True)
class Sandwich:
    reversed_bound: float
    entropy: float
    forward_bound: float
    identity_lhs: float
    production_integral: float
    ordered: bool
    entropy_matches_identity: bool
    trace: SemigroupTrace

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("trace")
        return d


def sandwich_at_origin(f: RelativeFunction, nodes: int = DEFAULT_NODES, slices: int = DEFAULT_SLICES,
                       tol: float = 1e-7) -> Sandwich:
    """``reversed_bound <= Ent_gamma(f) <= forward_bound`` at ``(t, x) = (1, 0)``."""
    trace = interpolation_identity(f, 1.0, np.zeros(f.n), slices, nodes)
    ent = relative_entropy(f, nodes=nodes).value
    scale = 1.0 + abs(ent)
    ordered = trace.reversed_bound <= ent + tol * scale and ent <= trace.forward_bound + tol * scale
    return Sandwich(
        reversed_bound=trace.reversed_bound,
        entropy=ent,
        forward_bound=trace.forward_bound,
        identity_lhs=trace.identity_lhs,
        production_integral=trace.production_integral,
        ordered=bool(ordered),
        entropy_matches_identity=abs(ent - trace.identity_lhs) <= 1e-6 * scale,
        trace=trace,
    )
