"""Acceptance criteria 1-10, each at its stated tolerance and runtime budget."""
import json
import math
import time

import numpy as np
import pytest

from revlsi import corpus
from revlsi.cli import CHECKS, RunConfig, main, run_checks
from revlsi.density import GaussianSpec
from revlsi.density import named_function
from revlsi.discrete import (
    CubeFunction,
    bernoulli_optimal_constant,
    clt_pipeline,
    scan_optimal_constant,
    tensorization_check,
    two_point_sides,
)
from revlsi.functionals import covariance, shannon_entropy
from revlsi.inequalities import (
    check_entropy_trace,
    check_lsi_gross,
    check_max_entropy_det,
    check_nj,
    check_njj,
    check_reversed_euclidean,
    check_reversed_lsi,
    exp_witness,
)
from revlsi.isoperimetry import gaussian_cdf, gaussian_quantile, half_space_gap, isoperimetric_I
from revlsi.semigroup import interpolation_identity, sandwich_at_origin
from revlsi.transforms import (
    derive_reversed_euclidean,
    equivalence_roundtrip,
    intermediate_bound_check,
    optimal_alpha,
    scale_family,
)

from conftest import record_acceptance

EXP_ENT = 0.5 * math.exp(0.5)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def finish(number, failures, elapsed, budget, detail):
    if budget is not None and elapsed >= budget:
        failures.append(f"runtime {elapsed:.1f}s >= {budget}s")
    ok = not failures
    budget_text = f" (budget {budget}s)" if budget is not None else ""
    record_acceptance(number, ok, f"{detail}; {elapsed:.2f}s{budget_text}" + ("" if ok else f"; {failures[:3]}"))
    assert ok, failures


def test_criterion_01_saturation():
    rng = corpus.stream(1, 0)
    vectors = [rng.uniform(-2, 2, size=1) for _ in range(20)] + [rng.uniform(-2, 2, size=2) for _ in range(10)]
    failures, worst = [], {"analytic": 0.0, "quadrature": 0.0}
    with Timer() as t:
        for a in vectors:
            f = exp_witness(a)
            for method, tol in (("analytic", 1e-6), ("quadrature", 1e-4)):
                for check in (check_lsi_gross, check_reversed_lsi):
                    r = check(f, method=method)
                    rel = abs(r.slack) / r.rhs if r.rhs else abs(r.slack)
                    worst[method] = max(worst[method], rel)
                    if rel > tol:
                        failures.append((method, a.tolist(), rel))
    finish(1, failures, t.elapsed, 5,
           f"max |slack|/rhs analytic {worst['analytic']:.1e}, quadrature {worst['quadrature']:.1e}")


def test_criterion_02_gaussian_chain():
    rng = corpus.stream(2, 0)
    failures = []
    with Timer() as t:
        gaussians = []
        for i in range(50):
            n = 1 + i % 2
            a = rng.normal(size=(n, n))
            gaussians.append(GaussianSpec(rng.uniform(-2, 2, size=n), a @ a.T + 0.25 * np.eye(n)))
        gaussians.append(GaussianSpec([0.0, 0.0], np.diag([1.0, 4.0])))
        for g in gaussians:
            K = covariance(g)
            eig = np.linalg.eigvalsh(K)
            root = math.exp(np.mean(np.log(eig)))
            expected = {
                check_max_entropy_det: 0.0,
                check_njj: 0.0,
                check_entropy_trace: eig.mean() - root,
                check_nj: root * np.sum(1 / eig) - g.n,
            }
            for check, gap in expected.items():
                s = check(g).slack
                if abs(s - gap) > 1e-7:
                    failures.append((check.__name__, s, gap))
        diag = check_entropy_trace(gaussians[-1]).slack
        if abs(diag - 0.5) > 1e-7:
            failures.append(("diag(1,4) trace slack", diag))
    finish(2, failures, t.elapsed, 5, f"50 Gaussians saturate det/njj, anisotropy gaps match; diag(1,4) trace slack {diag:.9f}")


def test_criterion_03_corpus_positivity(corpus42):
    cfg = RunConfig("suite")
    failures, worst = [], {}
    with Timer() as t:
        for i, g in enumerate(corpus42):
            for name, r in run_checks(g, cfg).items():
                worst[name] = min(worst.get(name, math.inf), r.slack)
                if r.slack < -1e-7:
                    failures.append((i, name, r.slack))
    assert set(worst) == set(CHECKS) and len(CHECKS) == 10
    lowest = min(worst, key=worst.get)
    finish(3, failures, t.elapsed, 120, f"100 mixtures x 10 checkers, min slack {worst[lowest]:.2e} ({lowest})")


def test_criterion_04_equivalence(corpus42):
    failures, gap_max, derive_max = [], 0.0, 0.0
    with Timer() as t:
        for i, g in enumerate(corpus42):
            a = derive_reversed_euclidean(g)
            b = check_reversed_euclidean(g)
            d = max(abs(a.lhs - b.lhs), abs(a.rhs - b.rhs))
            derive_max = max(derive_max, d)
            if d > 1e-8:
                failures.append((i, "derive", d))
            bundle = equivalence_roundtrip(g)
            gap_max = max(gap_max, bundle.transported_gap)
            if bundle.transported_gap > 1e-6 or not bundle.sign_agreement:
                failures.append((i, "whiten", bundle.transported_gap))
            opt = optimal_alpha(float(np.trace(covariance(g))), g.n)
            grid = np.linspace(opt.alpha / 4, 4 * opt.alpha, 33)
            bounds = [intermediate_bound_check(scale_family(g, x)).rhs + g.n * math.log(x) for x in grid]
            k = int(np.argmin(bounds))
            if abs(grid[k] - opt.alpha) > grid[1] - grid[0] + 1e-12:
                failures.append((i, "alpha", grid[k], opt.alpha))
    finish(4, failures, t.elapsed, None,
           f"derive vs direct max {derive_max:.1e}, transported gap max {gap_max:.1e}, alpha scans ok")


def test_criterion_05_semigroup():
    failures, details = [], []
    with Timer() as t:
        for name in ("exp", "tanh", "quadratic"):
            f = named_function(name)
            s = sandwich_at_origin(f)
            gap = abs(s.identity_lhs - s.production_integral)
            details.append(f"{name} gap {gap:.1e}")
            if gap > 1e-4 * (1 + abs(s.identity_lhs)):
                failures.append((name, "identity", gap))
            if not s.ordered:
                failures.append((name, "sandwich", s.reversed_bound, s.entropy, s.forward_bound))
            if name == "exp":
                for v in (s.reversed_bound, s.entropy, s.forward_bound):
                    if abs(v - EXP_ENT) > 1e-4:
                        failures.append(("exp collapse", v))
    finish(5, failures, t.elapsed, 30, ", ".join(details))


def test_criterion_06_two_point_constant():
    failures = []
    with Timer() as t:
        half = scan_optimal_constant(0.5)
        if not 0.124 <= half <= 0.126:
            failures.append(("scan(0.5)", half))
        worst = 0.0
        for p in np.round(np.arange(0.1, 0.95, 0.1), 10):
            d = abs(scan_optimal_constant(float(p)) - bernoulli_optimal_constant(float(p)))
            worst = max(worst, d)
            if d > 1e-3:
                failures.append((p, d))
        ratio = two_point_sides(1.01, 0.99, 0.5).ratio
        if abs(ratio - 8) > 1e-2:
            failures.append(("ratio", ratio))
    finish(6, failures, t.elapsed, 30, f"scan(0.5) = {half:.12f}, max |scan - formula| {worst:.1e}, ratio {ratio:.6f}")


def test_criterion_07_tensorization():
    rng = np.random.default_rng(7)
    failures, min_slack, max_eq = [], math.inf, 0.0
    with Timer() as t:
        for _ in range(1000):
            n = int(rng.integers(2, 5))
            ps = rng.choice([0.3, 0.5, 0.7], size=n)
            r = tensorization_check(CubeFunction.from_table(rng.uniform(0.01, 10.0, size=2**n), ps))
            min_slack = min(min_slack, r.slack)
            if r.slack < -1e-12:
                failures.append(r.slack)
        for _ in range(50):
            n = int(rng.integers(2, 5))
            i = int(rng.integers(n))
            vals = rng.uniform(0.01, 10.0, size=2)
            table = np.moveaxis(np.broadcast_to(vals.reshape((2,) + (1,) * (n - 1)), (2,) * n), 0, i)
            r = tensorization_check(CubeFunction.from_table(table.ravel(), rng.choice([0.3, 0.5, 0.7], size=n)))
            max_eq = max(max_eq, abs(r.slack))
            if abs(r.slack) > 1e-12:
                failures.append(("single coordinate", r.slack))
    finish(7, failures, t.elapsed, 10, f"1000 tables min slack {min_slack:.2e}, single-coordinate |slack| <= {max_eq:.1e}")


def test_criterion_08_clt():
    failures = []
    with Timer() as t:
        rows = clt_pipeline(named_function("exp"), (4, 16, 64, 256, 1024))
        ents = [r.discrete_ent for r in rows]
        dist = [abs(e - EXP_ENT) for e in ents]
        if not all(b < a for a, b in zip(dist, dist[1:])):
            failures.append(("not monotone", ents))
        rel = dist[-1] / EXP_ENT
        if rel >= 0.02:
            failures.append(("gap", rel))
        if not rows[-1].deficit_gap < rows[0].deficit_gap:
            failures.append(("deficit", rows[0].deficit_gap, rows[-1].deficit_gap))
    finish(8, failures, t.elapsed, 30,
           f"relative gap at 1024 {rel:.2e}, deficit_gap {rows[0].deficit_gap:.2e} -> {rows[-1].deficit_gap:.2e}")


def test_criterion_09_isoperimetry():
    failures = []
    with Timer() as t:
        u = np.random.default_rng(9).uniform(0, 1, size=10_000)
        rt = float(np.max(np.abs(gaussian_cdf(gaussian_quantile(u)) - u)))
        if rt > 1e-12:
            failures.append(("round trip", rt))
        i_half = abs(isoperimetric_I(0.5) - 1 / math.sqrt(2 * math.pi))
        if i_half > 1e-12:
            failures.append(("I(1/2)", i_half))
        gaps = [half_space_gap(eps) for eps in (0.4, 0.2, 0.1, 0.05)]
        if not all(b < a for a, b in zip(gaps, gaps[1:])):
            failures.append(("not decreasing", gaps))
        if gaps[-1] > 0.02:
            failures.append(("eps=0.05 gap", gaps[-1]))
    finish(9, failures, t.elapsed, 10, f"round trip {rt:.1e}, gaps {[round(g, 5) for g in gaps]}")


def _without_metadata(text: str) -> str:
    cut = text.rfind('\n  "metadata": ')
    assert cut > 0
    return text[:cut]


def _cli(capsys, argv):
    code = main(argv)
    out, _ = capsys.readouterr()
    return code, out


def test_criterion_10_determinism(capsys):
    failures = []
    with Timer() as t:
        base = ["suite", "--seed", "42", "--count", "100"]
        c1, a = _cli(capsys, base + ["--workers", "1"])
        c2, b = _cli(capsys, base + ["--workers", "4"])
        if c1 != 0 or c2 != 0:
            failures.append(("suite exit", c1, c2))
        if _without_metadata(a) != _without_metadata(b):
            failures.append("suite output depends on worker count")
        if json.loads(a)["metadata"]["workers"] != 1:
            failures.append("metadata block missing")
        for argv in (["saturate", "--seed", "5"], ["constant"], ["clt"], ["semigroup", "--function", "tanh"],
                     ["suite", "--seed", "5", "--count", "8", "--format", "csv"]):
            first = _cli(capsys, argv)[1]
            second = _cli(capsys, argv)[1]
            if "csv" in argv:
                same = first == second
            else:
                same = _without_metadata(first) == _without_metadata(second)
            if not same:
                failures.append(("repeat differs", argv))
    finish(10, failures, t.elapsed, None, "suite (1 vs 4 workers) and repeated saturate/constant/clt/semigroup runs byte-identical")
