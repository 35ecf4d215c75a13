import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revlsi.density import (
    ExpFunction,
    GaussianSpec,
    GridField,
    MixtureSpec,
    discretize,
    named_function,
    normalize,
    standard_gaussian,
)
from revlsi.errors import DegenerateSupport, LabError, UnsupportedDimension, ZeroMass
from revlsi.functionals import (
    covariance,
    entropy_power,
    entropy_power_from_entropy,
    fisher_matrix,
    fisher_scalar,
    gauss_hermite_rule,
    relative_entropy,
    shannon_entropy,
)
from revlsi.transforms import linear_map

from conftest import random_gaussian

HALF_LOG_2PIE = 0.5 * math.log(2 * math.pi * math.e)
# mpmath quadrature (30 digits) of the bimodal mixture 0.5 N(-2,1) + 0.5 N(2,1)
BIMODAL_H = 2.0516587269415397
BIMODAL_J = 0.72561036483704474


def test_two_point_hermite_rule():
    rule = gauss_hermite_rule(2, 1)
    assert np.allclose(np.sort(rule.nodes[:, 0]), [-1.0, 1.0])
    assert np.allclose(rule.weights, [0.5, 0.5])


@pytest.mark.parametrize("points", [2, 3, 10, 64])
def test_second_moment_exact(points):
    rule = gauss_hermite_rule(points, 1)
    assert rule.integrate(rule.nodes[:, 0] ** 2) == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("points", [3, 5, 64])
def test_fourth_moment(points):
    rule = gauss_hermite_rule(points, 1)
    assert rule.integrate(rule.nodes[:, 0] ** 4) == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rule_weights_sum_to_one(n):
    assert gauss_hermite_rule(16, n).weights.sum() == pytest.approx(1.0, abs=1e-12)


def test_rule_exactness_per_axis_degree():
    rule = gauss_hermite_rule(4, 2)
    x, y = rule.nodes.T
    # E x^6 y^4 = 15 * 3
    assert rule.integrate(x**6 * y**4) == pytest.approx(45.0, rel=1e-12)


def test_rule_limits():
    with pytest.raises(LabError):
        gauss_hermite_rule(1, 1)
    with pytest.raises(LabError):
        gauss_hermite_rule(257, 1)
    with pytest.raises(UnsupportedDimension):
        gauss_hermite_rule(8, 4)


def test_rule_arrays_are_read_only():
    rule = gauss_hermite_rule(8, 1)
    with pytest.raises(ValueError):
        rule.weights[0] = 1.0


def test_entropy_of_constant():
    assert relative_entropy(named_function("const")).value == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("a,expected", [(1.0, 0.5 * math.exp(0.5)), (2.0, 2 * math.e**2)])
def test_entropy_of_exponential(a, expected):
    val = relative_entropy(ExpFunction([a]))
    assert val.value == pytest.approx(expected, rel=1e-10)
    assert val.estimated_error < 1e-8


def test_lebesgue_entropy_of_uniform_grid():
    fld = GridField([0.0], [1.0], np.ones(33))
    assert relative_entropy(fld).value == pytest.approx(0.0, abs=1e-14)
    assert shannon_entropy(fld).value == pytest.approx(0.0, abs=1e-14)


def test_zero_mass():
    with pytest.raises(ZeroMass):
        relative_entropy(GridField([0.0], [1.0], np.zeros(9)))


def test_standard_gaussian_entropy():
    assert shannon_entropy(standard_gaussian(1)).value == pytest.approx(1.4189385332046727, rel=1e-15)


def test_scaled_gaussian_entropy():
    assert shannon_entropy(GaussianSpec([0.0], [[4.0]])).value == pytest.approx(2.1120857137646180, rel=1e-14)


def test_grid_entropy_matches_closed_form():
    fld = normalize(discretize(standard_gaussian(1)))
    val = shannon_entropy(fld)
    assert val.value == pytest.approx(HALF_LOG_2PIE, abs=1e-9)
    assert val.estimated_error < 1e-6


def test_mixture_entropy_and_fisher_against_independent_quadrature(bimodal):
    h = shannon_entropy(bimodal)
    j = fisher_scalar(bimodal)
    assert h.value == pytest.approx(BIMODAL_H, abs=1e-10)
    assert j.value == pytest.approx(BIMODAL_J, abs=1e-10)
    assert h.estimated_error < 1e-9 and j.estimated_error < 1e-9


def test_mixture_of_one_component_is_gaussian(rng):
    g = random_gaussian(rng, 2)
    m = MixtureSpec([1.0], (g,))
    assert shannon_entropy(m).value == pytest.approx(shannon_entropy(g).value, abs=1e-10)
    assert np.allclose(fisher_matrix(m), g.precision, atol=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_entropy_power_of_standard_gaussian(n):
    assert entropy_power(standard_gaussian(n)).value == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("var", [0.25, 1.0, 9.0])
def test_entropy_power_equals_variance(var):
    assert entropy_power(GaussianSpec([1.0], [[var]])).value == pytest.approx(var, rel=1e-13)


def test_entropy_power_anisotropic():
    assert entropy_power(GaussianSpec([0, 0], np.diag([1.0, 4.0]))).value == pytest.approx(2.0, rel=1e-13)


def test_covariance_closed_forms(bimodal):
    K = np.array([[2.0, 0.5], [0.5, 1.0]])
    assert np.array_equal(covariance(GaussianSpec([1, 2], K)), K)
    sym = MixtureSpec([0.5, 0.5], (GaussianSpec([-1.0], [[1.0]]), GaussianSpec([1.0], [[1.0]])))
    assert covariance(sym)[0, 0] == pytest.approx(2.0, abs=1e-15)
    assert covariance(bimodal)[0, 0] == pytest.approx(5.0, abs=1e-14)


def test_grid_covariance_of_standard_gaussian():
    fld = discretize(standard_gaussian(1))
    assert covariance(fld)[0, 0] == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("K", [np.eye(2), np.diag([1.0, 4.0]), np.array([[2.0, 0.6], [0.6, 0.5]])])
def test_fisher_matrix_of_gaussian(K):
    assert np.allclose(fisher_matrix(GaussianSpec(np.zeros(2), K)), np.linalg.inv(K), atol=1e-14)


@pytest.mark.parametrize("cov,expected", [([[4.0]], 0.25), ([[1.0]], 1.0)])
def test_fisher_scalar_1d(cov, expected):
    assert fisher_scalar(GaussianSpec([0.0], cov)).value == pytest.approx(expected)


def test_fisher_scalar_diag():
    assert fisher_scalar(GaussianSpec([0, 0], np.diag([1.0, 4.0]))).value == pytest.approx(1.25)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fisher_scalar_standard(n):
    assert fisher_scalar(standard_gaussian(n)).value == pytest.approx(n)


def test_mixture_fisher_matches_grid_fisher(bimodal):
    fld = normalize(discretize(bimodal, shape=1025))
    assert fisher_scalar(fld).value == pytest.approx(BIMODAL_J, abs=1e-6)


@pytest.mark.parametrize("d", [
    standard_gaussian(1),
    GaussianSpec([0.0, 0.0], [[1.5, 0.4], [0.4, 0.8]]),
    MixtureSpec([0.4, 0.6], (GaussianSpec([-1.0, 0.0], np.eye(2)), GaussianSpec([1.5, 0.5], [[0.7, 0.2], [0.2, 1.2]]))),
])
def test_grid_fisher_log_and_sqrt_forms_agree(d):
    fld = normalize(discretize(d))
    log_form = fisher_matrix(fld, form="log")
    sqrt_form = fisher_matrix(fld, form="sqrt")
    assert np.max(np.abs(log_form - sqrt_form)) <= 1e-4


def test_grid_fisher_masks_empty_cells():
    # g vanishes on half the box: masked nodes carry no mass, result is finite
    x = np.linspace(-8, 8, 513)
    vals = np.where(x < 0, 0.0, np.exp(-0.5 * x**2))
    J = fisher_matrix(GridField([-8.0], [8.0], vals))
    assert np.all(np.isfinite(J))


def test_grid_fisher_degenerate_support(monkeypatch):
    import revlsi.functionals as fmod

    x = np.linspace(-8, 8, 257)
    vals = np.exp(-0.5 * x**2)
    vals[np.abs(x) > 7.5] = 1e-14
    monkeypatch.setattr(fmod, "MASK_MASS", 1e-16)
    with pytest.raises(DegenerateSupport):
        fisher_matrix(GridField([-8.0], [8.0], vals))


def test_unknown_fisher_form():
    with pytest.raises(LabError):
        fisher_matrix(discretize(standard_gaussian(1)), form="cube")


def test_entropy_translation_invariance(bimodal):
    shifted = linear_map(bimodal, np.eye(1))
    moved = MixtureSpec(bimodal.weights, tuple(GaussianSpec(c.mean + 3.7, c.cov) for c in bimodal.components))
    base = shannon_entropy(bimodal).value
    assert shannon_entropy(shifted).value == pytest.approx(base, abs=1e-8)
    assert shannon_entropy(moved).value == pytest.approx(base, abs=1e-8)


@given(st.floats(-20, 5))
def test_entropy_power_identity(h):
    for n in (1, 2, 3):
        assert entropy_power_from_entropy(h, n) == pytest.approx(math.exp(2 * h / n) / (2 * math.pi * math.e), rel=1e-15)


@pytest.mark.parametrize("n", [1, 2])
def test_gaussian_products_saturate(n, rng):
    for _ in range(5):
        g = random_gaussian(rng, n)
        N = entropy_power(g).value
        J = fisher_matrix(g)
        assert N * np.trace(J) >= n - 1e-8
        assert N * np.linalg.det(J) ** (1 / n) == pytest.approx(1.0, abs=1e-8)
        if n == 1:
            assert N * np.trace(J) == pytest.approx(1.0, abs=1e-8)


def test_symmetric_psd_outputs(corpus42):
    for d in corpus42[:20]:
        for M in (fisher_matrix(d), covariance(d)):
            assert np.max(np.abs(M - M.T)) <= 1e-10
            assert np.linalg.eigvalsh(M).min() >= -1e-10


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_relative_entropy_non_negative(seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1, 1, size=3)
    f = type(named_function("tanh"))(
        1,
        lambda p: 1.5 + np.sin(a[0] * p[:, 0] + a[1]) * a[2],
        lambda p: (a[0] * a[2] * np.cos(a[0] * p[:, 0] + a[1]))[:, None],
        "1.5+c sin(bx+d)",
    )
    val = relative_entropy(f)
    assert val.value >= -val.estimated_error - 1e-15
