import csv
import io
import json
import math

import numpy as np
import pytest

from revlsi.density import CallableFunction, ExpFunction, named_function
from revlsi.errors import DivergentIntegral, LabError
from revlsi.functionals import relative_entropy
from revlsi.inequalities import check_reversed_lsi
from revlsi.semigroup import (
    forward_bound,
    heat_apply,
    heat_apply_grad,
    heat_function,
    heat_gradient_commute_check,
    interpolation_identity,
    reversed_bound,
    sandwich_at_origin,
)

EXP_ENT = 0.5 * math.exp(0.5)
# mpmath references at (t, x) = (1, 0)
TANH_ENT, TANH_REV, TANH_FWD = 0.050713589221445181, 0.045859895545301365, 0.060638250335370036
QUAD_ENT, QUAD_FWD = 0.041891237186971643, 0.078630770711945527


def test_heat_of_square():
    f = CallableFunction(1, lambda p: p[:, 0] ** 2, lambda p: 2 * p, "x^2")
    assert heat_apply(f, 1.0, [0.0]) == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("a,t,x", [(1.0, 1.0, 0.0), (0.5, 2.0, 1.3), (-1.5, 0.3, -0.7)])
def test_heat_of_exponential(a, t, x):
    assert heat_apply(ExpFunction([a]), t, [x]) == pytest.approx(math.exp(a * x + a * a * t / 2), rel=1e-12)


def test_heat_at_time_zero():
    f = named_function("tanh")
    assert heat_apply(f, 0.0, [0.4]) == f.value([0.4])


def test_heat_rejects_negative_time():
    with pytest.raises(LabError):
        heat_apply(named_function("exp"), -1.0, [0.0])


def test_heat_divergence_detected():
    f = CallableFunction(1, lambda p: np.exp(0.6 * p[:, 0] ** 2), lambda p: p, "exp(0.6 x^2)")
    with pytest.raises(DivergentIntegral):
        heat_apply(f, 1.0, [0.0])


@pytest.mark.parametrize("name", ["exp", "tanh", "quadratic", "sin"])
@pytest.mark.parametrize("s,t", [(0.25, 0.25), (0.25, 0.5), (0.5, 0.25), (0.5, 0.5)])
def test_semigroup_property(name, s, t):
    f = named_function(name)
    x = [0.3]
    assert heat_apply(heat_function(f, s), t, x) == pytest.approx(heat_apply(f, s + t, x), abs=1e-6)


@pytest.mark.parametrize("name", ["exp", "tanh", "sin"])
def test_gradient_commutes(name):
    r = heat_gradient_commute_check(named_function(name), 0.7, [0.2])
    assert r.agrees and r.max_abs_diff < 1e-5


def test_heat_gradient_two_dimensional():
    f = ExpFunction([0.5, -1.0])
    g = heat_apply_grad(f, 1.0, [0.0, 0.0])
    assert np.allclose(g, f.a * math.exp(0.5 * f.a @ f.a), rtol=1e-12)


def test_identity_constant():
    tr = interpolation_identity(named_function("const"))
    assert tr.identity_lhs == pytest.approx(0, abs=1e-14)
    assert tr.production_integral == pytest.approx(0, abs=1e-14)


def test_identity_exp():
    tr = interpolation_identity(named_function("exp"))
    assert tr.identity_lhs == pytest.approx(EXP_ENT, rel=1e-12)
    assert abs(tr.identity_lhs - tr.production_integral) <= 1e-4


@pytest.mark.parametrize("name", ["tanh", "quadratic", "sin"])
def test_identity_non_exponential(name):
    tr = interpolation_identity(named_function(name))
    assert tr.identity_gap <= 1e-4 * (1 + abs(tr.identity_lhs))
    assert tr.pointwise_sandwich()


def test_identity_away_from_origin_and_in_2d():
    tr = interpolation_identity(named_function("tanh"), t=0.5, x=[0.8])
    assert tr.identity_gap <= 1e-6
    tr = interpolation_identity(named_function("quadratic", 2), t=1.0, x=[0.2, -0.4], slices=16, nodes=24)
    assert tr.identity_gap <= 1e-5


def test_identity_self_converges():
    f = named_function("tanh")
    a = interpolation_identity(f, slices=32, nodes=64).production_integral
    b = interpolation_identity(f, slices=64, nodes=128).production_integral
    assert abs(a - b) < 1e-5


def test_bounds_against_references():
    f = named_function("tanh")
    assert reversed_bound(f, 1.0, [0.0]) == pytest.approx(TANH_REV, abs=1e-8)
    assert forward_bound(f, 1.0, [0.0]) == pytest.approx(TANH_FWD, abs=1e-8)


def test_reversed_bound_is_half_reversed_lsi_lhs():
    f = named_function("sin")
    assert reversed_bound(f, 1.0, [0.0]) == pytest.approx(0.5 * check_reversed_lsi(f).lhs, rel=1e-10)


def test_sandwich_exp_collapses():
    s = sandwich_at_origin(named_function("exp"))
    for v in (s.reversed_bound, s.entropy, s.forward_bound):
        assert v == pytest.approx(EXP_ENT, abs=1e-4)
    assert s.ordered and s.entropy_matches_identity


def test_sandwich_constant():
    s = sandwich_at_origin(named_function("const"))
    assert max(abs(s.reversed_bound), abs(s.entropy), abs(s.forward_bound)) < 1e-14


@pytest.mark.parametrize("name,ent,fwd", [("quadratic", QUAD_ENT, QUAD_FWD), ("tanh", TANH_ENT, TANH_FWD)])
def test_sandwich_strict(name, ent, fwd):
    s = sandwich_at_origin(named_function(name))
    assert s.ordered and s.entropy_matches_identity
    assert s.entropy == pytest.approx(ent, abs=1e-8)
    assert s.forward_bound == pytest.approx(fwd, abs=1e-8)
    assert s.reversed_bound < s.entropy < s.forward_bound
    assert s.entropy == pytest.approx(relative_entropy(named_function(name)).value)


def test_trace_serialisation():
    tr = interpolation_identity(named_function("tanh"), slices=8)
    d = json.loads(tr.to_json())
    assert d["t"] == 1.0 and len(d["s_grid"]) == 9
    rows = list(csv.reader(io.StringIO(tr.to_csv())))
    assert rows[0] == ["s", "integrand", "reversed_bound_integrand", "forward_bound_integrand"]
    assert len(rows) == 10
    assert float(rows[3][1]) == tr.integrand[2]


def test_identity_rejects_bad_inputs():
    with pytest.raises(LabError):
        interpolation_identity(named_function("exp"), t=0.0)
    with pytest.raises(LabError):
        interpolation_identity(named_function("exp"), slices=7)
