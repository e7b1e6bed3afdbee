import copy

import numpy as np
import pytest

from sparse_ad_library import math_functions as mf
from sparse_ad_library.ad_scalar import (ADScalar, make_parameter, make_seeded, make_variable,
                                         register_variables, sum_scalars, values_of)
from sparse_ad_library.errors import AdDomainError


def scalar(value, deps):
    """ Temporary with the given dependency map. """
    x = ADScalar(value)
    for k, d in deps.items():
        x.add_dependencies(make_seeded(0.0, k, d))
    return x


####################################################
# Registration

def test_make_variable_seeds_one():
    x = make_variable(8.0, 0)
    assert x.value == 8.0
    assert x.deps == {0: 1.0}
    assert x.var_id == 0
    assert not x.fixed
    assert x.is_registered()


def test_make_variable_zero_value():
    assert make_variable(0.0, 5).deps == {5: 1.0}


def test_set_fixed_clears_dependencies():
    x = make_variable(2.0 / 3.0, 2)
    x.set_fixed(True)
    assert x.fixed
    assert x.deps == {}


def test_reregistration_clears_previous_dependencies():
    x = make_variable(1.0, 0) * make_variable(2.0, 1)
    x.set_variable_number(4)
    assert x.deps == {4: 1.0}


def test_unfixing_does_not_restore_seed():
    x = make_variable(1.0, 3)
    x.set_fixed(True)
    x.set_fixed(False)
    assert x.deps == {}
    x.set_variable_number(3)
    assert x.deps == {3: 1.0}


def test_fixed_scalar_stays_without_dependencies():
    p = make_parameter(10.0)
    p.add_dependencies(make_variable(1.0, 0))
    assert p.deps == {}
    assert (p * make_variable(2.0, 1)).deps == {1: 10.0}


def test_register_variables_with_offset():
    xs = register_variables([1.0, 2.0, 3.0], offset=4)
    assert [x.var_id for x in xs] == [4, 5, 6]
    assert [x.deps for x in xs] == [{4: 1.0}, {5: 1.0}, {6: 1.0}]


def test_make_seeded():
    x = make_seeded(0.5, 7, 1e5)
    assert x.value == 0.5
    assert x.deps == {7: 1e5}
    assert not x.is_registered()


####################################################
# Arithmetic

def test_product_rule():
    r = make_variable(2.0, 0) * make_variable(3.0, 1)
    assert r.value == 6.0
    assert r.deps == {0: 3.0, 1: 2.0}


def test_scaled_difference():
    x = make_variable(8.0, 0)
    y = make_variable(20.0, 1)
    r = 10.0 * (y - x)
    assert r.value == 120.0
    assert r.deps == {0: -10.0, 1: 10.0}


def test_quotient_keeps_structural_zero():
    x = make_variable(2.0, 0)
    y = make_variable(3.0, 1)
    r = (x * y) / y
    assert r.value == pytest.approx(2.0)
    assert r.der(0) == pytest.approx(1.0)
    assert 1 in r.deps
    assert r.der(1) == pytest.approx(0.0, abs=1e-15)


def test_division_by_zero_value():
    x = make_variable(1.0, 0)
    with pytest.raises(AdDomainError) as err:
        x / make_variable(0.0, 1)
    assert err.value.operation == '/'
    with pytest.raises(ValueError):
        x / 0.0
    with pytest.raises(AdDomainError):
        1.0 / make_variable(0.0, 1)


def test_reflected_operations():
    x = make_variable(4.0, 0)
    assert (1.0 - x).deps == {0: -1.0}
    assert (8.0 / x).value == 2.0
    assert (8.0 / x).der(0) == pytest.approx(-0.5)
    assert (2.0 + x).value == 6.0
    assert (-x).deps == {0: -1.0}
    assert (+x).deps == {0: 1.0}


def test_power():
    x = make_variable(3.0, 0)
    r = x ** 2
    assert r.value == 9.0
    assert r.der(0) == 6.0
    r = 2.0 ** x
    assert r.value == 8.0
    assert r.der(0) == pytest.approx(8.0 * np.log(2.0))
    assert (x ** 0).deps == {0: 0.0}
    with pytest.raises(AdDomainError):
        make_variable(0.0, 0) ** -1


def test_power_with_variable_exponent():
    x = make_variable(2.0, 0)
    y = make_variable(3.0, 1)
    r = x ** y
    assert r.value == pytest.approx(8.0)
    assert r.der(0) == pytest.approx(12.0)
    assert r.der(1) == pytest.approx(8.0 * np.log(2.0))


@pytest.mark.parametrize("p", [0.5, 0.25])
def test_fractional_power_at_zero_has_infinite_slope(p):
    r = make_variable(0.0, 0) ** p
    assert r.value == 0.0
    assert r.der(0) == np.inf
    assert (make_variable(0.0, 0) ** 0.5).der(0) == mf.sqrt(make_variable(0.0, 0)).der(0)


def test_integer_power_at_zero():
    x = make_variable(0.0, 0)
    assert (x ** 1).der(0) == 1.0
    assert (x ** 2).der(0) == 0.0
    assert (x ** 1.5).der(0) == 0.0


@pytest.mark.parametrize("op", ['+', '-', '*', '/'])
def test_key_set_is_union(op, rng):
    a = scalar(1.5, {0: 1.0, 3: 2.0})
    b = scalar(2.5, {1: -1.0, 3: 0.5, 6: 4.0})
    r = {'+': a + b, '-': a - b, '*': a * b, '/': a / b}[op]
    assert set(r.deps) == {0, 1, 3, 6}


@pytest.mark.parametrize("op", ['+', '-', '*', '/'])
def test_binary_derivatives_match_central_differences(op, rng):
    funcs = {
        '+': lambda u, v: u + v,
        '-': lambda u, v: u - v,
        '*': lambda u, v: u * v,
        '/': lambda u, v: u / v,
    }
    f = funcs[op]
    step = np.finfo(float).eps ** (1.0 / 3.0)
    for _ in range(20):
        u, v = rng.uniform(0.5, 3.0, 2)
        r = f(make_variable(u, 0), make_variable(v, 1))
        hu = step * max(1.0, abs(u))
        hv = step * max(1.0, abs(v))
        du = (f(u + hu, v) - f(u - hu, v)) / (2.0 * hu)
        dv = (f(u, v + hv) - f(u, v - hv)) / (2.0 * hv)
        assert r.der(0) == pytest.approx(du, rel=1e-6, abs=1e-9)
        assert r.der(1) == pytest.approx(dv, rel=1e-6, abs=1e-9)


def test_evaluation_order_independence():
    x, y, z = register_variables([8.0, 20.0, 2.0 / 3.0])
    beta = 28.0
    direct = x * y - beta * z
    u = x * y
    stepwise = u - beta * z
    assert direct.value == stepwise.value
    assert direct.deps == stepwise.deps


def test_mixed_real_arithmetic_does_not_promote():
    x = make_variable(2.0, 0)
    assert isinstance(x * 3, ADScalar)
    with pytest.raises(TypeError):
        x + "1"


def test_numpy_scalar_on_the_left():
    x = make_variable(2.0, 0)
    r = np.float64(3.0) * x
    assert isinstance(r, ADScalar)
    assert r.deps == {0: 3.0}


####################################################
# Comparison

def test_comparisons_use_values_only():
    assert make_variable(1.0, 0) > make_variable(0.5, 1)
    assert make_variable(2.0, 0) == ADScalar(2.0)
    assert ADScalar(-1.0) <= 0.0
    assert make_variable(1.0, 0) != 2.0
    assert 0.5 < make_variable(1.0, 0)


def test_comparisons_ignore_dependency_changes():
    a = make_variable(1.0, 0)
    b = make_variable(2.0, 1)
    before = (a < b, a == b, a >= b)
    a.scale_dependencies(-7.0)
    a.add_dependencies(make_seeded(0.0, 9, 3.0))
    assert (a < b, a == b, a >= b) == before


def test_unhashable():
    with pytest.raises(TypeError):
        hash(make_variable(1.0, 0))


####################################################
# In-place dependency manipulation

def test_scale_dependencies():
    x = scalar(1.0, {0: 2.0, 3: -1.0})
    x.scale_dependencies(0.5)
    assert x.deps == {0: 1.0, 3: -0.5}
    x.scale_dependencies(1.0)
    assert x.deps == {0: 1.0, 3: -0.5}
    x.scale_dependencies(0.0)
    assert x.deps == {0: 0.0, 3: 0.0}


def test_add_dependencies():
    u = ADScalar(1.0)
    u.add_dependencies(scalar(2.0, {1: 3.0}))
    assert u.deps == {1: 3.0}

    u = scalar(1.0, {1: 9.0})
    u.add_dependencies(scalar(2.0, {1: 3.0}))
    assert u.deps == {1: 3.0}

    u.add_dependencies(u)
    assert u.deps == {1: 3.0}
    assert u.value == 1.0


####################################################
# Assignment and copies

def test_assign_real_removes_dependencies():
    t = make_variable(5.0, 0)
    t.assign(3.0)
    assert t.value == 3.0
    assert t.deps == {}
    assert t.var_id == 0


def test_assign_self_is_noop():
    t = make_variable(5.0, 0)
    t.assign(t)
    assert t.value == 5.0
    assert t.deps == {0: 1.0}


def test_assign_fixed_source_makes_target_fixed():
    t = make_variable(5.0, 0)
    t.assign(make_parameter(2.0))
    assert t.fixed
    assert t.value == 2.0
    assert t.deps == {}
    assert t.var_id == 0


def test_assign_copies_dependencies():
    t = ADScalar(0.0)
    src = make_variable(2.0, 1) * make_variable(3.0, 2)
    t.assign(src)
    assert t.deps == src.deps
    t.scale_dependencies(2.0)
    assert src.deps == {1: 3.0, 2: 2.0}


def test_copy_keeps_dependencies_only():
    x = make_variable(4.0, 3)
    c = copy.copy(x)
    assert c.value == 4.0
    assert c.deps == {3: 1.0}
    assert c.var_id is None
    c.scale_dependencies(5.0)
    assert x.deps == {3: 1.0}


####################################################
# Helpers and printing

def test_sum_scalars_matches_chained_addition():
    xs = register_variables([1.0, 2.0, 3.0, 4.0])
    terms = [2.0 * xs[0], xs[1] * xs[2], xs[3] - xs[0], 5.0]
    chained = terms[0] + terms[1] + terms[2] + terms[3]
    summed = sum_scalars(terms)
    assert summed.value == chained.value
    assert summed.deps == chained.deps


def test_sum_scalars_of_reals():
    assert sum_scalars([1.0, 2.5]) == 3.5
    assert sum_scalars([]) == 0.0


def test_values_of():
    assert values_of([make_variable(1.5, 0), 2.0]) == [1.5, 2.0]


def test_print_formats():
    assert str(make_parameter(2.0)) == "2 (fixed)"
    assert str(make_variable(8.0, 0)) == "8 (variable 0)"
    r = 10.0 * (make_variable(20.0, 1) - make_variable(8.0, 0))
    assert str(r) == "120 dependencies: [ (0, -10) (1, 10) ]"
