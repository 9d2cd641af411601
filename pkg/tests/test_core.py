from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signdiff.core import (
    ConfigurationError,
    Grid,
    QuadratureError,
    SolutionField,
    conductivity,
    derive_params,
    from_function,
    load_initial_condition,
    poly_example1,
    quadrature,
    step_example2,
    tabulated,
    tridiag_solve,
)

admissible_k = st.floats(-50, 50, allow_nan=False).filter(lambda k: abs(k) > 1e-3 and abs(k + 1) > 1e-3)


def test_derived_parameters_for_reference_medium():
    p = derive_params(-0.5, 1.0)
    assert p.beta == pytest.approx(3.0)
    assert p.alpha == pytest.approx(2.0)
    assert p.signed and p.bounded


def test_unit_conductivity_is_plain_brownian():
    p = derive_params(1.0)
    assert p.beta == 0.0 and p.alpha == 0.5


@pytest.mark.parametrize("k", [0.0, -1.0, math.nan, math.inf])
def test_rejected_contrasts(k):
    with pytest.raises(ConfigurationError):
        derive_params(k)


@pytest.mark.parametrize("a", [0.0, -1.0])
def test_rejected_half_width(a):
    with pytest.raises(ConfigurationError):
        derive_params(2.0, a)


def test_infinite_half_width_is_allowed():
    assert not derive_params(2.0, math.inf).bounded


@given(admissible_k)
def test_beta_flips_under_inversion(k):
    assert derive_params(1.0 / k).beta == pytest.approx(-derive_params(k).beta, rel=1e-12, abs=1e-12)


@given(admissible_k, st.floats(0.1, 10))
def test_derivation_is_idempotent(k, a):
    p = derive_params(k, a)
    assert derive_params(p.k, p.a) == p


@given(admissible_k)
def test_alpha_and_beta_are_linked(k):
    p = derive_params(k)
    assert 2 * p.alpha - 1 == pytest.approx(p.beta, rel=1e-12, abs=1e-12)


def test_conductivity_is_two_valued():
    p = derive_params(-0.5)
    np.testing.assert_array_equal(conductivity([-0.3, 0.0, 0.2], p), [-0.5, 1.0, 1.0])


@given(st.integers(1, 500), st.floats(0.1, 20))
def test_grid_nodes_are_symmetric_with_exact_anchors(n_half, a):
    g = Grid.from_half_width(a, n_half)
    x = g.nodes
    assert x.size == g.size == 2 * n_half + 1
    np.testing.assert_array_equal(x, -x[::-1])
    assert x[g.center] == 0.0 and x[0] == -a and x[-1] == a


def test_grid_from_spacing_requires_integer_ratio():
    assert Grid.from_spacing(1.0, 2e-3).n_half == 500
    with pytest.raises(ConfigurationError):
        Grid.from_spacing(1.0, 0.3)
    with pytest.raises(ConfigurationError):
        Grid.from_half_width(1.0, 0)


def test_example_data():
    u1 = poly_example1()
    assert u1(0.0) == 2.0 and u1(1.0) == 1.0 and u1(-1.0) == 0.0 and u1(0.5) == 0.0
    assert u1.continuous_at_zero
    u2 = step_example2()
    np.testing.assert_array_equal(u2(np.array([-0.5, 0.0, 0.5])), [0.5, -0.5, -0.5])
    assert (u2.left_limit, u2.right_limit) == (0.5, -0.5)
    np.testing.assert_array_equal(u2.left_part(np.array([-0.5, 0.0])), [0.5, 0.0])
    np.testing.assert_array_equal(u2.right_part(np.array([-0.5, 0.0])), [0.0, -0.5])


def test_tabulated_interpolates_linearly():
    u = tabulated([1.0, -1.0, 0.0], [0.0, 0.0, 2.0])
    assert u(0.5) == pytest.approx(1.0)
    assert u.left_limit == u.right_limit == 2.0
    assert u.breakpoints == (-1.0, 0.0, 1.0)
    with pytest.raises(ConfigurationError):
        tabulated([0.0, 0.0], [1.0, 2.0])


def test_from_function_limits():
    u = from_function(np.cos)
    assert u.kind == "function" and u.left_limit == 1.0
    v = from_function(np.sign, left_limit=-1.0, right_limit=1.0)
    assert not v.continuous_at_zero


@pytest.mark.parametrize("header", ["", "x,u\n"])
def test_load_initial_condition_from_csv(tmp_path, header):
    path = tmp_path / "u0.csv"
    path.write_text(header + "-1,0\n0,1\n1,0\n")
    u = load_initial_condition(str(path))
    assert u(0.5) == pytest.approx(0.5)


def test_load_initial_condition_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        load_initial_condition(str(tmp_path / "missing.csv"))
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1,2\n1,2,3\n")
    with pytest.raises(ConfigurationError):
        load_initial_condition(str(bad))


def test_solution_field_interpolation():
    g = Grid.from_half_width(1.0, 2)
    f = SolutionField(0.1, g, np.array([0.0, 1.0, 2.0, 1.0, 0.0]), "test")
    assert f.at(0.25) == pytest.approx(1.5)
    x, u = f.interior()
    np.testing.assert_array_equal(x, [-0.5, 0.0, 0.5])


def test_quadrature_splits_at_the_jump():
    assert quadrature(lambda x: 1.0 if x < 0 else -1.0, -1.0, 2.0) == pytest.approx(-1.0, abs=1e-12)
    assert quadrature(math.exp, 0.0, 1.0) == pytest.approx(math.e - 1.0, abs=1e-13)
    with pytest.raises(ValueError):
        quadrature(math.exp, 1.0, 1.0)


def test_quadrature_failure_is_reported():
    with pytest.raises(QuadratureError) as info:
        quadrature(lambda x: math.sin(1.0 / x) / x, 1e-8, 1.0, tol=1e-15, limit=5)
    assert math.isfinite(info.value.estimate)


@settings(max_examples=40)
@given(st.integers(1, 60), st.integers(0, 2**32 - 1))
def test_tridiagonal_solve_multiply_back(n, seed):
    rng = np.random.default_rng(seed)
    lower = rng.uniform(-1, 1, n - 1)
    upper = rng.uniform(-1, 1, n - 1)
    diag = 2.5 + rng.uniform(0, 1, n)
    rhs = rng.normal(size=n)
    sol = tridiag_solve(lower, diag, upper, rhs)
    matrix = np.diag(diag) + np.diag(lower, -1) + np.diag(upper, 1)
    np.testing.assert_allclose(matrix @ sol, rhs, atol=1e-12)


def test_tridiagonal_solve_validation():
    with pytest.raises(ValueError):
        tridiag_solve([1.0], [1.0, 2.0, 3.0], [1.0, 1.0], [1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        tridiag_solve([1.0], [1.0, 2.0], [1.0], [1.0])
    with pytest.raises(ZeroDivisionError):
        tridiag_solve([1.0], [1.0, 1.0], [1.0], [1.0, 2.0])


def test_tridiagonal_solve_several_right_hand_sides():
    rhs = np.arange(6.0).reshape(3, 2)
    sol = tridiag_solve([-1.0, -1.0], [4.0, 4.0, 4.0], [-1.0, -1.0], rhs)
    matrix = np.diag([4.0] * 3) + np.diag([-1.0] * 2, -1) + np.diag([-1.0] * 2, 1)
    np.testing.assert_allclose(matrix @ sol, rhs)

