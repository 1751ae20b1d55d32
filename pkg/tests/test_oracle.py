import ast
import math
import warnings
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import gradcontact.oracle as oracle
from conftest import make_problem
from gradcontact.assembly import profile_rhs
from gradcontact.hertz import pressure_closed_form, solve_equal_exponent, solve_hertz
from gradcontact.kernel import ExponentPair, H_coeff, h_n
from gradcontact.oracle import (
    QuadratureShortfallWarning,
    build_grid,
    nystrom_hertz_b,
    nystrom_solve,
    quad_coefficient,
    weighted_integral,
)


def test_oracle_imports_only_definitions():
    tree = ast.parse(Path(oracle.__file__).read_text())
    local = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom) and node.level:
            local.update((node.module, a.name) for a in node.names)
    # the material constant is part of the problem definition
    assert local == {("assembly", "material_theta")}


def test_grid_shape():
    # even M puts a collocation node on the middle knot
    g = build_grid(0.7, 0.3, 60)
    assert np.all(np.abs(g.nodes) < 1)
    np.testing.assert_allclose(np.sort(g.nodes), -np.sort(g.nodes)[::-1], atol=1e-15)
    assert np.all(np.isfinite(g.K1)) and np.all(np.isfinite(g.K2))


def test_equal_exponent_against_closed_form():
    prob = make_problem(0.3, 0.3)
    b = solve_equal_exponent(prob).b
    res = nystrom_solve(prob, b, build_grid(0.3, 0.3, 200))
    x = b * res.grid.nodes[np.abs(res.grid.nodes) < 0.98]
    np.testing.assert_allclose(res.pressure(x), pressure_closed_form(prob, x, b), rtol=1e-4)


def test_distinct_exponents_against_spectral():
    sol = solve_hertz(make_problem(0.7, 0.3))
    res = nystrom_solve(sol.problem, sol.b, build_grid(0.7, 0.3, 200))
    x = sol.b * res.grid.nodes[np.abs(res.grid.nodes) < 0.95]
    np.testing.assert_allclose(res.pressure(x), sol.pressure(x), rtol=1e-3)


def test_refinement_converges():
    sol = solve_hertz(make_problem(0.7, 0.3))
    x = sol.b * np.linspace(-0.9, 0.9, 19)
    ref = sol.pressure(x)
    errs = []
    for M in (50, 100, 200):
        res = nystrom_solve(sol.problem, sol.b, build_grid(0.7, 0.3, M))
        errs.append(np.max(np.abs(res.pressure(x) / ref - 1)))
    assert errs[0] > errs[1] > errs[2]


def test_nystrom_half_length():
    prob = make_problem(0.7, 0.1)
    b_ny = nystrom_hertz_b(prob, build_grid(0.7, 0.1, 100))
    assert b_ny == pytest.approx(solve_hertz(prob).b, abs=2e-4)


@pytest.mark.parametrize("n, k", [(2, 0), (4, 2), (6, 4), (8, 0)])
def test_quad_H_below_diagonal_vanishes(n, k):
    assert abs(quad_coefficient("H", (k, n), {"alpha1": 0.7, "alpha2": 0.3})) < 1e-11


@pytest.mark.parametrize("n, m", [(0, 2), (2, 4), (0, 6), (3, 5)])
def test_quad_gram_vanishes(n, m):
    assert abs(quad_coefficient("h", (n, m), {"alpha": 0.4})) < 1e-11


def test_quad_rhs_reproduces_quadratic_entries():
    a1, b = 0.55, 1.25
    g1, _ = profile_rhs(make_problem(a1, 0.2).profile, b, a1, 2)
    for i in range(2):
        ref = quad_coefficient("g", (2 * i,), {"alpha1": a1, "b": b, "Q0": 1.0})
        assert ref == pytest.approx(g1[i], rel=1e-10)


@given(a1=st.floats(0.1, 0.95), r=st.floats(0.1, 0.95), n=st.integers(0, 8), j=st.integers(0, 4))
@settings(max_examples=25, deadline=None)
def test_property_H(a1, r, n, j):
    a2 = r * a1
    k = n + 2 * j
    ref = quad_coefficient("H", (k, n), {"alpha1": a1, "alpha2": a2})
    val = H_coeff(n, k, ExponentPair(a1, a2))
    assert abs(val - ref) <= 1e-9 * max(abs(ref), 1e-3 * abs(H_coeff(n, n, ExponentPair(a1, a2))))


@given(a=st.floats(0.1, 0.95), n=st.integers(0, 12))
@settings(max_examples=25, deadline=None)
def test_property_h(a, n):
    assert h_n(a, n) == pytest.approx(quad_coefficient("h", (n, n), {"alpha": a}), rel=1e-10)


@given(a1=st.floats(0.1, 0.95), b=st.floats(0.3, 3), Q0=st.floats(0, 2), Q1=st.floats(0, 2))
@settings(max_examples=25, deadline=None)
def test_property_g(a1, b, Q0, Q1):
    if Q0 + Q1 < 1e-3:
        return
    from gradcontact.assembly import ProfilePoly

    g1, _ = profile_rhs(ProfilePoly(Q0, Q1), b, a1, 4)
    for i in range(4):
        ref = quad_coefficient("g", (2 * i,), {"alpha1": a1, "b": b, "Q0": Q0, "Q1": Q1})
        assert abs(g1[i] - ref) <= 1e-10 * max(abs(g1[0]), 1.0)


def test_smooth_weighted_integral():
    # int (1 - t^2)^(-1/2) dt = pi
    assert weighted_integral(lambda t: 1.0, -0.5) == pytest.approx(math.pi, rel=1e-13)
    # int (1 - t^2)^(1/2) |t - 0.3|^(-0.5) dt against mpmath
    import mpmath

    with mpmath.workdps(30):
        s = mpmath.mpf(0.3)
        ref = mpmath.quad(lambda t: mpmath.sqrt(1 - t * t) * abs(t - s) ** -0.5, [-1, s, 1])
    assert weighted_integral(lambda t: 1.0, 0.5, singular=0.3, alpha=0.5) == pytest.approx(float(ref), rel=1e-11)


def test_shortfall_reported():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # scipy's own integration warning
        warnings.simplefilter("always", QuadratureShortfallWarning)
        with pytest.warns(QuadratureShortfallWarning):
            weighted_integral(lambda t: math.sin(400 * t), 0.0, limit=3)


def test_unknown_kind():
    with pytest.raises(ValueError):
        quad_coefficient("Z", (0,), {})
