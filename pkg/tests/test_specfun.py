import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_gegenbauer

from gradcontact.specfun import (
    HypergeometricConvergenceError,
    gamma_ratio,
    gauss_2f1,
    gegenbauer,
    gegenbauer_all,
    log_abs_pochhammer,
    pochhammer,
)


@pytest.mark.parametrize("a, n, expected", [(0.7, 0, 1.0), (2, 3, 24.0), (0.5, 2, 0.75)])
def test_pochhammer_values(a, n, expected):
    assert pochhammer(a, n) == pytest.approx(expected, rel=1e-15)


@given(
    a=st.floats(-6, 6, allow_nan=False),
    m=st.integers(0, 12),
    n=st.integers(0, 12),
)
def test_pochhammer_splits(a, m, n):
    lhs = pochhammer(a, m + n)
    rhs = pochhammer(a, m) * pochhammer(a + m, n)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12 * max(1.0, abs(rhs)))


def test_log_pochhammer_matches_mpmath():
    for a, n in [(0.35, 40), (1.7, 120), (-2.5, 7)]:
        exact = mpmath.rf(a, n)
        logabs, sign = log_abs_pochhammer(a, n)
        assert logabs == pytest.approx(float(mpmath.log(abs(exact))), rel=1e-12)
        assert sign == (1.0 if exact > 0 else -1.0)


def test_gamma_ratio_large_arguments():
    # plain gamma overflows here
    val = gamma_ratio([180.5, 0.5], [181.0])
    ref = float(mpmath.gamma(180.5) * mpmath.gamma(0.5) / mpmath.gamma(181))
    assert val == pytest.approx(ref, rel=1e-12)


def test_gegenbauer_low_degree():
    assert gegenbauer(0, 0.3, 0.77) == 1.0
    assert gegenbauer(1, 0.25, 0.5) == pytest.approx(0.25, rel=1e-15)
    assert gegenbauer(2, 0.25, 1.0) == pytest.approx(0.375, rel=1e-15)


@given(
    n=st.integers(2, 64),
    lam=st.floats(0.05, 0.5),
    t=st.floats(-1, 1),
)
def test_gegenbauer_recurrence(n, lam, t):
    c = gegenbauer_all(n, lam, t)
    resid = n * c[n] - (2 * (n + lam - 1) * t * c[n - 1] - (n + 2 * lam - 2) * c[n - 2])
    scale = n * (abs(c[n]) + abs(c[n - 1]) + abs(c[n - 2])) + 1.0
    assert abs(resid) <= 1e-13 * scale


@given(n=st.integers(0, 40), lam=st.floats(0.05, 0.5), t=st.floats(0, 1))
def test_gegenbauer_parity(n, lam, t):
    a, b = gegenbauer(n, lam, -t), gegenbauer(n, lam, t)
    assert abs(a - (-1) ** n * b) <= 1e-13 * max(abs(b), 1e-300) or a == (-1) ** n * b


def test_gegenbauer_against_scipy():
    t = np.linspace(-1, 1, 41)
    for n in (3, 10, 25):
        np.testing.assert_allclose(gegenbauer(n, 0.35, t), eval_gegenbauer(n, 0.35, t), rtol=1e-11, atol=1e-13)


def test_2f1_trivial_values():
    assert gauss_2f1(0.3, 1.7, 2.2, 0.0) == 1.0
    assert gauss_2f1(1, 1, 2, 0.5) == pytest.approx(2 * math.log(2), rel=1e-14)
    assert gauss_2f1(-2, 1, 1, 0.3) == pytest.approx(0.49, rel=1e-14)


def test_2f1_terminating_any_argument():
    # F(-3, b; c; z) is a cubic in z, valid for any z
    a, b, c, z = -3, 0.4, 1.3, -7.5
    ref = float(mpmath.hyp2f1(a, b, c, z))
    assert gauss_2f1(a, b, c, z) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("z", [-0.9, -0.6, -0.3, 0.2, 0.45, 0.7, 0.95])
def test_2f1_matches_mpmath(z):
    a, b, c = 0.35, 1.15, 1.6
    assert gauss_2f1(a, b, c, z) == pytest.approx(float(mpmath.hyp2f1(a, b, c, z)), rel=1e-12)


@given(z=st.floats(-0.49, 0.49), a=st.floats(0.05, 2), b=st.floats(0.05, 2), c=st.floats(0.6, 3))
@settings(max_examples=60)
def test_2f1_transform_agrees(z, a, b, c):
    direct = gauss_2f1(a, b, c, z, transform=False)
    mapped = gauss_2f1(a, b, c, z, transform=True)
    assert direct == pytest.approx(mapped, rel=1e-10)


def test_2f1_nonconvergence_signalled():
    with pytest.raises((HypergeometricConvergenceError, ValueError)):
        gauss_2f1(0.5, 0.5, 1.5, 1.5)
