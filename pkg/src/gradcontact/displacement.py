"""Surface normal displacements outside the contact zone.

The building block is the weighted potential

    I_n(t; a_j) = int_{-1}^{1} (1 - tau^2)^((a1-1)/2) C_n^{a1/2}(tau) |tau - t|^(-a_j) dtau

for |t| > 1, evaluated with closed hypergeometric formulas in
zeta = -(t + 1)/2: one form for 0 < zeta < 1 and another for zeta > 1.
"""

import math

import numpy as np

from .hertz import _require_equal
from .kernel import gamma0
from .specfun import gamma_ratio, gauss_2f1, pochhammer

__all__ = [
    "regime",
    "I_n",
    "I_tilde_equal",
    "surface_displacement",
    "displacement_series",
    "displacement_equal_closed",
    "displacement_gauss_check",
]

# within this distance of zeta = 1 the hypergeometric sums are transformed
SEAM_BAND = 0.1
# near-field terms may cancel for large n; beyond this ratio of
# (|first| + |second|) / |sum| the continued far-field form is used instead
CANCELLATION_LIMIT = 100.0


def regime(t):
    """'near' for 1 < |t| < 3, 'far' for |t| >= 3."""
    if abs(t) <= 1:
        raise ValueError(f"point t={t} is not outside the contact zone")
    return "near" if abs(t) < 3 else "far"


def _f(a, b, c, z, zeta):
    return gauss_2f1(a, b, c, z, transform=abs(zeta - 1) < SEAM_BAND)


def _I_near_parts(zeta, n, aj, a1):
    pre = pochhammer(a1, n) * math.gamma((a1 + 1) / 2) / (
        (-1) ** n * 2 ** (aj - a1) * math.factorial(n)
    )
    first = (
        pochhammer(aj, n)
        * gamma_ratio([(a1 + 1) / 2 - aj], [a1 - aj + n + 1])
        * _f(aj - a1 - n, aj + n, aj + (1 - a1) / 2, -zeta, zeta)
    )
    second = (
        gamma_ratio([aj - (a1 + 1) / 2], [aj])
        * zeta ** ((a1 + 1) / 2 - aj)
        * _f((1 + a1) / 2 + n, (1 - a1) / 2 - n, (3 + a1) / 2 - aj, -zeta, zeta)
    )
    return pre * first, pre * second


def _I_near(zeta, n, aj, a1):
    first, second = _I_near_parts(zeta, n, aj, a1)
    return first + second


def _I_far(zeta, n, aj, a1, transform=None):
    pre = (
        (-1) ** n * math.sqrt(math.pi) * pochhammer(a1, n) * pochhammer(aj, n)
        * gamma_ratio([(a1 + 1) / 2], [a1 / 2 + n + 1])
        / (2 ** (aj + 2 * n) * math.factorial(n) * zeta ** (aj + n))
    )
    if transform is None:
        transform = abs(zeta - 1) < SEAM_BAND
    return pre * gauss_2f1(aj + n, (a1 + 1) / 2 + n, a1 + 2 * n + 1, -1 / zeta, transform)


def I_n(t, n, alpha_j, alpha1, method="auto"):
    """Weighted power potential of C_n^{alpha1/2} at an exterior point t.

    Parameters
    ----------
    t : float
        Normalized coordinate with |t| > 1. For t > 1 the reflection
        I_n(t) = (-1)^n I_n(-t) is used.
    n : int
    alpha_j, alpha1 : float
        Kernel exponent and weight exponent.
    method : {"auto", "residue", "continued"}
        "residue" uses the near-field sum for 1 < |t| < 3 and the
        far-field sum beyond. "continued" uses the far-field sum, mapped by
        z -> z/(z-1), for every |t| > 1; it is free of cancellation but
        converges slowly as |t| -> 1. "auto" takes the residue form unless
        its two terms cancel by more than ``CANCELLATION_LIMIT``.
    """
    regime(t)
    sign = 1.0
    if t > 1:
        t = -t
        sign = (-1.0) ** n
    zeta = -(t + 1) / 2
    if method == "continued":
        return sign * _I_far(zeta, n, alpha_j, alpha1, transform=zeta < 1 or None)
    if zeta >= 1:
        return sign * _I_far(zeta, n, alpha_j, alpha1)
    first, second = _I_near_parts(zeta, n, alpha_j, alpha1)
    total = first + second
    if method == "auto" and abs(first) + abs(second) > CANCELLATION_LIMIT * abs(total):
        return sign * _I_far(zeta, n, alpha_j, alpha1, transform=True)
    return sign * total


def I_tilde_equal(t, alpha):
    """Scaled potentials (I_0 / alpha, I_2 / alpha) for equal exponents.

    Uses the specialised two-term formulas for 1 < |t| < 3 and the general
    far-field form otherwise.
    """
    if regime(t) == "far":
        return I_n(t, 0, alpha, alpha) / alpha, I_n(t, 2, alpha, alpha) / alpha
    zeta = (abs(t) - 1) / 2
    a = alpha
    c = math.cos(math.pi * a / 2)
    k = gamma_ratio([(a + 1) / 2], [a + 1, (3 - a) / 2]) * zeta ** ((1 - a) / 2)
    i0 = math.pi / c * (1 / a - k * _f((1 - a) / 2, (1 + a) / 2, (3 - a) / 2, -zeta, zeta))
    i2 = math.pi * a * (a + 1) / (2 * c) * (
        (a + 1) / 2 * gauss_2f1(-2, a + 2, (a + 1) / 2, -zeta)
        - k * _f(-(3 + a) / 2, (5 + a) / 2, (3 - a) / 2, -zeta, zeta)
    )
    return i0, i2


def _body_constants(solution, body):
    problem = solution.problem
    if body not in (1, 2):
        raise ValueError("body must be 1 or 2")
    mat = problem.body1 if body == 1 else problem.body2
    A = solution.coeffs.A1 if body == 1 else solution.coeffs.A2
    return mat, A


def _as_points(x, b):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) <= b):
        raise ValueError("displacement is evaluated only for |x| > b")
    return x


def displacement_series(solution, body, x):
    """v_j(x) = A_j sum_n Phi_2n I_2n(x/b; alpha_j) by the general formulas."""
    b = solution.b
    xs = _as_points(x, b)
    mat, A = _body_constants(solution, body)
    c = solution.phi
    a1 = solution.coeffs.alpha1
    out = np.array([
        A * sum(ci * I_n(xi / b, 2 * i, mat.alpha, a1) for i, ci in enumerate(c))
        for xi in xs
    ])
    return out if np.ndim(x) else float(out[0])


def displacement_equal_closed(solution, body, x):
    """Two-term displacement for equal exponents and f = Q0 x^2."""
    problem = solution.problem
    _require_equal(problem)
    if not problem.profile.quadratic:
        raise ValueError("two-term form needs a parabolic profile")
    b = solution.b
    xs = _as_points(x, b)
    a = problem.pair.alpha1
    th = problem.thetas[body - 1]
    th_sum = sum(problem.thetas)
    Q0 = problem.profile.Q0
    phi0 = problem.P / (b * gamma0(a))
    phi2 = -4 * b ** (a + 1) * Q0 * math.cos(math.pi * a / 2) / (
        math.pi * a * (a + 1) * (a + 2) * th_sum
    )
    vals = []
    for xi in xs:
        i0, i2 = I_tilde_equal(xi / b, a)
        vals.append(th * b ** (1 - a) * (phi0 * i0 + phi2 * i2))
    out = np.array(vals)
    return out if np.ndim(x) else float(out[0])


def surface_displacement(solution, body, x):
    """Normal displacement v_j of body ``body`` (1 or 2, stored order) at |x| > b.

    Positive values move the surface toward the other body; the vertical
    surface displacement of the lower body is -v_2.
    """
    problem = solution.problem
    if (
        solution.branch == "closed-form"
        and problem.equal_exponents
        and problem.profile.quadratic
    ):
        return displacement_equal_closed(solution, body, x)
    return displacement_series(solution, body, x)


def displacement_gauss_check(solution, body, x, N_quad=400):
    """Chebyshev-node quadrature of v_j, for cross-checking."""
    b = solution.b
    xs = _as_points(x, b)
    mat, A = _body_constants(solution, body)
    i = np.arange(1, N_quad + 1)
    ang = (2 * i - 1) * math.pi / (2 * N_quad)
    nodes = np.cos(ang)
    p = solution.pressure(b * nodes)
    out = np.array([
        math.pi * A / N_quad * np.sum(p * np.sin(ang) / np.abs(xi / b - nodes) ** mat.alpha)
        for xi in xs
    ])
    return out if np.ndim(x) else float(out[0])
