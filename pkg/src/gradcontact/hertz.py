"""Hertzian contact: the contact half-length from the endpoint condition.

For distinct exponents ``b`` is the root of the bracketed pressure series at
t = 1. For equal exponents the system decouples; the quadratic profile then
has a closed form and any polynomial profile reduces to a scalar equation.
"""

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .assembly import (
    SpectralCoeffs,
    check_truncation,
    endpoint_series,
    integrate_load,
    material_theta,
    pressure_at,
    profile_rhs,
    rigid_displacement,
    solve_system,
    truncation_tail,
)
from .kernel import beta_n, gamma0, h_n
from .specfun import gamma_ratio

__all__ = [
    "ContactSolution",
    "Diagnostics",
    "BracketError",
    "MultipleRootsWarning",
    "endpoint_residual",
    "closed_form_b",
    "initial_guess",
    "find_bracket",
    "solve_hertz",
    "solve_equal_exponent",
    "solve_equal_exponent_general",
    "pressure_closed_form",
]

EXPANSION_STEPS = 10
SCAN_POINTS = 32


class BracketError(RuntimeError):
    """No sign change was found within the expansion limit."""


class MultipleRootsWarning(UserWarning):
    """The bracket scan found more than one sign change."""


@dataclass
class Diagnostics:
    endpoint_residual: float = float("nan")
    load_error: float = float("nan")
    truncation_tail: float = float("nan")
    cond: float = float("nan")
    sign_changes: list = field(default_factory=list)
    b_star: float = None


@dataclass
class ContactSolution:
    """Solved contact: half-length, rigid approach and pressure coefficients."""

    problem: object
    b: float
    delta: float
    coeffs: SpectralCoeffs
    model: str = "hertz"
    branch: str = "spectral"
    diagnostics: Diagnostics = field(default_factory=Diagnostics)
    energy: object = None

    @property
    def phi(self):
        """Combined coefficients Phi^(1) + delta Phi^(2)."""
        return self.coeffs.combined(self.delta)

    def pressure(self, x):
        return pressure_at(self.coeffs, self.delta, x)

    def load(self):
        return integrate_load(self.coeffs, self.delta)


def endpoint_residual(problem, tables, b):
    """Bracketed pressure series at t = 1, with delta fixed by load balance."""
    coeffs = solve_system(problem, tables, b)
    delta = rigid_displacement(coeffs, problem.P, b)
    return endpoint_series(coeffs, delta)


def closed_form_b(alpha, theta_sum, P, Q0):
    """Hertz half-length for equal exponents and a parabolic gap."""
    num = gamma_ratio([2 + alpha / 2, (1 - alpha) / 2], []) * theta_sum * P
    return (num / (math.sqrt(math.pi) * Q0)) ** (1 / (alpha + 2))


def initial_guess(problem):
    """Closed-form half-length at the mean exponent, used to seed brackets."""
    abar = 0.5 * (problem.pair.alpha1 + problem.pair.alpha2)
    th = sum(
        material_theta(replace(body, alpha=abar))
        for body in (problem.body1, problem.body2)
    )
    prof = problem.profile
    Q = prof.Q0 if prof.Q0 > 0 else prof.Q1
    return closed_form_b(abar, th, problem.P, Q)


def _sign_changes(f, lo, hi, npts=SCAN_POINTS):
    grid = np.geomspace(lo, hi, npts)
    vals = np.array([f(x) for x in grid])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]
    return [(grid[i], grid[i + 1]) for i in idx], grid, vals


def find_bracket(f, guess, steps=EXPANSION_STEPS, upward_only=False):
    """Expand [guess/2, 2 guess] geometrically by 2 until f changes sign.

    With ``upward_only`` the lower end stays at ``guess``.
    """
    lo = guess if upward_only else guess / 2
    hi = 2 * guess
    flo, fhi = f(lo), f(hi)
    for _ in range(steps):
        if np.sign(flo) * np.sign(fhi) <= 0:
            return lo, hi
        if not upward_only:
            lo /= 2
            flo = f(lo)
        hi *= 2
        fhi = f(hi)
    if np.sign(flo) * np.sign(fhi) <= 0:
        return lo, hi
    raise BracketError(f"no sign change in [{lo:.3g}, {hi:.3g}]")


def bracketed_root(f, lo, hi, rtol, anchor):
    """Scan [lo, hi], warn on multiple sign changes, refine one root.

    Returns the root and the list of sign-change subintervals. When several
    exist the one closest to ``anchor`` is refined.
    """
    changes, _, _ = _sign_changes(f, lo, hi)
    if not changes:
        changes = [(lo, hi)]
    if len(changes) > 1:
        warnings.warn(
            f"{len(changes)} sign changes in [{lo:.4g}, {hi:.4g}]",
            MultipleRootsWarning,
            stacklevel=3,
        )
    a, c = min(changes, key=lambda ab: abs(math.log(math.sqrt(ab[0] * ab[1]) / anchor)))
    if f(a) == 0.0:
        return a, changes
    root = brentq(f, a, c, rtol=rtol, xtol=1e-300, maxiter=200)
    return root, changes


def _finish(problem, coeffs, delta, branch, changes=()):
    diag = Diagnostics(
        endpoint_residual=float(endpoint_series(coeffs, delta)),
        load_error=float(abs(integrate_load(coeffs, delta) - problem.P) / problem.P),
        truncation_tail=float(truncation_tail(coeffs, delta)),
        cond=float(coeffs.cond),
        sign_changes=[tuple(map(float, ab)) for ab in changes],
    )
    return ContactSolution(problem, coeffs.b, delta, coeffs, "hertz", branch, diag)


def solve_hertz(problem, tables=None):
    """Hertz solution by the spectral method for any exponent pair.

    Raises
    ------
    BracketError
        If no sign change of the endpoint residual is found.
    """
    tables = problem.tables() if tables is None else tables
    guess = initial_guess(problem)

    def f(b):
        return endpoint_residual(problem, tables, b)

    lo, hi = find_bracket(f, guess)
    b, changes = bracketed_root(f, lo, hi, problem.root_rtol, guess)
    coeffs = solve_system(problem, tables, b)
    delta = rigid_displacement(coeffs, problem.P, b)
    check_truncation(coeffs, delta)
    return _finish(problem, coeffs, delta, "spectral", changes)


def _equal_coeffs(problem, b, delta=None):
    """Decoupled coefficients for equal exponents: Phi = d / (1 + gamma)."""
    a = problem.pair.alpha1
    N = problem.N
    th1, th2 = problem.thetas
    A1 = th1 * b ** (1 - a) / a
    A2 = th2 * b ** (1 - a) / a
    idx = 2 * np.arange(N)
    bh = np.array([beta_n(a, n) * h_n(a, n) for n in idx])
    g1, g2 = profile_rhs(problem.profile, b, a, N)
    A = A1 + A2
    coeffs = SpectralCoeffs(g1 / (A * bh), g2 / (A * bh), float(b), a, A1, A2, 1.0)
    if delta is None:
        # load balance in the form -g0 + pi A P / (b cos)
        delta = (-g1[0] + math.pi * A * problem.P / (b * math.cos(math.pi * a / 2))) / gamma0(a)
    return coeffs, delta


def _require_equal(problem):
    if not problem.equal_exponents:
        raise ValueError("equal-exponent branch needs alpha1 == alpha2")


def solve_equal_exponent(problem):
    """Closed-form Hertz solution for equal exponents and f = Q0 x^2."""
    _require_equal(problem)
    if not problem.profile.quadratic:
        raise ValueError("closed form needs a parabolic profile (Q1 = 0)")
    a = problem.pair.alpha1
    th = sum(problem.thetas)
    Q0 = problem.profile.Q0
    b = closed_form_b(a, th, problem.P, Q0)
    A = th * b ** (1 - a) / a
    delta = Q0 * b**2 / (a + 2) + math.pi * A * problem.P / (
        gamma0(a) * b * math.cos(math.pi * a / 2)
    )
    coeffs, _ = _equal_coeffs(problem, b, delta)
    return _finish(problem, coeffs, delta, "closed-form")


def equal_root_function(problem, b):
    """Left side of the scalar root condition for equal exponents."""
    a = problem.pair.alpha1
    coeffs, delta = _equal_coeffs(problem, b)
    g1 = profile_rhs(problem.profile, b, a, 3)[0]
    total = delta * gamma0(a) * a / (2 * math.gamma(a))
    for i, g in enumerate(g1):
        n = 2 * i
        if g:
            total += g * (n + a / 2) * gamma_ratio([n + 1], [a + n])
    return total


def solve_equal_exponent_general(problem):
    """Equal exponents with any polynomial profile, by a scalar root search."""
    _require_equal(problem)
    guess = initial_guess(problem)

    def f(b):
        return equal_root_function(problem, b)

    lo, hi = find_bracket(f, guess)
    b, changes = bracketed_root(f, lo, hi, problem.root_rtol, guess)
    coeffs, delta = _equal_coeffs(problem, b)
    return _finish(problem, coeffs, delta, "equal-exponent", changes)


def pressure_closed_form(problem, x, b=None):
    """Pressure for equal exponents and f = Q0 x^2 at any half-length b.

    With ``b`` omitted the Hertz half-length is used, where the bracket
    reduces to a single power of (1 - x^2/b^2).
    """
    _require_equal(problem)
    a = problem.pair.alpha1
    th = sum(problem.thetas)
    Q0 = problem.profile.Q0
    P = problem.P
    x = np.asarray(x, dtype=float)
    if b is None:
        b = closed_form_b(a, th, P, Q0)
        pref = P * gamma_ratio([a / 2 + 2], [(a + 3) / 2]) / (math.sqrt(math.pi) * b)
        return pref * (1 - x**2 / b**2) ** ((a + 1) / 2)
    A = th * b ** (1 - a) / a
    bracket = P / (gamma0(a) * b) + 2 * b**2 * Q0 * math.cos(math.pi * a / 2) / (
        math.pi * A * a * (a + 1)
    ) * (1 / (a + 2) - x**2 / b**2)
    with np.errstate(divide="ignore"):
        return (1 - x**2 / b**2) ** ((a - 1) / 2) * bracket
