"""Adhesive (JKR) contact: the half-length minimizes U_e - 2 gamma_s b.

The rigid approach still comes from load balance, so the pressure keeps
endpoint singularities of order (alpha1 - 1)/2 and turns tensile near the
edges once gamma_s > 0.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .assembly import (
    check_truncation,
    profile_gegenbauer_coeffs,
    rigid_displacement,
    solve_system,
)
from .hertz import (
    _equal_coeffs,
    _finish,
    _require_equal,
    bracketed_root,
    find_bracket,
    solve_equal_exponent,
    solve_hertz,
)
from .kernel import gamma0, h_n
from .specfun import gamma_ratio, gegenbauer_all

__all__ = [
    "AdhesionParams",
    "EnergyReport",
    "energy_constants_equal",
    "strain_energy_equal",
    "stationarity_residual_equal",
    "quartic_limit_residual",
    "gibson_cubic_residual",
    "solve_jkr_equal",
    "strain_energy_general",
    "energy_from_coeffs",
    "solve_jkr_general",
    "tensile_onset",
    "epsilon_sensitivity",
]

ONSET_GRID = 400


@dataclass(frozen=True)
class AdhesionParams:
    """Work of adhesion gamma_s (surface energy half-density)."""

    gamma_s: float = 0.0

    def __post_init__(self):
        if self.gamma_s < 0:
            raise ValueError("gamma_s must be nonnegative")


@dataclass
class EnergyReport:
    b: float
    U_e: float
    U_total: float
    dU_db: float
    gamma_s: float = 0.0
    b_star: float = None


def _adhesion(problem, adhesion):
    if adhesion is None:
        return problem.gamma_s
    if isinstance(adhesion, AdhesionParams):
        return adhesion.gamma_s
    return AdhesionParams(float(adhesion)).gamma_s


def energy_constants_equal(problem):
    """Coefficients (a, c) of U_e = a b^-alpha + c b^(alpha+4)."""
    _require_equal(problem)
    alpha = problem.pair.alpha1
    th = sum(problem.thetas)
    P, Q0 = problem.P, problem.profile.Q0
    sqpi = math.sqrt(math.pi)
    gm = math.gamma((1 - alpha) / 2)
    a = P**2 * th * math.gamma(alpha / 2 + 1) * gm / (2 * alpha * sqpi)
    c = sqpi * Q0**2 / (2 * th * (alpha + 2) * gm * math.gamma(alpha / 2 + 3))
    return a, c


def strain_energy_equal(problem, b, gamma_s=None):
    """Two-term strain energy for equal exponents, f = Q0 x^2, exact slope."""
    if not problem.profile.quadratic:
        raise ValueError("two-term energy needs a parabolic profile")
    gs = _adhesion(problem, gamma_s)
    alpha = problem.pair.alpha1
    a, c = energy_constants_equal(problem)
    U = a * b**-alpha + c * b ** (alpha + 4)
    dU = -alpha * a * b ** (-alpha - 1) + (alpha + 4) * c * b ** (alpha + 3)
    return EnergyReport(b, U, U - 2 * gs * b, dU, gs)


def stationarity_residual_equal(problem, b, gamma_s=None):
    """Energy stationarity for equal exponents, multiplied through by b^(alpha+1)."""
    gs = _adhesion(problem, gamma_s)
    alpha = problem.pair.alpha1
    th = sum(problem.thetas)
    P, Q0 = problem.P, problem.profile.Q0
    sqpi = math.sqrt(math.pi)
    gm = math.gamma((1 - alpha) / 2)
    return (
        sqpi * Q0**2 * b ** (2 * alpha + 4) / (th * (alpha + 2) * gm * math.gamma(alpha / 2 + 2))
        - 2 * gs * b ** (alpha + 1)
        - P**2 * th * math.gamma(alpha / 2 + 1) * gm / (2 * sqpi)
    )


def quartic_limit_residual(theta_sum, P, Q0, gamma_s, b):
    """Homogeneous-material limit: a quartic in b (theta_sum of the limit bodies)."""
    return Q0**2 * b**4 / (2 * theta_sum) - 2 * gamma_s * b - P**2 * theta_sum / 2


def gibson_cubic_residual(e1, e2, P, Q0, gamma_s, b):
    """Incompressible linear-grading limit: a cubic in b^2."""
    s = 1 / e1 + 1 / e2
    return 8 / 27 * Q0**2 * b**6 - 2 * gamma_s * s * b**2 - 3 * P**2 * s**2 / 8


def tensile_onset(coeffs, delta, npts=ONSET_GRID):
    """Innermost zero of the pressure on (0, b), or None.

    Returns (b_star, number of sign changes on (0, b)).
    """
    c = coeffs.combined(delta)
    lam = coeffs.alpha1 / 2
    N = len(c)

    def series(t):
        return float(c @ gegenbauer_all(2 * (N - 1), lam, t)[::2])

    t = np.linspace(0.0, 1.0, npts)
    vals = c @ gegenbauer_all(2 * (N - 1), lam, t)[::2]
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if len(idx) == 0:
        return None, 0
    i = idx[0]
    root = brentq(series, t[i], t[i + 1], xtol=1e-14)
    return coeffs.b * root, len(idx)


def _jkr_finish(problem, coeffs, delta, branch, energy, changes=()):
    sol = _finish(problem, coeffs, delta, branch, changes)
    sol.model = "jkr"
    b_star, _ = tensile_onset(coeffs, delta) if energy.gamma_s > 0 else (None, 0)
    sol.diagnostics.b_star = b_star
    energy.b_star = b_star
    sol.energy = energy
    return sol


def solve_jkr_equal(problem, adhesion=None):
    """JKR solution for equal exponents and a parabolic gap."""
    _require_equal(problem)
    gs = _adhesion(problem, adhesion)
    b_h = solve_equal_exponent(problem).b
    if gs == 0.0:
        b, changes = b_h, []
    else:
        def f(b):
            return stationarity_residual_equal(problem, b, gs)

        lo, hi = find_bracket(f, b_h, upward_only=True)
        b, changes = bracketed_root(f, lo, hi, problem.root_rtol, b_h)
    coeffs, delta = _equal_coeffs(problem, b)
    energy = strain_energy_equal(problem, b, gs)
    return _jkr_finish(problem, coeffs, delta, "closed-form", energy, changes)


def energy_from_coeffs(problem, coeffs, delta):
    """Strain energy from solved coefficients.

    The parabolic case uses the two-term reduction; otherwise the
    orthogonality series over the profile's Gegenbauer coefficients.
    """
    b = coeffs.b
    a1 = coeffs.alpha1
    c = coeffs.combined(delta)
    g0c = gamma0(a1)
    if problem.profile.quadratic:
        Q0 = problem.profile.Q0
        c2 = c[1] if len(c) > 1 else 0.0
        return b * g0c / 2 * c[0] * (delta - b**2 * Q0 / (a1 + 2)) - (
            2 * b**3 * Q0 * math.sqrt(math.pi) * gamma_ratio([(a1 + 3) / 2], [a1 / 2])
            / ((a1 + 2) * (a1 + 4))
        ) * c2
    acoef = profile_gegenbauer_coeffs(problem.profile, b, a1)
    series = sum(
        c[i] * acoef[i] * h_n(a1, 2 * i) for i in range(min(len(c), len(acoef)))
    )
    return b * delta / 2 * c[0] * g0c - b / 2 * series


def _energy_at(problem, tables, b):
    coeffs = solve_system(problem, tables, b)
    delta = rigid_displacement(coeffs, problem.P, b)
    return energy_from_coeffs(problem, coeffs, delta)


def strain_energy_general(problem, tables, b, gamma_s=None, eps=None, mode="forward"):
    """Strain energy and its finite-difference slope at half-length b.

    ``mode="forward"`` is the difference used for the root condition;
    ``"central"`` is offered for error estimates.
    """
    gs = _adhesion(problem, gamma_s)
    eps = problem.eps if eps is None else eps
    U = _energy_at(problem, tables, b)
    if mode == "forward":
        dU = (_energy_at(problem, tables, b + eps) - U) / eps
    elif mode == "central":
        dU = (_energy_at(problem, tables, b + eps) - _energy_at(problem, tables, b - eps)) / (2 * eps)
    else:
        raise ValueError(f"unknown difference mode {mode!r}")
    return EnergyReport(b, U, U - 2 * gs * b, dU, gs)


def solve_jkr_general(problem, adhesion=None, tables=None, eps=None):
    """JKR solution for any exponent pair via the forward-difference condition."""
    gs = _adhesion(problem, adhesion)
    eps = problem.eps if eps is None else eps
    tables = problem.tables() if tables is None else tables
    b_h = solve_hertz(replace(problem, model="hertz"), tables).b

    def f(b):
        return (_energy_at(problem, tables, b + eps) - _energy_at(problem, tables, b)) / eps - 2 * gs

    lo, hi = find_bracket(f, b_h, upward_only=gs > 0)
    b, changes = bracketed_root(f, lo, hi, problem.root_rtol, b_h)
    coeffs = solve_system(problem, tables, b)
    delta = rigid_displacement(coeffs, problem.P, b)
    check_truncation(coeffs, delta)
    energy = strain_energy_general(problem, tables, b, gs, eps)
    return _jkr_finish(problem, coeffs, delta, "spectral", energy, changes)


def epsilon_sensitivity(problem, eps_values=(1e-3, 1e-4, 1e-5), adhesion=None):
    """Half-length for each finite-difference step, as a dict eps -> b."""
    tables = problem.tables()
    return {
        eps: solve_jkr_general(problem, adhesion, tables, eps).b for eps in eps_values
    }
