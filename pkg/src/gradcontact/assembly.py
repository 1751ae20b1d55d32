"""Problem definition, right-hand sides and the truncated spectral system.

For a trial half-length ``b`` the two auxiliary equations (right-hand sides
-f(bt) and 1) are solved in the Gegenbauer basis; the rigid displacement
then follows from load balance and the pressure from the combined
coefficients.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .kernel import (
    DEFAULT_TAIL_TOL,
    ExponentPair,
    beta_n,
    build_tables,
    gamma0,
    h_n,
)
from .specfun import gamma_ratio, gegenbauer_all

__all__ = [
    "MaterialHalfPlane",
    "ProfilePoly",
    "ContactProblem",
    "SpectralCoeffs",
    "IllConditionedSystemError",
    "TruncationWarning",
    "material_theta",
    "profile_rhs",
    "profile_gegenbauer_coeffs",
    "solve_system",
    "rigid_displacement",
    "pressure_at",
    "endpoint_series",
    "truncation_tail",
]

DEFAULT_N = 16
COND_LIMIT = 1e12
TRUNCATION_LIMIT = 1e-6


class IllConditionedSystemError(np.linalg.LinAlgError):
    """The truncated system is singular or too ill-conditioned to trust."""


class TruncationWarning(UserWarning):
    """The last retained spectral coefficient is not small enough."""


@dataclass(frozen=True)
class MaterialHalfPlane:
    """A graded body with Young modulus e * depth**alpha.

    Parameters
    ----------
    e : float
        Modulus factor.
    alpha : float
        Grading exponent in (0, 1).
    nu : float
        Poisson ratio in (0, 0.5].
    """

    e: float
    alpha: float
    nu: float = 0.3

    def __post_init__(self):
        if self.e <= 0:
            raise ValueError(f"modulus factor must be positive, got {self.e}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"exponent must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.nu <= 0.5:
            raise ValueError(f"Poisson ratio must lie in (0, 0.5], got {self.nu}")
        if self.q2 <= 0:
            raise ValueError("q^2 must be positive")

    @property
    def q2(self):
        a, nu = self.alpha, self.nu
        return (1 + a) * (1 - a * nu / (1 - nu))

    @property
    def q(self):
        return math.sqrt(self.q2)

    @property
    def C(self):
        a, q = self.alpha, self.q
        return (
            2 ** (a + 1) / math.pi
            * gamma_ratio([a / 2 - q / 2 + 1.5, a / 2 + q / 2 + 1.5], [a + 2])
        )

    @property
    def theta(self):
        return material_theta(self)


def material_theta(body):
    """Compliance constant theta of a graded half-plane (Rostovtsev relation)."""
    a, nu, q = body.alpha, body.nu, body.q
    return body.C * (1 - nu**2) * q * math.sin(math.pi * q / 2) / ((a + 1) * body.e)


@dataclass(frozen=True)
class ProfilePoly:
    """Combined gap profile f(x) = Q0 x^2 + Q1 x^4."""

    Q0: float = 1.0
    Q1: float = 0.0

    def __post_init__(self):
        if self.Q0 < 0 or self.Q1 < 0 or self.Q0 + self.Q1 <= 0:
            raise ValueError("need Q0, Q1 >= 0 with Q0 + Q1 > 0")

    @property
    def quadratic(self):
        return self.Q1 == 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.Q0 * x**2 + self.Q1 * x**4


@dataclass(frozen=True)
class ContactProblem:
    """Two graded bodies pressed together by a resultant force ``P``.

    The bodies are stored with ``body1.alpha >= body2.alpha``; if the
    input order was reversed they are swapped and ``swapped`` is set.
    """

    body1: MaterialHalfPlane
    body2: MaterialHalfPlane
    profile: ProfilePoly = field(default_factory=ProfilePoly)
    P: float = 1.0
    model: str = "hertz"
    gamma_s: float = 0.0
    N: int = DEFAULT_N
    tail_tol: float = DEFAULT_TAIL_TOL
    eps: float = 1e-4
    root_rtol: float = 1e-10
    swapped: bool = False

    def __post_init__(self):
        if self.P <= 0:
            raise ValueError("resultant force P must be positive")
        if self.model not in ("hertz", "jkr"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.gamma_s < 0:
            raise ValueError("gamma_s must be nonnegative")
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.body1.alpha < self.body2.alpha:
            b1, b2 = self.body1, self.body2
            object.__setattr__(self, "body1", b2)
            object.__setattr__(self, "body2", b1)
            object.__setattr__(self, "swapped", not self.swapped)

    @property
    def pair(self):
        return ExponentPair(self.body1.alpha, self.body2.alpha)

    @property
    def equal_exponents(self):
        return self.pair.equal

    @property
    def thetas(self):
        return material_theta(self.body1), material_theta(self.body2)

    def tables(self):
        return build_tables(self.pair, self.N, self.tail_tol)

    def stored_body(self, user_body):
        """Map a body number in the caller's original order to storage."""
        if user_body not in (1, 2):
            raise ValueError("body must be 1 or 2")
        return 3 - user_body if self.swapped else user_body


@dataclass(frozen=True)
class SpectralCoeffs:
    """Even-index coefficients of the two auxiliary solutions at fixed ``b``.

    ``phi1[i]`` and ``phi2[i]`` multiply C_{2i}^{alpha1/2}.
    """

    phi1: np.ndarray
    phi2: np.ndarray
    b: float
    alpha1: float
    A1: float
    A2: float
    cond: float = 1.0

    @property
    def coupling(self):
        return self.A2 / self.A1

    def combined(self, delta):
        return self.phi1 + delta * self.phi2


def profile_gegenbauer_coeffs(profile, b, alpha1):
    """Coefficients a_0, a_2, a_4 of f(bt) in C_n^{alpha1/2}(t)."""
    a = alpha1
    Q0, Q1 = profile.Q0, profile.Q1
    a4 = 24 * Q1 * b**4 / (a * (a + 2) * (a + 4) * (a + 6))
    a2 = 2 * b**2 / (a * (a + 2)) * (Q0 + 6 * Q1 * b**2 / (a + 6))
    a0 = b**2 / (a + 2) * (Q0 + 3 * Q1 * b**2 / (a + 4))
    return np.array([a0, a2, a4])


def profile_rhs(profile, b, alpha1, N):
    """Projected right-hand sides (g1, g2) on the even indices 0..2(N-1)."""
    if b <= 0:
        raise ValueError("b must be positive")
    a = alpha1
    Q0, Q1 = profile.Q0, profile.Q1
    sqpi = math.sqrt(math.pi)
    g0c = gamma0(a)
    g1 = np.zeros(N)
    g2 = np.zeros(N)
    g2[0] = g0c
    g1[0] = -b**2 * g0c / (a + 2) * (Q0 + 3 * Q1 * b**2 / (a + 4))
    if N > 1:
        g1[1] = (
            -b**2 * sqpi * a * gamma_ratio([(a + 3) / 2], [a / 2 + 3]) / 2
            * (Q0 + 6 * Q1 * b**2 / (a + 6))
        )
    if N > 2 and Q1:
        g1[2] = (
            -b**4 * sqpi * a * (a + 2) * gamma_ratio([(a + 5) / 2], [a / 2 + 5]) / 4 * Q1
        )
    return g1, g2


def solve_system(problem, tables, b):
    """Solve (I + gamma R) Phi = d for both right-hand sides at half-length b.

    Raises
    ------
    IllConditionedSystemError
        If the condition number exceeds ``COND_LIMIT``.
    """
    if b <= 0:
        raise ValueError("b must be positive")
    pair = problem.pair
    if tables.exponents != pair or tables.N != problem.N:
        raise ValueError("tables were built for a different exponent pair or N")
    a1, a2 = pair.alpha1, pair.alpha2
    th1, th2 = problem.thetas
    A1 = th1 * b ** (1 - a1) / a1
    A2 = th2 * b ** (1 - a2) / a2
    g1, g2 = profile_rhs(problem.profile, b, a1, tables.N)
    scale = A1 * tables.betas * tables.hs
    d1, d2 = g1 / scale, g2 / scale
    if pair.equal:
        phi1 = d1 / (1 + A2 / A1)
        phi2 = d2 / (1 + A2 / A1)
        cond = 1.0
    else:
        M = np.eye(tables.N) + (A2 / A1) * tables.R
        cond = float(np.linalg.cond(M))
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise IllConditionedSystemError(f"condition number {cond:.3g} at b={b}")
        sol = np.linalg.solve(M, np.column_stack([d1, d2]))
        phi1, phi2 = sol[:, 0], sol[:, 1]
    return SpectralCoeffs(phi1, phi2, float(b), a1, A1, A2, cond)


def rigid_displacement(coeffs, P, b=None):
    """Rigid approach delta from load balance."""
    b = coeffs.b if b is None else b
    g0c = gamma0(coeffs.alpha1)
    if coeffs.phi2[0] == 0.0:
        raise ZeroDivisionError("degenerate system: Phi_0^(2) = 0")
    return (P / b - coeffs.phi1[0] * g0c) / (coeffs.phi2[0] * g0c)


def _edge_values(alpha1, N):
    """C_{2n}^{alpha1/2}(1) = (alpha1)_{2n} / (2n)! for n < N."""
    vals = np.empty(N)
    v = 1.0
    for i in range(N):
        if i:
            k = 2 * i
            v *= (alpha1 + k - 2) * (alpha1 + k - 1) / ((k - 1) * k)
        vals[i] = v
    return vals


def endpoint_series(coeffs, delta):
    """Bracketed series of the pressure at t = 1 (zero for Hertz contact)."""
    c = coeffs.combined(delta)
    return float(_edge_values(coeffs.alpha1, len(c)) @ c)


def truncation_tail(coeffs, delta):
    """|Phi_{2(N-1)}| / |Phi_0| for the combined coefficients."""
    c = coeffs.combined(delta)
    return abs(c[-1]) / abs(c[0]) if len(c) > 1 else 0.0


def check_truncation(coeffs, delta, limit=TRUNCATION_LIMIT):
    ratio = truncation_tail(coeffs, delta)
    if ratio > limit:
        warnings.warn(
            f"last retained coefficient ratio {ratio:.2e} exceeds {limit:.0e}; "
            "consider a larger N",
            TruncationWarning,
            stacklevel=3,
        )
    return ratio


def pressure_at(coeffs, delta, x, endpoint_tol=1e-8):
    """Contact pressure p(x) on [-b, b].

    At |x| = b the weight is singular; the limit is 0 when the bracketed
    series vanishes there (to ``endpoint_tol`` relative to the sum of
    absolute terms) and signed infinity otherwise.
    """
    x = np.asarray(x, dtype=float)
    b = coeffs.b
    t = x / b
    if np.any(np.abs(t) > 1 + 1e-12):
        raise ValueError("pressure is only defined on [-b, b]")
    t = np.clip(t, -1.0, 1.0)
    a1 = coeffs.alpha1
    c = coeffs.combined(delta)
    N = len(c)
    polys = gegenbauer_all(2 * (N - 1), a1 / 2, t)[::2]
    series = np.tensordot(c, polys, axes=1)
    interior = np.abs(t) < 1.0
    with np.errstate(divide="ignore"):
        weight = np.where(interior, (1 - t**2) ** ((a1 - 1) / 2), np.inf)
    out = np.where(interior, weight * series, 0.0)
    if not np.all(interior):
        edge = _edge_values(a1, N)
        s1 = float(edge @ c)
        scale = float(np.abs(edge * c).sum())
        limit = 0.0 if abs(s1) <= endpoint_tol * scale else math.copysign(math.inf, s1)
        out = np.where(interior, out, limit)
    return out if out.ndim else float(out)


def integrate_load(coeffs, delta):
    """Integral of p over (-b, b), exact by orthogonality."""
    return coeffs.b * gamma0(coeffs.alpha1) * coeffs.combined(delta)[0]


def beta_h(alpha, n):
    return beta_n(alpha, n) * h_n(alpha, n)
