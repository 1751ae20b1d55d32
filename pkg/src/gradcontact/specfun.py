"""Special functions used throughout the solver.

Pochhammer symbols, gamma-function ratios, Gegenbauer polynomials and the
Gauss hypergeometric function, restricted to real arguments.
"""

import math

import numpy as np
from scipy.special import gammaln, gammasgn

__all__ = [
    "pochhammer",
    "log_abs_pochhammer",
    "gamma_ratio",
    "gegenbauer",
    "gegenbauer_all",
    "gauss_2f1",
    "HypergeometricConvergenceError",
]

SERIES_TOL = 1e-15
SERIES_CAP = 10_000
# z beyond this magnitude (z < 0 side) is mapped through z -> z/(z-1)
DIRECT_RADIUS = 0.5


class HypergeometricConvergenceError(ArithmeticError):
    """Raised when a hypergeometric series fails to converge."""


def pochhammer(a, n):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1.

    Evaluated as a finite product, so it is finite for every real base,
    including nonpositive integers.
    """
    n = int(n)
    if n < 0:
        raise ValueError("pochhammer count must be nonnegative")
    result = 1.0
    for i in range(n):
        result *= a + i
    return result


def log_abs_pochhammer(a, n):
    """Return (log|(a)_n|, sign) for large counts without overflow.

    Only valid when none of a, a+1, ..., a+n-1 is zero.
    """
    if n == 0:
        return 0.0, 1.0
    if a > 0:
        return float(gammaln(a + n) - gammaln(a)), 1.0
    return (
        float(gammaln(a + n) - gammaln(a)),
        float(gammasgn(a + n) * gammasgn(a)),
    )


def gamma_ratio(num, den):
    """Product of Gamma(x) for x in num divided by product over den.

    Computed as a log-gamma difference so moderately large arguments do
    not overflow.
    """
    log_val = 0.0
    sign = 1.0
    for x in num:
        log_val += gammaln(x)
        sign *= gammasgn(x)
    for x in den:
        log_val -= gammaln(x)
        sign *= gammasgn(x)
    return float(sign * math.exp(log_val))


def gegenbauer(n, lam, t):
    """Gegenbauer polynomial C_n^lam(t) via the three-term recurrence.

    Accepts scalar or array ``t``.
    """
    t = np.asarray(t, dtype=float)
    c_prev = np.ones_like(t)
    if n == 0:
        return c_prev if c_prev.ndim else float(c_prev)
    c_cur = 2.0 * lam * t
    for k in range(2, n + 1):
        c_prev, c_cur = c_cur, (
            2.0 * (k + lam - 1.0) * t * c_cur - (k + 2.0 * lam - 2.0) * c_prev
        ) / k
    return c_cur if c_cur.ndim else float(c_cur)


def gegenbauer_all(nmax, lam, t):
    """Values C_0^lam(t), ..., C_nmax^lam(t) stacked along the first axis."""
    t = np.asarray(t, dtype=float)
    out = np.empty((nmax + 1,) + t.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2.0 * lam * t
    for k in range(2, nmax + 1):
        out[k] = (
            2.0 * (k + lam - 1.0) * t * out[k - 1] - (k + 2.0 * lam - 2.0) * out[k - 2]
        ) / k
    return out


def _nonpositive_int(x):
    return x <= 0 and float(x).is_integer()


def _terminating_order(a, b):
    """Number of terms of a terminating series, or None."""
    orders = [-int(x) for x in (a, b) if _nonpositive_int(x)]
    return min(orders) if orders else None


def _series(a, b, c, z, nterms=None):
    term = 1.0
    total = 1.0
    if nterms is not None:
        for k in range(nterms):
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
            total += term
        return total
    for k in range(SERIES_CAP):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if term == 0.0 or abs(term) <= SERIES_TOL * abs(total):
            # a small term right after a near-cancelling factor is not enough
            ratio = abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2.0)) * z)
            if term == 0.0 or ratio < 1.0:
                return total
    raise HypergeometricConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) did not converge in {SERIES_CAP} terms"
    )


def gauss_2f1(a, b, c, z, transform=None):
    """Gauss hypergeometric function F(a, b; c; z) for real arguments.

    Parameters
    ----------
    a, b, c : float
        Parameters; ``c`` must not be a nonpositive integer unless the
        series terminates first.
    z : float
        Argument. Any real value is allowed for a terminating series,
        otherwise ``|z| <= 1``.
    transform : bool, optional
        Force (True) or forbid (False) the Pfaff transformation
        F(a,b;c;z) = (1-z)^(-b) F(b, c-a; c; z/(z-1)). By default it is
        applied for z < -0.5, where the direct series converges slowly.

    Raises
    ------
    HypergeometricConvergenceError
        If the series does not reach the term-ratio tolerance within the
        iteration cap.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    order = _terminating_order(a, b)
    if _nonpositive_int(c) and (order is None or order > -c):
        raise ValueError(f"2F1 undefined for c = {c}")
    if z == 0.0:
        return 1.0
    if order is not None and not transform:
        return _series(a, b, c, z, nterms=order)
    if transform is None:
        transform = z < -DIRECT_RADIUS
    if transform:
        if z >= 1.0:
            raise ValueError("transformation requires z < 1")
        w = z / (z - 1.0)
        inner = gauss_2f1(b, c - a, c, w, transform=False)
        return (1.0 - z) ** (-b) * inner
    if abs(z) > 1.0:
        raise ValueError(f"nonterminating 2F1 needs |z| <= 1, got {z}")
    if z == 1.0:
        if c - a - b <= 0:
            raise HypergeometricConvergenceError("2F1 diverges at z = 1")
        return gamma_ratio([c, c - a - b], [c - a, c - b])
    return _series(a, b, c, z)
