"""Spectral coefficients of the two power kernels in the Gegenbauer basis.

The pressure is expanded in C_n^{alpha1/2} with weight
(1 - t^2)^{(alpha1-1)/2}.  The stronger kernel |t-tau|^{-alpha1} is diagonal
in that basis (eigenvalues ``beta_n``); the weaker kernel couples modes
through the matrix ``L`` built from the cross-basis integrals ``H``.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.special import gammaln

from .specfun import gamma_ratio, log_abs_pochhammer, pochhammer

__all__ = [
    "ExponentPair",
    "KernelTables",
    "SeriesConvergenceError",
    "EQUAL_EXPONENT_THRESHOLD",
    "beta_n",
    "h_n",
    "delta_k",
    "gamma0",
    "H_coeff",
    "L_entry",
    "L_series_terms",
    "build_tables",
    "save_tables",
    "load_tables",
]

EQUAL_EXPONENT_THRESHOLD = 1e-8
DEFAULT_TAIL_TOL = 1e-13
DEFAULT_TERM_CAP = 100_000
_CHUNK = 1024
CACHE_VERSION = 1


class SeriesConvergenceError(ArithmeticError):
    """An L-series failed its tail criterion within the term cap."""


@dataclass(frozen=True)
class ExponentPair:
    """Grading exponents with ``0 < alpha2 <= alpha1 < 1``."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        a1, a2 = self.alpha1, self.alpha2
        if not (0.0 < a2 <= a1 < 1.0):
            raise ValueError(f"need 0 < alpha2 <= alpha1 < 1, got ({a1}, {a2})")

    @property
    def equal(self):
        return self.alpha1 - self.alpha2 < EQUAL_EXPONENT_THRESHOLD


def beta_n(alpha, n):
    """Eigenvalue of the power kernel on the weighted C_n^{alpha/2}."""
    log_p, _ = log_abs_pochhammer(alpha, n)
    return math.pi * math.exp(log_p - gammaln(n + 1)) / math.cos(math.pi * alpha / 2)


def h_n(alpha, n):
    """Squared norm of C_n^{alpha/2} under the weight (1-t^2)^{(alpha-1)/2}."""
    log_r = gammaln(n + alpha) - gammaln(n + 1) - 2.0 * gammaln(alpha / 2)
    return math.pi * 2.0 ** (1 - alpha) * math.exp(log_r) / (n + alpha / 2)


def delta_k(alpha2, k):
    """Ratio beta_k(alpha2) / h_k(alpha2), affine in k."""
    g = gamma_ratio([alpha2 / 2, (1 - alpha2) / 2], [])
    return g * (k + alpha2 / 2) / math.sqrt(math.pi)


def gamma0(alpha1):
    """Weighted integral of C_0: sqrt(pi) Gamma((a+1)/2) / Gamma(a/2 + 1)."""
    return math.sqrt(math.pi) * gamma_ratio([(alpha1 + 1) / 2], [alpha1 / 2 + 1])


def _ratio_poch(a, b, s):
    """(a)_s / (b)_s for b > 0, a > 0 without overflow."""
    if s < 64:
        return pochhammer(a, s) / pochhammer(b, s)
    return math.exp(gammaln(a + s) - gammaln(a) - gammaln(b + s) + gammaln(b))


def _poch_over_factorial(c, j):
    """(c)_j / j! for c in (-1/2, 0], j >= 0, in product form."""
    if j == 0:
        return 1.0
    if c == 0.0:
        return 0.0
    if j < 64:
        val = 1.0
        for i in range(j):
            val *= (c + i) / (i + 1)
        return val
    # (c)_j = c (c+1)_{j-1}, all factors of the tail positive
    return c * math.exp(gammaln(c + j) - gammaln(c + 1) - gammaln(j + 1))


def H_coeff(n, k, pair):
    """Cross-basis integral H_k^{(n)}.

    Integral over (-1, 1) of C_n^{alpha1/2} C_k^{alpha2/2} times
    (1-t^2)^{(alpha1-1)/2}.  Exactly zero for k < n and for odd k - n.
    """
    a1, a2 = pair.alpha1, pair.alpha2
    if k < n or (k - n) % 2:
        return 0.0
    j = (k - n) // 2
    s = (k + n) // 2
    if pair.equal:
        if j:
            return 0.0
        # diagonal value with alpha2 = alpha1
        return gamma0(a1) * math.exp(
            log_abs_pochhammer(a1, n)[0] - gammaln(n + 1)
        ) * (a1 / 2) / (a1 / 2 + n)
    c = (a2 - a1) / 2
    lead = gamma0(a1) * math.exp(log_abs_pochhammer(a1, n)[0] - gammaln(n + 1))
    return lead * _ratio_poch(a2 / 2, a1 / 2 + 1, s) * _poch_over_factorial(c, j)


def L_series_terms(n, m, pair, count):
    """First ``count`` terms of the l-series for L_{nm} (n - m even)."""
    return _terms_from(n, m, pair, 0, count, None)[0]


def _terms_from(n, m, pair, l0, count, first):
    """Terms l0 .. l0+count-1 of the L_{nm} series via product-form ratios.

    Returns (terms, next_term).  ``first`` is the l0-th term if known.
    """
    a1, a2 = pair.alpha1, pair.alpha2
    if n > m:
        n, m = m, n
    c = (a2 - a1) / 2
    if first is None:
        k0 = m + 2 * l0
        first = H_coeff(n, k0, pair) * H_coeff(m, k0, pair) * delta_k(a2, k0)
    ell = np.arange(l0, l0 + count, dtype=float)
    k = m + 2 * ell
    sn = (m + n) / 2 + ell
    jn = (m - n) / 2 + ell
    sm = m + ell
    jm = ell
    ratio = (
        (a2 / 2 + sn) / (a1 / 2 + 1 + sn) * (c + jn) / (jn + 1)
        * (a2 / 2 + sm) / (a1 / 2 + 1 + sm) * (c + jm) / (jm + 1)
        * (k + 2 + a2 / 2) / (k + a2 / 2)
    )
    cum = np.cumprod(ratio)
    terms = first * np.concatenate(([1.0], cum[:-1]))
    return terms, first * cum[-1]


def _tail_estimate(t_next, L, p):
    """Sum over l >= L of t_l assuming t_l = t_L (l/L)^p, p < -1."""
    return t_next * (L / (-p - 1.0) + 0.5)


def L_entry(n, m, pair, tail_tol=DEFAULT_TAIL_TOL, term_cap=DEFAULT_TERM_CAP,
            return_terms=False, scale=None):
    """Coupling coefficient L_{nm} for arbitrary indices.

    Zero for odd n - m.  For the diagonal (equal-exponent) branch only
    n = m survives.  The l-series is summed until the current term and an
    asymptotic remainder bound (terms decay like l^{2(a2-a1)-3}) both fall
    below ``tail_tol`` relative to the partial sum, or relative to
    ``scale`` when that is larger; the estimated remainder is added to the
    returned value.  :func:`build_tables` passes sqrt(L_nn L_mm) as the
    scale of off-diagonal entries.
    """
    if (n - m) % 2:
        return (0.0, 0) if return_terms else 0.0
    a1, a2 = pair.alpha1, pair.alpha2
    if pair.equal:
        val = H_coeff(n, n, pair) ** 2 * delta_k(a2, n) if n == m else 0.0
        return (val, 1) if return_terms else val
    p = 2.0 * (a2 - a1) - 3.0
    total = 0.0
    l0 = 0
    t_next = None
    while l0 < term_cap:
        terms, t_next = _terms_from(n, m, pair, l0, _CHUNK, t_next)
        total += math.fsum(terms)
        l_mid = l0 + _CHUNK // 2
        t_mid = terms[_CHUNK // 2]
        l0 += _CHUNK
        # empirical decay exponent across the second half of the chunk
        if t_mid != 0.0 and t_next != 0.0 and t_mid * t_next > 0:
            p_eff = min(math.log(t_next / t_mid) / math.log(l0 / l_mid), -1.5)
        else:
            p_eff = p
        tail = _tail_estimate(t_next, l0, p)
        bound = max(abs(tail - _tail_estimate(t_next, l0, p_eff)), abs(t_next))
        ref = max(abs(total + tail), scale or 0.0)
        if bound <= tail_tol * ref:
            val = total + tail
            return (val, l0) if return_terms else val
    raise SeriesConvergenceError(
        f"L[{n},{m}] for {pair} not converged within {term_cap} terms"
    )


@dataclass(frozen=True, eq=False)
class KernelTables:
    """Precomputed coefficient arrays for an exponent pair and truncation.

    Only even basis indices 0, 2, ..., 2(N-1) are stored.
    """

    exponents: ExponentPair
    N: int
    tail_tol: float
    H: np.ndarray = field(repr=False)
    L: np.ndarray = field(repr=False)
    R: np.ndarray = field(repr=False)
    betas: np.ndarray = field(repr=False)
    hs: np.ndarray = field(repr=False)
    terms_used: np.ndarray = field(repr=False)

    @property
    def indices(self):
        return 2 * np.arange(self.N)


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def _compute_tables(pair, N, tail_tol, term_cap):
    idx = 2 * np.arange(N)
    a1, a2 = pair.alpha1, pair.alpha2
    betas = np.array([beta_n(a1, int(n)) for n in idx])
    hs = np.array([h_n(a1, int(n)) for n in idx])
    H = np.array([[H_coeff(int(n), int(k), pair) for k in idx] for n in idx])
    L = np.zeros((N, N))
    used = np.zeros((N, N), dtype=int)
    for i in range(N):
        L[i, i], used[i, i] = L_entry(int(idx[i]), int(idx[i]), pair, tail_tol,
                                      term_cap, return_terms=True)
    for i in range(N):
        for j in range(i + 1, N):
            scale = math.sqrt(abs(L[i, i] * L[j, j]))
            val, cnt = L_entry(int(idx[i]), int(idx[j]), pair, tail_tol, term_cap,
                               return_terms=True, scale=scale)
            L[i, j] = L[j, i] = val
            used[i, j] = used[j, i] = cnt
    if pair.equal:
        R = np.eye(N)
    else:
        R = L / (betas * hs)[:, None]
    _freeze(H, L, R, betas, hs, used)
    return KernelTables(pair, N, tail_tol, H, L, R, betas, hs, used)


@lru_cache(maxsize=64)
def _cached_tables(a1, a2, N, tail_tol, term_cap):
    return _compute_tables(ExponentPair(a1, a2), N, tail_tol, term_cap)


def build_tables(pair, N=16, tail_tol=DEFAULT_TAIL_TOL, term_cap=DEFAULT_TERM_CAP):
    """Build (or fetch from the in-process cache) the kernel tables.

    Parameters
    ----------
    pair : ExponentPair
    N : int
        Number of retained even-index basis functions.
    tail_tol : float
        Relative tolerance for each L-series.
    term_cap : int
        Maximum number of series terms per entry.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if tail_tol <= 0:
        raise ValueError("tail_tol must be positive")
    return _cached_tables(pair.alpha1, pair.alpha2, int(N), float(tail_tol), int(term_cap))


def save_tables(tables, path):
    """Write tables as a versioned text file (header + row-major dump)."""
    pair = tables.exponents
    lines = [
        f"# gradcontact-kernel-tables v{CACHE_VERSION}",
        f"# alpha1={pair.alpha1!r} alpha2={pair.alpha2!r} N={tables.N} tail_tol={tables.tail_tol!r}",
    ]
    for name in ("betas", "hs"):
        lines.append(f"{name} " + " ".join(repr(float(x)) for x in getattr(tables, name)))
    for name in ("H", "L", "R", "terms_used"):
        arr = getattr(tables, name)
        for row in arr:
            lines.append(f"{name} " + " ".join(repr(float(x)) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_tables(path):
    """Read tables written by :func:`save_tables`."""
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("# gradcontact-kernel-tables v"):
        raise ValueError(f"{path}: not a kernel-table file")
    version = int(text[0].rsplit("v", 1)[1])
    if version != CACHE_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    meta = dict(item.split("=") for item in text[1][2:].split())
    pair = ExponentPair(float(meta["alpha1"]), float(meta["alpha2"]))
    N = int(meta["N"])
    rows = {}
    for line in text[2:]:
        name, *vals = line.split()
        rows.setdefault(name, []).append([float(v) for v in vals])
    arrays = {k: np.array(v) for k, v in rows.items()}
    arrays["betas"] = arrays["betas"][0]
    arrays["hs"] = arrays["hs"][0]
    arrays["terms_used"] = arrays["terms_used"].astype(int)
    _freeze(*arrays.values())
    return KernelTables(pair, N, float(meta["tail_tol"]), arrays["H"], arrays["L"],
                        arrays["R"], arrays["betas"], arrays["hs"], arrays["terms_used"])
