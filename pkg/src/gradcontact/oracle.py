"""Independent reference computations used for validation only.

Two paths that share nothing with the spectral solver beyond the problem
definition:

* a collocation (Nystrom-type) solver for the two auxiliary integral
  equations, with the pressure written as (1 - tau^2)^((a1-1)/2) u(tau) and
  u piecewise linear;
* brute-force quadrature of the defining integrals of every coefficient the
  production code evaluates in closed form.

Gegenbauer values here come from scipy, not from :mod:`gradcontact.specfun`.
"""

import math
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import eval_gegenbauer, roots_jacobi, roots_legendre

from .assembly import material_theta

__all__ = [
    "CollocationGrid",
    "NystromResult",
    "QuadratureShortfallWarning",
    "build_grid",
    "nystrom_solve",
    "nystrom_hertz_b",
    "nystrom_project",
    "weighted_integral",
    "quad_coefficient",
]

QUAD_ORDER = 20
QUAD_TOL = 1e-12


class QuadratureShortfallWarning(UserWarning):
    """Adaptive quadrature did not reach the requested tolerance."""


# ---------------------------------------------------------------------------
# collocation solver


def _rule(n, p, q):
    """Nodes/weights on [-1, 1] for weight (1 - x)^q (1 + x)^p."""
    if p == 0.0 and q == 0.0:
        return roots_legendre(n)
    return roots_jacobi(n, q, p)


def _pieces_for(t, knots):
    """Subintervals of [-1, 1] for a collocation point t.

    The panel holding t is split at t; each neighbouring panel is split
    geometrically toward t so that every regular piece sits at least half
    its length away from the kernel singularity.
    """
    M = len(knots) - 1
    k = int(np.argmin(np.abs(knots - t)))
    if abs(knots[k] - t) <= 1e-14:
        # t on a knot: both adjacent panels carry the singularity at an end
        out = []
        for j in range(M):
            lo, hi = knots[j], knots[j + 1]
            if j == k - 1:
                out.append((lo, t, j))
            elif j == k:
                out.append((t, hi, j))
            else:
                out.append((lo, hi, j))
        return out
    i = int(np.searchsorted(knots, t) - 1)
    out = []
    for j in range(M):
        lo, hi = knots[j], knots[j + 1]
        if j == i:
            out += [(lo, t, j), (t, hi, j)]
        elif j == i - 1 or j == i + 1:
            d = t - hi if j == i - 1 else lo - t
            cuts = [0.0]
            while cuts[-1] < hi - lo:
                cuts.append(min(hi - lo, d * (3.0 ** len(cuts)) - d))
            if j == i - 1:
                pts = [hi - c for c in cuts][::-1]
            else:
                pts = [lo + c for c in cuts]
            out += [(pts[k], pts[k + 1], j) for k in range(len(pts) - 1) if pts[k + 1] > pts[k]]
        else:
            out.append((lo, hi, j))
    return out


def _kernel_row(t, knots, e, alpha, nq):
    """Row of int hat_j(tau) (1 - tau^2)^e |t - tau|^(-alpha) dtau over knots."""
    row = np.zeros(len(knots))
    reg_lo, reg_hi, reg_j = [], [], []
    for lo, hi, j in _pieces_for(t, knots):
        p = (e if lo == -1.0 else 0.0) + (-alpha if lo == t else 0.0)
        q = (e if hi == 1.0 else 0.0) + (-alpha if hi == t else 0.0)
        if p == 0.0 and q == 0.0:
            reg_lo.append(lo)
            reg_hi.append(hi)
            reg_j.append(j)
            continue
        x, w = _rule(nq, p, q)
        s = (hi - lo) / 2
        tau = lo + (x + 1) * s
        ww = w * s ** (1 + p + q)
        f = np.ones_like(tau)
        if hi != 1.0:
            f *= (1 - tau) ** e
        if lo != -1.0:
            f *= (1 + tau) ** e
        if lo != t and hi != t:
            f *= np.abs(t - tau) ** (-alpha)
        a, b = knots[j], knots[j + 1]
        row[j] += np.sum(ww * f * (b - tau) / (b - a))
        row[j + 1] += np.sum(ww * f * (tau - a) / (b - a))
    if reg_lo:
        x, w = _rule(nq, 0.0, 0.0)
        lo = np.array(reg_lo)[:, None]
        hi = np.array(reg_hi)[:, None]
        j = np.array(reg_j)
        s = (hi - lo) / 2
        tau = lo + (x + 1) * s
        f = w * s * (1 - tau**2) ** e * np.abs(t - tau) ** (-alpha)
        a, b = knots[j][:, None], knots[j + 1][:, None]
        np.add.at(row, j, np.sum(f * (b - tau) / (b - a), axis=1))
        np.add.at(row, j + 1, np.sum(f * (tau - a) / (b - a), axis=1))
    return row


@dataclass(frozen=True)
class CollocationGrid:
    """Collocation data for one exponent pair.

    ``knots`` carry the piecewise-linear unknown, ``nodes`` are the
    collocation points, ``K1``/``K2`` the product-integration matrices for
    the two kernels and ``load`` the row integrating the pressure.
    """

    alpha1: float
    alpha2: float
    M: int
    knots: np.ndarray
    nodes: np.ndarray
    K1: np.ndarray
    K2: np.ndarray
    load: np.ndarray


def build_grid(alpha1, alpha2, M=200, nq=QUAD_ORDER):
    """Chebyshev-Lobatto knots and M + 1 interior Chebyshev collocation nodes."""
    knots = -np.cos(np.linspace(0.0, math.pi, M + 1))
    knots[0], knots[-1] = -1.0, 1.0
    nodes = -np.cos((2 * np.arange(M + 1) + 1) * math.pi / (2 * (M + 1)))
    e = (alpha1 - 1) / 2
    K1 = np.array([_kernel_row(t, knots, e, alpha1, nq) for t in nodes])
    K2 = np.array([_kernel_row(t, knots, e, alpha2, nq) for t in nodes])
    # any point outside (-1, 1) with alpha = 0 gives the plain weighted integral
    load = _kernel_row(5.0, knots, e, 0.0, nq)
    return CollocationGrid(alpha1, alpha2, M, knots, nodes, K1, K2, load)


@dataclass
class NystromResult:
    """Smooth factors u of phi^(1), phi^(2) at the knots, and delta."""

    grid: CollocationGrid
    b: float
    u1: np.ndarray
    u2: np.ndarray
    delta: float

    @property
    def u(self):
        return self.u1 + self.delta * self.u2

    def pressure(self, x):
        t = np.asarray(x, dtype=float) / self.b
        a1 = self.grid.alpha1
        return (1 - t**2) ** ((a1 - 1) / 2) * np.interp(t, self.grid.knots, self.u)


def nystrom_solve(problem, b, grid):
    """Collocation solution of both auxiliary equations at half-length b."""
    a1, a2 = problem.body1.alpha, problem.body2.alpha
    if abs(grid.alpha1 - a1) > 1e-14 or abs(grid.alpha2 - a2) > 1e-14:
        raise ValueError("grid was built for another exponent pair")
    th1, th2 = material_theta(problem.body1), material_theta(problem.body2)
    A1 = th1 * b ** (1 - a1) / a1
    A2 = th2 * b ** (1 - a2) / a2
    mat = A1 * grid.K1 + A2 * grid.K2
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > 1e12:
        raise np.linalg.LinAlgError(f"collocation matrix condition {cond:.3g}")
    x = b * grid.nodes
    rhs = np.column_stack([-(problem.profile.Q0 * x**2 + problem.profile.Q1 * x**4), np.ones_like(x)])
    sol = np.linalg.solve(mat, rhs)
    u1, u2 = sol[:, 0], sol[:, 1]
    delta = (problem.P / b - grid.load @ u1) / (grid.load @ u2)
    return NystromResult(grid, b, u1, u2, delta)


def nystrom_hertz_b(problem, grid, lo=0.3, hi=5.0):
    """Half-length at which the smooth factor vanishes at t = 1."""
    return brentq(lambda b: nystrom_solve(problem, b, grid).u[-1], lo, hi, xtol=1e-13)


def _panel_quadrature(knots, e, nq=QUAD_ORDER):
    """Nodes and weights for int (1 - tau^2)^e g(tau) dtau with g smooth per panel."""
    xs, ws = [], []
    last = len(knots) - 2
    for j in range(last + 1):
        lo, hi = knots[j], knots[j + 1]
        p = e if j == 0 else 0.0
        q = e if j == last else 0.0
        x, w = _rule(nq, p, q)
        s = (hi - lo) / 2
        tau = lo + (x + 1) * s
        f = w * s ** (1 + p + q)
        if j != last:
            f = f * (1 - tau) ** e
        if j != 0:
            f = f * (1 + tau) ** e
        xs.append(tau)
        ws.append(f)
    return np.concatenate(xs), np.concatenate(ws)


def nystrom_project(result, N):
    """Coefficients of the combined pressure in C_{2n}^{a1/2}, n < N."""
    grid = result.grid
    a1 = grid.alpha1
    tau, w = _panel_quadrature(grid.knots, (a1 - 1) / 2)
    u = np.interp(tau, grid.knots, result.u)
    out = np.empty(N)
    for i in range(N):
        c = eval_gegenbauer(2 * i, a1 / 2, tau)
        out[i] = np.sum(w * c * u) / np.sum(w * c * c)
    return out


# ---------------------------------------------------------------------------
# quadrature of defining integrals


def _folded(fun, lo, hi, p, q, tol, limit):
    """int_lo^hi fun(x) (x - lo)^p (hi - x)^q dx with both ends folded.

    On each half the substitution x = end +- s^k with k = 1/(1 + exponent)
    makes the power weight disappear.
    """
    mid = 0.5 * (lo + hi)
    total = 0.0
    err = 0.0
    for end, expo, sgn, other in ((lo, p, 1.0, q), (hi, q, -1.0, p)):
        k = 1.0 / (1.0 + expo)
        smax = abs(mid - end) ** (1.0 / k)
        far = hi if sgn > 0 else lo

        def g(s, end=end, k=k, sgn=sgn, far=far, other=other):
            x = end + sgn * s**k
            return fun(x) * abs(far - x) ** other * k

        val, e = quad(g, 0.0, smax, epsabs=tol, epsrel=tol, limit=limit)
        total += val
        err += e
    return total, err


def weighted_integral(fun, e, singular=None, alpha=0.0, breakpoints=None,
                      tol=QUAD_TOL, limit=400, return_error=False):
    """int_{-1}^{1} fun(tau) (1 - tau^2)^e |singular - tau|^(-alpha) dtau.

    ``fun`` must be smooth apart from kinks at ``breakpoints``. The endpoint
    weight and an interior kernel singularity are removed by folding; a
    shortfall against ``tol`` is reported as a warning.
    """
    cuts = {-1.0, 0.0, 1.0}
    if breakpoints is not None:
        cuts.update(float(x) for x in breakpoints if -1 < x < 1)
    if singular is not None and -1 < singular < 1 and alpha:
        cuts.add(float(singular))
    cuts = sorted(cuts)
    total = 0.0
    err = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        p = (e if lo == -1.0 else 0.0) + (-alpha if alpha and lo == singular else 0.0)
        q = (e if hi == 1.0 else 0.0) + (-alpha if alpha and hi == singular else 0.0)

        def smooth(x, lo=lo, hi=hi):
            v = fun(x)
            if lo != -1.0:
                v = v * (1 + x) ** e
            if hi != 1.0:
                v = v * (1 - x) ** e
            if alpha and singular is not None and singular not in (lo, hi):
                v = v * abs(singular - x) ** (-alpha)
            return v

        val, er = _folded(smooth, lo, hi, p, q, tol, limit)
        total += val
        err += er
    scale = max(abs(total), 1.0)
    if err > 10 * tol * scale:
        warnings.warn(
            f"quadrature error estimate {err:.2e} exceeds tolerance {tol:.0e}",
            QuadratureShortfallWarning,
            stacklevel=2,
        )
    return (total, err) if return_error else total


def _mp_weighted(fun, alpha1, singular=None, alpha=0.0, dps=40):
    """High-precision variant using tanh-sinh quadrature.

    The weight exponent (alpha1 - 1)/2 is formed at working precision:
    for far points the integral is many orders below the integrand and a
    double-rounded exponent already shows up at the 1e-6 level.
    """
    with mpmath.workdps(dps):
        e = (mpmath.mpf(alpha1) - 1) / 2
        pts = [-1, 0, 1]
        if singular is not None and -1 < singular < 1:
            pts = sorted(set(pts) | {mpmath.mpf(singular)})
        s = None if singular is None else mpmath.mpf(singular)
        a = mpmath.mpf(alpha)

        def f(x):
            v = fun(x) * (1 - x * x) ** e
            if s is not None and a:
                v *= abs(s - x) ** (-a)
            return v

        return float(mpmath.quad(f, pts))


def quad_coefficient(kind, indices, params, backend="double"):
    """Brute-force value of a coefficient from its defining integral.

    Parameters
    ----------
    kind : {"H", "g", "h", "I", "U_e"}
        "H": indices (k, n), params alpha1, alpha2 -- integral of
        C_n^{a1/2} C_k^{a2/2} against the a1 weight.
        "g": indices (n,), params Q0, Q1, b, alpha1 and optional rhs (1 or 2)
        -- projection of -f(bt) (rhs 1) or of 1 (rhs 2).
        "h": indices (n, m), params alpha -- Gram integral.
        "I": indices (n,), params t, alpha_j, alpha1 -- weighted power
        potential; interior t gives the spectral-relation integral.
        "U_e": params pressure (callable p(x)), gap (callable v(x)), b,
        alpha1 -- half the work integral over (-b, b).
    backend : {"double", "mp"}
        "mp" uses mpmath tanh-sinh at 40 digits for integrals whose value is
        far below the integrand scale.
    """
    if kind == "H":
        k, n = indices
        a1, a2 = params["alpha1"], params["alpha2"]
        if backend == "mp":
            return _mp_weighted(
                lambda x: mpmath.gegenbauer(n, mpmath.mpf(a1) / 2, x)
                * mpmath.gegenbauer(k, mpmath.mpf(a2) / 2, x),
                a1,
            )
        return weighted_integral(
            lambda x: eval_gegenbauer(n, a1 / 2, x) * eval_gegenbauer(k, a2 / 2, x),
            (a1 - 1) / 2,
        )
    if kind == "g":
        (n,) = indices
        a1, b = params["alpha1"], params["b"]
        Q0, Q1 = params.get("Q0", 0.0), params.get("Q1", 0.0)
        if params.get("rhs", 1) == 2:
            return weighted_integral(lambda x: eval_gegenbauer(n, a1 / 2, x), (a1 - 1) / 2)
        return weighted_integral(
            lambda x: -(Q0 * (b * x) ** 2 + Q1 * (b * x) ** 4) * eval_gegenbauer(n, a1 / 2, x),
            (a1 - 1) / 2,
        )
    if kind == "h":
        n, m = indices
        a = params["alpha"]
        return weighted_integral(
            lambda x: eval_gegenbauer(n, a / 2, x) * eval_gegenbauer(m, a / 2, x),
            (a - 1) / 2,
        )
    if kind == "I":
        (n,) = indices
        t, aj, a1 = params["t"], params["alpha_j"], params["alpha1"]
        if backend == "mp":
            return _mp_weighted(
                lambda x: mpmath.gegenbauer(n, mpmath.mpf(a1) / 2, x), a1, t, aj
            )
        return weighted_integral(
            lambda x: eval_gegenbauer(n, a1 / 2, x), (a1 - 1) / 2, singular=t, alpha=aj
        )
    if kind == "U_e":
        p, v, b, a1 = params["pressure"], params["gap"], params["b"], params["alpha1"]
        e = (a1 - 1) / 2
        # divide the weight back out so the folding sees a smooth factor
        smooth = lambda s: p(b * s) * v(b * s) / (1 - s * s) ** e
        return 0.5 * b * weighted_integral(smooth, e)
    raise ValueError(f"unknown coefficient kind {kind!r}")
