"""Cross-check suite: production closed forms against the independent oracle."""

import time
import warnings
from dataclasses import dataclass

import numpy as np

from .assembly import ContactProblem, MaterialHalfPlane, ProfilePoly, profile_rhs
from .displacement import I_n
from .hertz import solve_equal_exponent, solve_hertz
from .jkr import energy_from_coeffs
from .kernel import ExponentPair, H_coeff, beta_n, h_n
from .oracle import build_grid, nystrom_solve, quad_coefficient
from .solver import solve
from .specfun import gegenbauer

__all__ = ["CheckResult", "CHECKS", "run_validation"]

PERTURBATION = 1e-2


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float
    seconds: float

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<26s} worst={self.worst:.3e}  tol={self.tol:.0e}  ({self.seconds:.2f} s)"


def _problem(a1, a2, **kw):
    return ContactProblem(MaterialHalfPlane(1.0, a1, 0.3), MaterialHalfPlane(1.0, a2, 0.3), **kw)


def _rel(a, b, floor=1e-300):
    return abs(a - b) / max(abs(b), floor)


def check_kernel_H(scale):
    pair = ExponentPair(0.7, 0.3)
    worst = 0.0
    for n, k in [(0, 0), (0, 2), (2, 4), (4, 4), (2, 8), (6, 10)]:
        ref = quad_coefficient("H", (k, n), {"alpha1": 0.7, "alpha2": 0.3})
        worst = max(worst, _rel(scale * H_coeff(n, k, pair), ref))
    return worst, 1e-9


def check_norm_h(scale):
    worst = 0.0
    for a in (0.3, 0.7):
        for n in (0, 2, 6):
            ref = quad_coefficient("h", (n, n), {"alpha": a})
            worst = max(worst, _rel(scale * h_n(a, n), ref))
    return worst, 1e-10


def check_rhs_g(scale):
    worst = 0.0
    for Q0, Q1 in [(1.0, 0.0), (0.0, 1.0), (0.5, 2.0)]:
        g1, _ = profile_rhs(ProfilePoly(Q0, Q1), 1.3, 0.6, 3)
        for i in range(3):
            ref = quad_coefficient("g", (2 * i,), {"alpha1": 0.6, "b": 1.3, "Q0": Q0, "Q1": Q1})
            if ref != 0.0 or g1[i] != 0.0:
                worst = max(worst, abs(scale * g1[i] - ref) / max(abs(g1[0]), 1e-300))
    return worst, 1e-10


def check_spectral_relation(scale):
    worst = 0.0
    rng = np.random.default_rng(7)
    for a in (0.3, 0.8):
        for n in (0, 2, 5):
            for t in rng.uniform(-0.95, 0.95, 3):
                ref = quad_coefficient("I", (n,), {"t": t, "alpha_j": a, "alpha1": a})
                val = scale * beta_n(a, n) * gegenbauer(n, a / 2, t)
                worst = max(worst, abs(val - ref) / max(abs(beta_n(a, n)), 1e-300))
    return worst, 1e-8


def check_exterior_I(scale):
    worst = 0.0
    for a1, aj in [(0.5, 0.25), (0.9, 0.45)]:
        for n in (0, 2, 4, 6):
            for t in (-1.2, -2.0, -3.001, -2.999, -5.0, -20.0):
                ref = quad_coefficient("I", (n,), {"t": t, "alpha_j": aj, "alpha1": a1}, backend="mp")
                worst = max(worst, _rel(scale * I_n(t, n, aj, a1), ref))
    return worst, 1e-8


def check_energy(scale):
    worst = 0.0
    for a1, a2 in [(0.7, 0.35), (0.5, 0.5)]:
        prob = _problem(a1, a2)
        sol = solve(prob, branch="spectral")
        sol_c = sol.coeffs
        b = sol.b

        def gap(x):
            return sol.delta - x**2

        ref = quad_coefficient(
            "U_e", (), {"pressure": sol.pressure, "gap": gap, "b": b, "alpha1": sol_c.alpha1}
        )
        worst = max(worst, _rel(scale * energy_from_coeffs(prob, sol_c, sol.delta), ref))
    return worst, 1e-7


def check_nystrom(scale):
    prob = _problem(0.7, 0.3)
    sol = solve_hertz(prob)
    res = nystrom_solve(prob, sol.b, build_grid(0.7, 0.3, 200))
    x = sol.b * np.array([0.0, 0.25, 0.5, 0.75, 0.9])
    worst = float(np.max(np.abs(scale * sol.pressure(x) / res.pressure(x) - 1)))
    return worst, 1e-3


def check_cross_branch(scale):
    prob = _problem(0.3, 0.3)
    b_closed = solve_equal_exponent(prob).b
    b_spec = solve_hertz(prob).b
    return _rel(scale * b_spec, b_closed), 1e-8


CHECKS = {
    "kernel-H": check_kernel_H,
    "norm-h": check_norm_h,
    "rhs-g": check_rhs_g,
    "spectral-relation": check_spectral_relation,
    "exterior-I": check_exterior_I,
    "strain-energy": check_energy,
    "spectral-vs-nystrom": check_nystrom,
    "equal-exponent-branches": check_cross_branch,
}


def run_validation(perturb=(), names=None):
    """Run the checks; production values of checks in ``perturb`` are scaled
    by 1 + PERTURBATION so they must fail (negative control)."""
    perturb = set(perturb)
    unknown = perturb - set(CHECKS) - {"all"}
    if unknown:
        raise KeyError(f"unknown checks: {sorted(unknown)}")
    results = []
    for name, fn in CHECKS.items():
        if names and name not in names:
            continue
        scale = 1 + PERTURBATION if (name in perturb or "all" in perturb) else 1.0
        t0 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            worst, tol = fn(scale)
        results.append(CheckResult(name, bool(worst <= tol), float(worst), tol, time.perf_counter() - t0))
    return results
