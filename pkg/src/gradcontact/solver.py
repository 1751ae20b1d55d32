"""Branch selection: closed forms where they exist, the spectral method otherwise."""

from .hertz import solve_equal_exponent, solve_equal_exponent_general, solve_hertz
from .jkr import solve_jkr_equal, solve_jkr_general

__all__ = ["solve", "defining_residual"]


def solve(problem, tables=None, branch="auto"):
    """Solve a contact problem.

    Parameters
    ----------
    problem : ContactProblem
    tables : KernelTables, optional
        Reused when given (spectral branch only).
    branch : {"auto", "spectral"}
        "auto" takes the equal-exponent forms when alpha1 == alpha2;
        "spectral" always runs the general solver.
    """
    if branch not in ("auto", "spectral"):
        raise ValueError(f"unknown branch {branch!r}")
    equal = problem.equal_exponents and branch == "auto"
    quadratic = problem.profile.quadratic
    if problem.model == "hertz":
        if equal and quadratic:
            return solve_equal_exponent(problem)
        if equal:
            return solve_equal_exponent_general(problem)
        return solve_hertz(problem, tables)
    if equal and quadratic:
        return solve_jkr_equal(problem)
    return solve_jkr_general(problem, tables=tables)


def defining_residual(solution):
    """Residual of the equation that fixed b, for post-hoc checks.

    Hertz: the bracketed pressure series at t = 1. JKR: the energy slope
    minus 2 gamma_s (exact slope for the closed form, the forward
    difference otherwise).
    """
    if solution.model == "hertz":
        return solution.diagnostics.endpoint_residual
    e = solution.energy
    return e.dU_db - 2 * e.gamma_s
