"""Hertzian and JKR contact of two power-law graded elastic bodies."""

from .assembly import ContactProblem, MaterialHalfPlane, ProfilePoly, material_theta
from .hertz import ContactSolution, solve_equal_exponent, solve_hertz
from .jkr import AdhesionParams, solve_jkr_equal, solve_jkr_general
from .displacement import I_n, surface_displacement
from .kernel import ExponentPair, build_tables
from .solver import defining_residual, solve

__version__ = "0.1.0"

__all__ = [
    "AdhesionParams", "ContactProblem", "ContactSolution", "ExponentPair",
    "I_n", "MaterialHalfPlane", "ProfilePoly", "build_tables", "defining_residual",
    "material_theta", "solve", "solve_equal_exponent", "solve_hertz",
    "solve_jkr_equal", "solve_jkr_general", "surface_displacement",
]
