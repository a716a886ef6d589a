"""Exact and certified computation of invariant Einstein metrics on
generalized Wallach spaces and two-step flag fibrations.

Submodules
----------
algebra    sparse multivariate polynomials over Q, rational expressions
univar     univariate polynomials, Sturm sequences, root isolation
groebner   Buchberger, FGLM, eliminants, saturation
interval   exact rational interval arithmetic
geometry   fibration specs, structure constants, Ricci components
solver     Einstein systems, certified solutions, census
proofs     exact checks of the flag existence certificates
cli        command-line entry point
"""

from .algebra import (
    MonomialOrder,
    MultiPoly,
    VarContext,
    const,
    expr_clear_denominators,
    format_poly,
    loads,
    dumps,
    parse_poly,
    var,
)
from .errors import (
    BudgetExceeded,
    DomainError,
    EinsteinSpError,
    NotZeroDimensional,
    SpecError,
    UncertifiedSolution,
)
from .geometry import FibrationSpec, ricci, ricci_closed_form, structure_constants, summand_dims
from .groebner import Budget, GroebnerBasis, IdealBasis, buchberger, eliminant, fglm, saturate_nonzero
from .interval import Interval
from .solver import EinsteinSolution, EinsteinSystem, assemble_system, census, solve_einstein
from .univar import UniPoly, isolate_real_roots, real_roots, refine_root, sturm_count

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "BudgetExceeded",
    "DomainError",
    "EinsteinSolution",
    "EinsteinSpError",
    "EinsteinSystem",
    "FibrationSpec",
    "GroebnerBasis",
    "IdealBasis",
    "Interval",
    "MonomialOrder",
    "MultiPoly",
    "NotZeroDimensional",
    "SpecError",
    "UncertifiedSolution",
    "UniPoly",
    "VarContext",
    "assemble_system",
    "buchberger",
    "census",
    "const",
    "dumps",
    "eliminant",
    "expr_clear_denominators",
    "fglm",
    "format_poly",
    "isolate_real_roots",
    "loads",
    "parse_poly",
    "real_roots",
    "refine_root",
    "ricci",
    "ricci_closed_form",
    "saturate_nonzero",
    "solve_einstein",
    "structure_constants",
    "sturm_count",
    "summand_dims",
    "var",
]
