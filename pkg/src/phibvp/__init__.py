"""Positive solutions of indefinite phi-Laplacian Neumann and periodic problems.

The boundary value problem (phi(u'))' + a(t) u**gamma = 0 with a stepwise
weight is reduced to two scalar equations through time maps; ``solver``
solves them, ``profile`` rebuilds u(t) and ``oracle`` checks the answer by
direct shooting.
"""

from ._backend import BACKEND
from .errors import (
    ConsistencyError,
    ContractError,
    DegenerateFamilyError,
    DomainError,
    EigenvalueDegenerateError,
    MultipleSolutionsError,
    NoBracketError,
    NoSolutionError,
    PhiBVPError,
    QuadratureError,
    UnsupportedError,
)
from .operators import (
    CaseClass,
    KernelKind,
    OperatorKernel,
    PowerNonlinearity,
    classify_nonlinearity,
    make_operator,
)
from .problem import BoundaryCondition, ProblemSpec, WeightSpec, make_problem
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundaryCondition",
    "CaseClass",
    "ConsistencyError",
    "ContractError",
    "DEFAULT_QUADRATURE",
    "DegenerateFamilyError",
    "DomainError",
    "EigenvalueDegenerateError",
    "KernelKind",
    "MultipleSolutionsError",
    "NoBracketError",
    "NoSolutionError",
    "OperatorKernel",
    "PhiBVPError",
    "PowerNonlinearity",
    "ProblemSpec",
    "QuadratureConfig",
    "QuadratureError",
    "UnsupportedError",
    "WeightSpec",
    "classify_nonlinearity",
    "make_operator",
    "make_problem",
]
