"""Exception hierarchy. Every error carries a short machine-readable ``code``."""

from __future__ import annotations


class PhiBVPError(Exception):
    code = "error"


class DomainError(PhiBVPError, ValueError):
    code = "domain"


class UnsupportedError(PhiBVPError, NotImplementedError):
    code = "unsupported"


class QuadratureError(PhiBVPError, ArithmeticError):
    """Double-exponential refinement did not settle within ``max_levels``."""

    code = "quadrature_failure"

    def __init__(self, message: str, last: float = float("nan"), previous: float = float("nan")):
        super().__init__(f"{message} (last estimates {previous!r}, {last!r})")
        self.last = last
        self.previous = previous


class NoSolutionError(PhiBVPError):
    code = "no_solution"


class EigenvalueDegenerateError(PhiBVPError):
    code = "eigenvalue_degenerate"


class DegenerateFamilyError(PhiBVPError):
    code = "degenerate_family"


class MultipleSolutionsError(PhiBVPError):
    code = "multiple_solutions"

    def __init__(self, message: str, crossings=()):
        super().__init__(message)
        self.crossings = list(crossings)


class NoBracketError(PhiBVPError):
    code = "no_bracket"


class ConsistencyError(PhiBVPError):
    """A reduced solution failed an internal identity it must satisfy."""

    code = "internal_consistency"


class ContractError(PhiBVPError, ValueError):
    code = "contract"
