"""Exception types shared across the package."""


class DomainError(ValueError):
    """Arguments fall outside the domain of the requested formula."""


class Infeasible(Exception):
    """No tolerance in (0, 1] reaches the requested confidence."""


class ResourceLimit(Exception):
    """A search exceeded its hard iteration or size limit."""


class NumericalDegeneracy(ArithmeticError):
    """Geometry too close to degenerate to resolve in double precision."""


class SolverError(RuntimeError):
    """Internal inconsistency in the scenario solver."""
