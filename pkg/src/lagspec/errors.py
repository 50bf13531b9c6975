"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class AdmissibilityError(ValueError):
    """An (n, m) pair does not index a Klein bottle of the family.

    ``clause`` names the violated condition, e.g. ``"gcd(n,m)=3"``.
    """

    def __init__(self, n, m, clause):
        self.n = n
        self.m = m
        self.clause = clause
        super().__init__(f"(n,m)=({n},{m}) is not admissible: {clause}")


class AmbiguityError(RuntimeError):
    """An eigenvalue near the index cutoff did not stabilise under refinement."""


class ConvergenceError(RuntimeError):
    """A discretisation failed its convergence-order check."""


class ResolutionError(ValueError):
    """A sampling grid is too coarse, or a threshold discards too much of it."""
