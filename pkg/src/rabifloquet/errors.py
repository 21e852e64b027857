"""Exception hierarchy shared by all modules."""


class RabiFloquetError(Exception):
    """Base class for all package errors."""


class DomainError(RabiFloquetError, ValueError):
    """Input outside the supported domain of an operation."""


class EvaluationError(RabiFloquetError, RuntimeError):
    """A user-supplied callable produced an unusable value."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class ContractViolationError(RabiFloquetError, ValueError):
    """A documented precondition or invariant was violated."""


class ConvergenceError(RabiFloquetError, RuntimeError):
    """An iterative scheme failed to reach the requested tolerance."""


class ClusteringError(RabiFloquetError, RuntimeError):
    """Folded quasienergies did not separate into two classes.

    Usually indicates the Floquet truncation order is too small.
    """


class NoSolutionError(RabiFloquetError, RuntimeError):
    """The CHRW self-consistency condition has no root in [0, 1]."""


class AmbiguousSolutionError(RabiFloquetError, RuntimeError):
    """The CHRW self-consistency condition has multiple roots in [0, 1]."""

    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = tuple(roots)


class MultiphotonResonanceError(RabiFloquetError, RuntimeError):
    """A perturbative denominator is (nearly) zero at some harmonic index."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class InternalConsistencyError(RabiFloquetError, RuntimeError):
    """Two redundant computations of the same quantity disagree."""
