"""Exception hierarchy shared by every module of the package."""


class R4BPError(Exception):
    """Base class for all errors raised by :mod:`r4bp`."""


class DomainError(R4BPError, ValueError):
    """A parameter lies outside the domain where a formula is defined."""


class SingularityError(R4BPError):
    """Evaluation requested on (or too close to) a point mass."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegenerateParameterError(DomainError):
    """The parameter is legal but sends part of the output to infinity."""


class PreconditionError(R4BPError, ValueError):
    pass


class OracleFailureError(R4BPError):
    """The brute-force equilibrium search found the wrong number of roots."""

    def __init__(self, message, roots=None):
        super().__init__(message)
        self.roots = roots


class ContinuationError(R4BPError):
    def __init__(self, message, seed=None):
        super().__init__(message)
        self.seed = seed


class StructuralError(R4BPError):
    """A result that contradicts a proven property; indicates a bug."""


class IntegrationError(R4BPError):
    def __init__(self, message, t=None, state=None):
        super().__init__(message)
        self.t = t
        self.state = state


class SingularityEvent(IntegrationError):
    """The trajectory came within the guard radius of a point mass."""


class StepBudgetExceeded(IntegrationError):
    pass
