"""Exception hierarchy shared by every module of the package."""


class DomainError(ValueError):
    """Input is well-formed but violates a mathematical precondition."""


class InvalidProbVec(DomainError):
    pass


class InvalidState(DomainError):
    pass


class InvalidMeasurement(DomainError):
    pass


class SearchError(DomainError):
    """A numerical search did not converge; ``best`` carries the best value seen."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
