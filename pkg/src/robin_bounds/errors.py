"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class WrongBranchError(DomainError):
    """The sign of beta does not match the requested eigenvalue branch."""


class ConvergenceError(RuntimeError):
    """An iterative solver stopped before meeting its tolerance.

    ``diagnostics`` carries whatever the solver knew when it gave up
    (iteration count, last iterate summary, history).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
