"""Exception hierarchy shared by all modules."""


class SfHeraldError(Exception):
    """Base class for all library errors."""


class DomainError(SfHeraldError, ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidStateError(SfHeraldError, ValueError):
    """Gaussian parameters that do not describe a normalizable state.

    ``violations`` lists every failed condition, not just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("non-normalizable state: " + "; ".join(self.violations))


class SingularParameterError(SfHeraldError, ValueError):
    """The closed form degenerates at the given parameters."""


class ImpossibleOutcomeError(SfHeraldError, ValueError):
    """The requested measurement outcome has zero probability."""


class ConvergenceError(SfHeraldError, ArithmeticError):
    """A numerical procedure did not reach its tolerance."""


class DesignError(SfHeraldError, ValueError):
    """No experimental setup satisfies the requested design constraints."""

    def __init__(self, message, constraint=None, diagnostics=None):
        super().__init__(message)
        self.constraint = constraint
        self.diagnostics = dict(diagnostics or {})
