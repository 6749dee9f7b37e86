"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain where a routine is defined."""


class ConvergenceError(RuntimeError):
    """Series or iteration failed to converge within its budget."""


class DegenerateFamilyError(DomainError):
    """Parameters fall on a branch the closed-form solver does not cover.

    ``route`` names the command/function that handles the branch instead.
    """

    def __init__(self, message, route=None):
        super().__init__(message)
        self.route = route


class NegativeRateError(DomainError):
    """A transition-rate function evaluated to a negative number."""


class NonUniqueSteadyStateError(RuntimeError):
    """Generator has a two-dimensional (parity) nullspace and no weight was given."""


class UnsupportedStructureError(RuntimeError):
    """Generator nullspace has a structure the oracle does not handle."""
