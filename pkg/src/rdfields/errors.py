"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class NotSquarefreeError(DomainError):
    def __init__(self, value, square_factor):
        self.value = value
        self.square_factor = square_factor
        super().__init__(f"{value} is not square-free (divisible by {square_factor})")


class InertPrimeError(DomainError):
    pass


class NotAnIdealError(DomainError):
    """A Z-module failed the closure test under multiplication by omega."""


class ConventionError(RuntimeError):
    """Two independent computations of the same quantity disagree.

    This always indicates a bug (a basis or sign convention mismatch),
    never bad user input.
    """


class ZetaInconsistency(RuntimeError):
    pass
