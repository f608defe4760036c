"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point was supplied outside the open unit disc."""


class SingularityError(DomainError):
    """Evaluation requested inside the guard disc of a boundary singularity."""


class ConvergenceError(ArithmeticError):
    """An iterative routine failed to meet its tolerance."""


class RangeError(ValueError):
    """A map does not satisfy the required compact-range hypothesis."""


class TestFunctionError(ValueError):
    """A test function lies outside the boundary-regular class."""

    __test__ = False


class MapParseError(ValueError):
    """Syntax or semantic error in a map expression."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
