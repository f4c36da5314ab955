"""Exception hierarchy shared by every module of the package."""


class PathSeriesError(Exception):
    """Base class for all errors raised by pathseries."""


class SeriesError(PathSeriesError, ValueError):
    """Malformed or incompatible series arguments."""


class CompositionError(SeriesError):
    """The inner series of a composition has a nonzero constant term."""


class SeriesDivisionError(SeriesError, ZeroDivisionError):
    """Reciprocal of a series whose constant term is not invertible."""


class SqrtError(SeriesError):
    """Square root requested for a series whose constant term is not 1."""


class InversionError(SeriesError):
    """Compositional inverse requested for a series with f(0) != 0 or f'(0) == 0."""


class InvariantError(SeriesError):
    """A bivariate series violates deg_u(coeff_n) <= n (plus its declared slack)."""


class EstimationError(PathSeriesError, ValueError):
    """Not enough data to estimate a growth rate or radius."""


class GraphValidationError(PathSeriesError, ValueError):
    """A graph document or constructor argument is structurally invalid.

    ``element`` names the offending vertex, half-edge or parameter.
    """

    def __init__(self, message: str, element=None):
        super().__init__(message)
        self.element = element

    def to_json(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), "element": self.element}


class ParameterError(GraphValidationError):
    """A named family was requested with out-of-range parameters."""


class HorizonError(PathSeriesError, ValueError):
    """Coefficients requested beyond the faithful horizon of a truncated graph."""

    def __init__(self, requested: int, horizon: int):
        super().__init__(
            f"order {requested} exceeds the faithful horizon {horizon} of this truncation"
        )
        self.requested = requested
        self.horizon = horizon


class BudgetError(PathSeriesError, RuntimeError):
    """Brute-force enumeration would exceed its node budget."""


class ConsistencyError(PathSeriesError, ArithmeticError):
    """An identity that must hold exactly did not (e.g. a non-exact division)."""


class DomainError(PathSeriesError, ValueError):
    """Numeric input lies outside the validity range of a formula."""
