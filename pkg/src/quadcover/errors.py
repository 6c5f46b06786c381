"""Exception hierarchy shared by all quadcover modules."""


class QuadcoverError(Exception):
    """Base class for every error raised by the package."""


class GeometryError(QuadcoverError, ValueError):
    pass


class NonConvex(GeometryError):
    pass


class Degenerate(GeometryError):
    pass


class SingularMap(GeometryError):
    pass


class NotAnEllipse(GeometryError):
    pass


class EmptyConic(GeometryError):
    pass


class NoEllipseRoot(GeometryError):
    pass


class OutOfRange(QuadcoverError, ValueError):
    pass


class InvalidAxes(QuadcoverError, ValueError):
    pass


class NonPositiveRate(QuadcoverError, ArithmeticError):
    pass


class NonFinite(QuadcoverError, ArithmeticError):
    pass


class EmptyFeasibleSet(QuadcoverError):
    pass


class ParseError(QuadcoverError):
    pass


class ValidationError(QuadcoverError, ValueError):
    """A configuration value broke an invariant; ``field`` names it."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class UnknownPreset(ValidationError):
    pass
