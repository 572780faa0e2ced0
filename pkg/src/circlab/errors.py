"""Exception types raised across the package."""


class CirclabError(Exception):
    pass


class InvalidGeometry(CirclabError, ValueError):
    pass


class Collinear(CirclabError, ValueError):
    pass


class ChartMismatch(CirclabError, ValueError):
    pass


class DimensionMismatch(CirclabError, ValueError):
    pass


class ZeroPolynomial(CirclabError, ValueError):
    pass


class ZeroDivisor(CirclabError, ZeroDivisionError):
    pass


class DegenerateInput(CirclabError, ValueError):
    pass


class OrderOutOfRange(CirclabError, ValueError):
    pass


class OriginNotInvertible(CirclabError, ValueError):
    pass


class NotThroughOrigin(CirclabError, ValueError):
    pass


class PoleCollision(CirclabError, ValueError):
    pass


class BudgetTooSmall(CirclabError, ValueError):
    pass


class BisectionFailed(CirclabError, RuntimeError):
    pass


class DegreeTooLow(CirclabError, ValueError):
    pass


class AtInfinity(CirclabError, ValueError):
    pass


class OffQuadric(CirclabError, ValueError):
    pass


class NotContained(CirclabError, ValueError):
    pass


class InfeasibleCap(CirclabError, ValueError):
    pass


class FormulaDomain(CirclabError, ValueError):
    pass


class OutOfRange(CirclabError, ValueError):
    pass


class DegeneratePair(CirclabError, ValueError):
    pass


class IrrationalShape(CirclabError, ValueError):
    pass


class ShapeMismatch(CirclabError, AssertionError):
    pass


class CoincidentPoints(CirclabError, ValueError):
    pass


class InstanceFormatError(CirclabError, ValueError):
    """Malformed instance data; ``field`` names the offending JSON path."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
