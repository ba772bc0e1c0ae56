"""Exception types raised across the package."""


class PainleveDynError(Exception):
    """Base class for all package errors."""


class AmbiguousNearWall(PainleveDynError):
    """A wall condition is neither clearly zero nor clearly nonzero."""


class InconsistentWitness(PainleveDynError):
    """Algebraic and geometric configuration tests disagree."""


class UnrecognizedGraph(PainleveDynError):
    """The (-2)-curve graph is not one of the eight admissible types."""


class NotOnConicStratum(PainleveDynError):
    """Parameter does not satisfy b1*b2*b3*b4 = 1."""


class EmptyWord(PainleveDynError):
    pass


class NotAS(PainleveDynError):
    """Word is not analytically stable (first letter equals last letter)."""


class NotNonElementary(PainleveDynError):
    pass


class OffSurface(PainleveDynError):
    """Point does not lie on the cubic surface within tolerance."""


class DegenerateChart(PainleveDynError):
    pass


class BudgetExhausted(PainleveDynError):
    """Solver ran out of starts while still discovering new points."""

    def __init__(self, message, points=None):
        super().__init__(message)
        self.points = points


class AuditMismatch(PainleveDynError):
    def __init__(self, message, discrepancy):
        super().__init__(message)
        self.discrepancy = discrepancy


class ParseError(PainleveDynError):
    pass
