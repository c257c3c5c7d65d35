"""Exception hierarchy shared by all modules."""


class ExpansionBoundsError(Exception):
    """Base class for every error raised by this package."""


class OutOfDomain(ExpansionBoundsError, ValueError):
    pass


class InfeasibleMoment(OutOfDomain):
    """The moment ``c`` lies outside ``[0, a*T]`` (or its interior, for root solving)."""


class DegenerateDimension(OutOfDomain):
    pass


class LengthMismatch(ExpansionBoundsError, ValueError):
    pass


class UnsupportedDelta(OutOfDomain):
    pass


class NoSignChange(ExpansionBoundsError, RuntimeError):
    pass


class InfeasiblePoint(OutOfDomain):
    pass


class EmptyFeasibleSet(OutOfDomain):
    pass


class MonotoneGuardViolated(OutOfDomain):
    pass


class InvalidParity(ExpansionBoundsError, ValueError):
    pass


class EmptyOrFullSet(ExpansionBoundsError, ValueError):
    pass


class TooLarge(ExpansionBoundsError, ValueError):
    pass
