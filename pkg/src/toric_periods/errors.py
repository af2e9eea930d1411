"""Exception hierarchy shared by every layer of the package."""


class ToricError(Exception):
    """Base class for all package errors."""


# base field
class DivisionByZero(ToricError, ZeroDivisionError):
    pass


class PrecisionExhausted(ToricError):
    pass


class ZeroInput(ToricError, ValueError):
    pass


class ZeroResidue(ToricError, ValueError):
    pass


class DomainViolation(ToricError, ValueError):
    pass


# quadratic algebras
class NonInvertible(ToricError, ZeroDivisionError):
    pass


class SplitKindUnsupported(ToricError, ValueError):
    pass


class DepthExceedsPrecision(ToricError, ValueError):
    pass


# characters
class CentralMismatch(ToricError, ValueError):
    pass


class ConductorTooSmall(ToricError, ValueError):
    pass


# quaternions
class DegenerateGram(ToricError, ValueError):
    pass


class NoEmbedding(ToricError):
    pass


class DivisionSideUnsupported(ToricError, ValueError):
    pass


# cuspidal data
class NotMinimal(ToricError, ValueError):
    pass


class PrecisionTooLow(ToricError, ValueError):
    pass


class OutsideDomain(ToricError, ValueError):
    pass


class DepthInsufficient(ToricError, ValueError):
    pass


# period engine
class StarViolated(ToricError, ValueError):
    """E is isomorphic to L and one of the twisted conductors is at most 1."""


class OutOfTableRange(ToricError, ValueError):
    pass


class NotApplicable(ToricError, ValueError):
    pass


class NoSolution(ToricError):
    pass


class ExistenceFails(ToricError):
    pass


class DepthUnstable(ToricError):
    pass


# orbital integrals
class WeightViolation(ToricError, ValueError):
    pass


# configuration
class ConfigError(ToricError, ValueError):
    pass
