"""Exception types raised across the package."""


class LogcaveError(Exception):
    """Base class for all errors raised by logcave."""


class MixedField(LogcaveError):
    """Operands live in two different quadratic fields."""


class ParseError(LogcaveError, ValueError):
    """A number or sequence literal could not be parsed."""


class RNotSupported(LogcaveError, ValueError):
    """The operator parameter r is outside the supported range."""


class RNotRational(LogcaveError, ValueError):
    """An operation needs a rational r but got an irrational one."""


class NegativeEntry(LogcaveError, ValueError):
    """A sequence that must be nonnegative has a negative entry."""


class NotRFactorLC(LogcaveError, ValueError):
    """Input sequence is not r-factor log-concave."""


class ThresholdTooLow(LogcaveError, ValueError):
    """The certification constant is below the value its criterion needs."""


class ParityUnsupported(LogcaveError, ValueError):
    """The operation is only defined for the other parity."""


class InvalidGaps(LogcaveError, ValueError):
    """Exponent gaps violate 1 > d_1 > ... > d_n > 0 or have the wrong length."""


class InexactPower(LogcaveError, ValueError):
    """A rational power of the base is not a rational number."""


class NotInRegion(LogcaveError, ValueError):
    """The point is not on the correct side of every hypersurface."""


class InvalidC(LogcaveError, ValueError):
    """Witness constant C is outside its admissible interval."""


class InvalidA(LogcaveError, ValueError):
    """Witness scale a does not exceed its lower bound."""


class QNotRFactorLC(LogcaveError, ValueError):
    """Witness base core q is not r-factor log-concave."""
