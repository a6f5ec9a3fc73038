"""Exception types raised by finsec."""


class FinsecError(Exception):
    """Base class for all finsec errors."""


class ZeroOnCircle(FinsecError, ValueError):
    """A symbol vanishes (numerically) somewhere on the sampled unit circle."""


class NotInterlacing(FinsecError, ValueError):
    pass


class SpectrumMismatch(FinsecError, ValueError):
    pass


class NegativeSquare(FinsecError, ArithmeticError):
    """A border entry squared came out negative beyond the clamp tolerance."""


class NumericalBreakdown(FinsecError, ArithmeticError):
    pass


class NotSelfAdjoint(FinsecError, ValueError):
    pass


class NotNormal(FinsecError, ValueError):
    pass


class EmptySet(FinsecError, ValueError):
    pass


class TooFewIndices(FinsecError, ValueError):
    pass
