"""Exception hierarchy. Every numerical failure is a ``RatAdjointError``."""


class RatAdjointError(Exception):
    pass


class NonConvergence(RatAdjointError):
    """Root iteration exhausted its budget with residuals above tolerance."""


class DegreeZero(RatAdjointError, ValueError):
    pass


class ZeroDenominator(RatAdjointError, ZeroDivisionError):
    pass


class IndeterminateValue(RatAdjointError):
    """Numerator and denominator vanish together: the map was not reduced."""


class DomainViolation(RatAdjointError, ValueError):
    pass


class PoleAtOrigin(RatAdjointError):
    pass


class NotRegularValue(RatAdjointError):
    def __init__(self, z, margin, reason=""):
        self.z = z
        self.margin = margin
        super().__init__(f"{z!r} is not a regular value (margin={margin:.3e}) {reason}".rstrip())


class FiberEscape(RatAdjointError):
    pass


class PoleProximity(RatAdjointError):
    pass


class NotInH20(RatAdjointError, ValueError):
    pass


class PathThroughCriticalValue(RatAdjointError):
    pass


class MatchingAmbiguity(RatAdjointError):
    pass


class NotSelfMap(RatAdjointError):
    """The map fails the Rat(U) certification; ``reason`` names the condition."""

    def __init__(self, reason, max_modulus=None):
        self.reason = reason
        self.max_modulus = max_modulus
        super().__init__(reason)
