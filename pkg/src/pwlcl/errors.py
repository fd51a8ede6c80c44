"""Exception hierarchy.

Domain errors mean "this ordinate lies outside a half-map's domain" and are
expected during domain discovery; everything else is a genuine failure.
"""


class PwlError(Exception):
    """Base class for every error raised by :mod:`pwlcl`."""


class A12Zero(PwlError):
    """a12 = 0: no periodic orbit is possible and the canonical form is undefined."""


class DomainError(PwlError):
    """A requested ordinate lies outside the domain of a half-map.

    ``reached`` is the largest abscissa attained before the failure when the
    error comes from tracing an orbit; domain discovery uses it.
    """

    def __init__(self, msg, reached=None):
        super().__init__(msg)
        self.reached = reached


class NoReturn(DomainError):
    def __init__(self, msg, t_max=None):
        super().__init__(msg)
        self.t_max = t_max


class TangentStart(DomainError):
    pass


class WViolation(DomainError):
    pass


class LeftQ(DomainError):
    pass


class EmptyCommonDomain(DomainError):
    pass


class StepLimit(PwlError):
    pass


class AnchorStall(PwlError):
    pass


class Contradiction(PwlError):
    """A computed result contradicts a proved property (uniqueness, the sign rule)."""


class NonHyperbolic(PwlError):
    pass


class ClosureFailure(PwlError):
    pass


class WNonPositive(PwlError):
    pass


class ZeroY1(PwlError):
    pass


class DiagonalPoint(PwlError):
    pass


class DegenerateF(PwlError):
    pass


class OutsideQ(PwlError):
    pass


class NotOnGamma(PwlError):
    pass


class ConfigError(PwlError):
    pass
