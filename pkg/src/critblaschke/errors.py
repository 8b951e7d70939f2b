"""Exceptions raised by the numerical routines."""


class IndecisiveRoot(ArithmeticError):
    """A critical root sits too close to the unit circle to classify."""


class JacobianSingular(ArithmeticError):
    """The finite-difference Jacobian is numerically rank deficient."""


class NewtonDiverged(ArithmeticError):
    """The corrector failed to bring the residual below tolerance."""


class BoundaryEscape(ArithmeticError):
    """A zero left the guarded interior of the disk during correction."""


class StepUnderflow(ArithmeticError):
    """The continuation step shrank below its floor.

    ``report`` holds the last accepted state as an unconverged report.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SlopeAmbiguous(ArithmeticError):
    """A log-log slope estimate is not close to any integer."""
