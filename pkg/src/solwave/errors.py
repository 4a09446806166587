"""Exception hierarchy shared by all solwave modules."""


class SolwaveError(Exception):
    """Base class for every error raised by the package."""


class InvalidArgument(SolwaveError, ValueError):
    pass


class DegenerateSystem(SolwaveError, ValueError):
    """Raised when Delta = (c-1)^2 + 2g <= 0, so no saddle-center pair exists."""


class NotAnEquilibrium(SolwaveError, ValueError):
    pass


class QuadratureFailure(SolwaveError, ArithmeticError):
    pass


class NoRoot(SolwaveError):
    pass


class BracketFailure(SolwaveError, ArithmeticError):
    """M* does not change sign over a bracket that the case analysis says it should."""


class IntegrationError(SolwaveError, ArithmeticError):
    pass


class StepUnderflow(IntegrationError):
    pass


class MaxStepsExceeded(IntegrationError):
    pass


class NonFiniteState(IntegrationError):
    pass
