"""Exception hierarchy.

Each class carries the process exit code the command-line front end maps it to.
"""


class XWignerError(Exception):
    exit_code = 1


class ConfigError(XWignerError, ValueError):
    """Invalid physical or run configuration.

    ``field`` names the offending parameter when there is one.
    """

    exit_code = 2

    def __init__(self, message, field=None):
        self.field = field
        if field is not None and field not in message:
            message = f"{field}: {message}"
        super().__init__(message)


class NumericalError(XWignerError, ArithmeticError):
    exit_code = 3


class FocusSingularityError(NumericalError):
    """Packet width collapsed below the representable floor."""


class DegenerateOverlapError(NumericalError):
    """Overlap too small to normalise a quasi-probability."""


class TruncationError(NumericalError):
    """Sampled wavefunction has not decayed at the ends of its axis."""


class CoverageError(NumericalError):
    """Angular coverage of a sinogram is too small for inversion."""


class ConsistencyError(NumericalError):
    """Two routes to the same quantity disagree beyond tolerance."""


class GridIOError(XWignerError, OSError):
    exit_code = 4
