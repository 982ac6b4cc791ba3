"""
Exception hierarchy for the dephasing laboratory
Every error carries the exit code the command line reports for it.
"""


class LabError(Exception):
    """Base class; numerical failures exit with code 3."""
    exit_code = 3


class ConfigError(LabError):
    exit_code = 2


class InvalidParameter(LabError, ValueError):
    """A model or state parameter outside its admissible range."""
    exit_code = 2


class InvalidCorrelation(InvalidParameter):
    pass


class SingularCovariance(InvalidParameter):
    pass


class InvalidSchedule(InvalidParameter):
    pass


class InvalidState(InvalidParameter):
    pass


class NonHermitianInput(LabError):
    pass


class DimensionMismatch(LabError):
    pass


class InvalidDensityMatrix(LabError):
    pass


class MapNotPositive(LabError):
    """Decoherence functions that do not define a positive map."""


class EigensolverNotConverged(LabError):
    pass


class QuadratureNotConverged(LabError):
    pass
