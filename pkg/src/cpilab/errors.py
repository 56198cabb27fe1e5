"""Exception hierarchy shared by all cpilab modules."""


class CPIError(Exception):
    pass


class ConfigurationError(CPIError, ValueError):
    """Invalid grid, pulse, mask, detector or experiment description."""


class GridMismatchError(ConfigurationError):
    pass


class NumericalGuardError(CPIError):
    """A sampling or windowing guard was tripped (CLI exit code 3)."""


class ResolutionError(NumericalGuardError):
    pass


class AliasingError(NumericalGuardError):
    pass


class UndersamplingError(NumericalGuardError):
    pass


class UndefinedStatsError(CPIError, ValueError):
    pass


class MetricError(CPIError):
    """Metric preconditions unmet (CLI exit code 4)."""


class NoFringeError(MetricError):
    pass


class MaskOutsideGridWarning(UserWarning):
    pass
