"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class UnitRootTestError(Exception):
    exit_code = 1


class DegenerateStatisticError(UnitRootTestError):
    """Normalizing variance is zero, so the statistic is undefined.

    ``pair_count`` is the number of ordered lag pairs with nonzero kernel
    weight; a value of zero means the bandwidth is too small for the sample.
    """

    exit_code = 2

    def __init__(self, message, pair_count=None):
        super().__init__(message)
        self.pair_count = pair_count


class BandwidthTooSmallError(DegenerateStatisticError):
    exit_code = 2

    def __init__(self, message, degenerate=None, total=None):
        super().__init__(message)
        self.degenerate = degenerate
        self.total = total


class DegenerateRegressorError(DegenerateStatisticError):
    exit_code = 2


class NoAdmissibleBandwidthError(UnitRootTestError):
    exit_code = 3

    def __init__(self, message, curve=None):
        super().__init__(message)
        self.curve = curve


class SeriesError(UnitRootTestError, ValueError):
    exit_code = 4


class CsvParseError(SeriesError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class SeriesTooShortError(SeriesError):
    pass


class OutputError(UnitRootTestError, OSError):
    exit_code = 4


class ConfigError(UnitRootTestError, ValueError):
    exit_code = 5


class ExplosionError(ConfigError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NoSupportError(UnitRootTestError, ValueError):
    """No lagged observation falls inside the kernel window around ``x``."""

    exit_code = 2


class BandwidthWarning(UserWarning):
    pass


class StationarityWarning(UserWarning):
    pass
