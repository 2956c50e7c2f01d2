"""Exception types raised across the package."""


class TsNetError(ValueError):
    """Base class for every error raised by tsnetph."""


class SeriesTooShort(TsNetError):
    pass


class KTooLarge(TsNetError):
    pass


class UnweightedGraph(TsNetError):
    pass


class Disconnected(TsNetError):
    pass


class TooLarge(TsNetError):
    pass


class SizeMismatch(TsNetError):
    pass


class CapNotFinite(TsNetError):
    pass


class EmptyDataset(TsNetError):
    pass


class ZeroPowerSignal(TsNetError):
    pass


class ClassTooSmall(TsNetError):
    pass


class ConfigError(TsNetError):
    """Invalid pipeline configuration (CLI exit code 1)."""


class DataError(TsNetError):
    """Problem with user-supplied data (CLI exit code 2)."""


class EmptyFile(DataError):
    pass


class ParseError(DataError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


class SeriesFailure(DataError):
    """A single series failed inside a pipeline run."""

    def __init__(self, series_id: str, index: int, cause: Exception):
        super().__init__(f"series {series_id!r} (row {index}) failed: {cause}")
        self.series_id = series_id
        self.index = index
        self.cause = cause
