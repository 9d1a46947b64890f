"""Exception hierarchy shared by every module of the package."""

__all__ = [
    "ZDipError",
    "EmptyInput",
    "NonFiniteValue",
    "SampleTooSmall",
    "InvalidGridPoint",
    "InvalidReplicates",
    "DegenerateEnsemble",
    "BelowTableMinimum",
    "TableError",
    "FormatVersionMismatch",
    "CorruptTable",
    "MissingColumn",
    "InsufficientEnsemble",
    "InvalidConfig",
    "InvalidMixture",
    "UnknownPreset",
]


class ZDipError(ValueError):
    """Base class for all errors raised by :mod:`zdip`."""

    #: position of the failing item when raised from a batch/grid operation
    batch_index = None


class EmptyInput(ZDipError):
    pass


class NonFiniteValue(ZDipError):
    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        super().__init__(f"non-finite value {value!r} at index {index}")


class SampleTooSmall(ZDipError):
    def __init__(self, n, minimum):
        self.n = n
        self.minimum = minimum
        super().__init__(f"sample size {n} is below the minimum of {minimum}")


class InvalidGridPoint(ZDipError):
    pass


class InvalidReplicates(ZDipError):
    pass


class DegenerateEnsemble(ZDipError):
    pass


class BelowTableMinimum(ZDipError):
    pass


class TableError(ZDipError):
    """Problems with a persisted null table."""


class FormatVersionMismatch(TableError):
    pass


class CorruptTable(TableError):
    pass


class MissingColumn(TableError):
    pass


class InsufficientEnsemble(ZDipError):
    pass


class InvalidConfig(ZDipError):
    pass


class InvalidMixture(ZDipError):
    pass


class UnknownPreset(ZDipError):
    pass


def with_index(exc, index):
    """Tag `exc` with the batch/grid position it came from and return it."""
    exc.batch_index = index
    if exc.args:
        exc.args = (f"[item {index}] {exc.args[0]}",) + exc.args[1:]
    return exc
