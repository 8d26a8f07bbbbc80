"""Винятки пакета. Коди виходу CLI визначаються в modules/cli/services.py."""


class DistSigError(Exception):
    pass


class InvalidGraphError(DistSigError, ValueError):
    pass


class DimensionMismatchError(DistSigError, ValueError):
    pass


class InvalidDistributionError(DistSigError, ValueError):
    pass


class EnumerationLimitError(DistSigError):
    """Точний перебір неможливий у межах заданого ліміту."""

    def __init__(self, message: str, count: int | None = None):
        super().__init__(message)
        self.count = count


class ConvergenceError(DistSigError):
    pass


class InfeasibleProblemError(DistSigError):
    pass


class DatasetFormatError(DistSigError, ValueError):
    def __init__(self, path: str, lineno: int | None, message: str):
        where = f"{path}:{lineno}" if lineno is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = path
        self.lineno = lineno


class TrainingDivergedError(DistSigError):
    def __init__(self, epoch: int, loss: float):
        super().__init__(f"non-finite loss {loss!r} at epoch {epoch}")
        self.epoch = epoch
        self.loss = loss


class BoundViolationError(DistSigError):
    pass


class InvalidMatrixError(DistSigError, ValueError):
    pass


class SplitError(DistSigError, ValueError):
    """Замало вузлів для вибірки заданого розміру."""
