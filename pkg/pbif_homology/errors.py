class PbifError(Exception):
    """Base class for computation errors."""


class DimensionMismatchError(PbifError):
    pass


class EvaluationError(PbifError):
    pass


class NormalizationError(PbifError):
    pass


class DivergenceError(PbifError):
    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"non-finite state at step {step}")


class EmptySampleError(PbifError):
    pass


class DegenerateDataError(PbifError):
    pass


class UnsupportedDimensionError(PbifError):
    pass


class GridMismatchError(PbifError):
    pass


class UnknownFamilyError(PbifError):
    pass


class FormatError(PbifError):
    pass


def with_context(err: PbifError, context: str) -> PbifError:
    """Same error class, message prefixed with sweep context."""
    if isinstance(err, DivergenceError):
        return DivergenceError(err.step, f"{context}: {err}")
    return type(err)(f"{context}: {err}")
