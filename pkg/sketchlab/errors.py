from sketchlab.constants import EXIT_IO, EXIT_NUMERICAL, EXIT_SPEC


class SketchlabError(Exception):
    """Base class for every error raised by sketchlab."""

    exit_code = EXIT_SPEC


class ShapeError(SketchlabError, ValueError):
    """Operand shapes are incompatible."""


class DomainError(SketchlabError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalError(SketchlabError, ArithmeticError):
    """LAPACK failed to converge or a system was numerically singular."""

    exit_code = EXIT_NUMERICAL

    def __init__(self, message, slice_index=None):
        if slice_index is not None:
            message = f"slice {slice_index}: {message}"
        super().__init__(message)
        self.slice_index = slice_index


class SpecValidationError(SketchlabError, ValueError):
    """An ExperimentSpec failed validation; `violations` lists every problem."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid experiment spec: " + "; ".join(self.violations))


class TensorFileError(SketchlabError, OSError):
    """A tensor or results file could not be read, parsed or written."""

    exit_code = EXIT_IO

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset
