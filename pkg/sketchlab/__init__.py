"""Double-sketch recovery of low-rank matrices and low-tubal-rank tensors."""

from sketchlab.errors import (
    DomainError,
    NumericalError,
    ShapeError,
    SketchlabError,
    SpecValidationError,
    TensorFileError,
)

__version__ = "0.1.0"
