# This makes the error types available when importing from the package
from .errors import (
    ApproximationError,
    CancellationError,
    DivergenceError,
    DomainError,
    InsufficientPrecisionError,
    InsufficientSequenceError,
    LeadingCoefficientError,
    PoleError,
)

__all__ = [
    'ApproximationError',
    'CancellationError',
    'DivergenceError',
    'DomainError',
    'InsufficientPrecisionError',
    'InsufficientSequenceError',
    'LeadingCoefficientError',
    'PoleError',
]
