"""Single-depot asymmetric TSP workbench."""

from .core import (
    Budget,
    Instance,
    PreconditionError,
    RandomSource,
    SolveReport,
    Tour,
    ValidationError,
    derive_child,
    evaluate_tour,
    validate_instance,
)

__all__ = [
    "Budget",
    "Instance",
    "PreconditionError",
    "RandomSource",
    "SolveReport",
    "Tour",
    "ValidationError",
    "derive_child",
    "evaluate_tour",
    "validate_instance",
]
__version__ = "0.1.0"
