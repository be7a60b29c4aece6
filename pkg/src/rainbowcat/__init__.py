"""Rainbow labelings of three-spine caterpillars over elementary abelian groups."""

from .errors import (
    ConstructionError,
    InfeasibleShapeError,
    RainbowError,
    UnsupportedInstanceError,
)
from .group import GroupParams
from .labeling import Labeling, Shape, make_shape, verify

__all__ = [
    "ConstructionError",
    "GroupParams",
    "InfeasibleShapeError",
    "Labeling",
    "RainbowError",
    "Shape",
    "UnsupportedInstanceError",
    "make_shape",
    "verify",
]

__version__ = "0.1.0"
