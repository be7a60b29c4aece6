"""Exception types shared across the package."""


class RainbowError(Exception):
    """Base class for all package-specific errors."""


class InvalidElementError(RainbowError, ValueError):
    """Element does not belong to the group (wrong arity or unreduced coordinate)."""


class InvalidGeneratorError(RainbowError, ValueError):
    """A nonzero generator was required."""


class NotASubgroupError(RainbowError, ValueError):
    """Input set is not closed under addition or misses the identity."""


class InvalidShapeError(RainbowError, ValueError):
    """Hair counts do not describe a three-spine caterpillar of order p^k."""


class PartitionShapeMismatchError(RainbowError, ValueError):
    """Role-class sizes of a partition disagree with the requested shape."""


class ModelMismatchError(RainbowError, ValueError):
    """Partition spine roles are not placed at the elements a, 0, b of the model."""


class UnsupportedInstanceError(RainbowError, ValueError):
    """Group too small to carry a three-spine caterpillar analysis."""


class InfeasibleShapeError(RainbowError):
    """construct() was called on a shape the feasibility predicate rejects."""

    def __init__(self, verdict):
        super().__init__(verdict.detail)
        self.verdict = verdict


class ConstructionError(RainbowError):
    """No recipe and no completion search produced a labeling (should not happen
    on predicate-feasible shapes; raised instead of returning garbage)."""


class InconsistentSeedError(RainbowError, ValueError):
    """Seed partition already violates edge-label uniqueness or quotas."""
