"""Exception types shared across the package."""


class PartorqError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(PartorqError):
    """Operand shapes are incompatible."""


class RankDeficient(PartorqError):
    """A matrix that must have full row rank is numerically rank deficient."""


class NotPositiveDefinite(PartorqError):
    """A weighting matrix failed the symmetry or Cholesky test."""


class Singular(PartorqError):
    """A square system is numerically singular (optionally names a leg)."""

    def __init__(self, message: str, leg: int | None = None):
        super().__init__(message)
        self.leg = leg


class Unreachable(PartorqError):
    """A pose lies outside the workspace of one leg."""

    def __init__(self, message: str, leg: int | None = None):
        super().__init__(message)
        self.leg = leg


class ModelMismatch(PartorqError):
    """An operation was applied to the wrong contact model."""


class NoSolution(PartorqError):
    """The virtual-mass constraint system admits no solution."""


class InvalidVirtualDistribution(PartorqError):
    """A virtual-inertia distribution violates its equivalence constraints."""


class ZeroMassElement(PartorqError):
    """An element with zero mass (or zero inertia) cannot be accelerated."""


class ZeroTorque(PartorqError):
    """A zero torque vector cannot be scaled to the actuator limit."""


class EmptyIntersection(PartorqError):
    """A slicing plane does not intersect the feasible set."""


class SceneError(PartorqError):
    """A scene file is missing fields or fails validation."""
