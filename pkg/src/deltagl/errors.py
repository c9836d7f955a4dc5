"""Exception hierarchy.  Every error carries a stable ``code`` used by the CLI."""

from __future__ import annotations


class DeltaGLError(Exception):
    """Base class; ``code`` is the class name unless overridden."""

    @property
    def code(self) -> str:
        return type(self).__name__


class ContextMismatch(DeltaGLError):
    pass


class NotAUnit(DeltaGLError):
    pass


class InsufficientPrecision(DeltaGLError):
    pass


class NotDivisible(DeltaGLError):
    pass


class NotOneUnit(DeltaGLError):
    pass


class NuDivisibleByP(DeltaGLError):
    pass


class NotInvertible(DeltaGLError):
    pass


class DimensionMismatch(DeltaGLError):
    pass


class NotOneUnitMatrix(DeltaGLError):
    pass


class NotRegular(DeltaGLError):
    pass


class CharPolyDoesNotSplit(DeltaGLError):
    """Residue characteristic polynomial has a non-rational root; try a larger f."""


class OrderMismatch(DeltaGLError):
    pass


class NotSplit(DeltaGLError):
    pass


class PDividesN(DeltaGLError):
    pass


class SymmetryMismatch(DeltaGLError):
    pass


class NoSqrtMinusOne(DeltaGLError):
    pass


class NotInCentralizer(DeltaGLError):
    pass


class DomainError(DeltaGLError):
    pass


class DStarStarNotUnit(DeltaGLError):
    pass


class SeedNotInvertible(DeltaGLError):
    pass


class LiftDefect(DeltaGLError):
    pass


class TooLarge(DeltaGLError):
    pass


class InvalidInput(DeltaGLError):
    pass
