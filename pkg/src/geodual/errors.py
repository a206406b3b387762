"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GeodualError(Exception):
    """Base class for every error raised by this package."""


class DegreeMismatch(GeodualError, ValueError):
    pass


class LimitExceeded(GeodualError):
    """A search bound was hit; the answer is unknown, not negative."""

    def __init__(self, message: str, count: int | None = None):
        super().__init__(message)
        self.count = count


class Incomplete(GeodualError):
    """An operation needed a complete coset table but got a partial one."""


class Inconclusive(GeodualError):
    pass


class ParseError(GeodualError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NotPrime(GeodualError, ValueError):
    pass


class SurfaceError(GeodualError, ValueError):
    """A flag system violates one of the surface axioms."""

    condition = "surface"


class NotInvolution(SurfaceError):
    condition = "NotInvolution"


class HasFixedPoint(SurfaceError):
    condition = "HasFixedPoint"


class NotTransitive(SurfaceError):
    condition = "NotTransitive"


class BadFaceCycle(SurfaceError):
    condition = "BadFaceCycle"


class BadEdgeCycle(SurfaceError):
    condition = "BadEdgeCycle"
