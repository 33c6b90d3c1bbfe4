"""Exception types raised across the package."""


class LagcatError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(LagcatError, ValueError):
    pass


class FieldMismatch(LagcatError, ValueError):
    pass


class DegreeMismatch(LagcatError, ValueError):
    pass


class SpaceMismatch(LagcatError, ValueError):
    pass


class NonConvergence(LagcatError, ArithmeticError):
    pass


class NotIsotropic(LagcatError, ValueError):
    pass


class NotLagrangian(LagcatError, ValueError):
    pass


class NotPartialIsometry(LagcatError, ValueError):
    pass


class SingularBlock(LagcatError, ArithmeticError):
    """A block that must be inverted is numerically singular."""


class Singular(LagcatError, ArithmeticError):
    pass


class NotUnitaryResult(LagcatError, ArithmeticError):
    """The composed unitary failed its unitarity check."""


class NotAMorphism(LagcatError, ValueError):
    pass


class UnsupportedDegree(LagcatError, ValueError):
    pass


class NotAModule(LagcatError, ValueError):
    pass


class NotInvariant(LagcatError, ValueError):
    pass


class UnsupportedSymbols(LagcatError, ValueError):
    """A symbolic product or sum left the tail grammar."""


class NotComposableKinds(LagcatError, ValueError):
    pass


class GapWarning(UserWarning):
    """Spectral gap too small for the composition formula."""
