"""Exception types shared across the package."""


class GrasscombError(Exception):
    """Base class for every error raised by grasscomb."""


class EvaluationError(GrasscombError, KeyError):
    """A polynomial was evaluated without a value for one of its variables."""

    def __str__(self):
        return Exception.__str__(self)


class ShapeError(GrasscombError, ValueError):
    """Matrix or layer dimensions do not fit the operation."""


class SingularMatrixError(GrasscombError, ArithmeticError):
    """Exact linear algebra hit a zero determinant."""


class AlgebraError(GrasscombError, ValueError):
    """Grassmann elements from algebras of different sizes were combined."""


class PreconditionError(GrasscombError, ValueError):
    pass


class ArgumentError(GrasscombError, ValueError):
    pass


class ParseError(GrasscombError, ValueError):
    pass


class TruncationError(GrasscombError, ValueError):
    """A lattice window is too small to hold every path endpoint."""
