"""Exception hierarchy for the z3hopf toolkit."""


class Z3HopfError(Exception):
    """Base class for all errors raised by this package."""


class DivisionByZero(Z3HopfError, ZeroDivisionError):
    """Division by the zero scalar."""


class PoleAtPoint(Z3HopfError):
    """A rational function was evaluated at a zero of its denominator."""


class RankMismatch(Z3HopfError):
    """Tensor operands have different ranks."""


class MissingRule(Z3HopfError):
    """Two adjacent out-of-order letters have no rewrite rule."""


class InvalidRule(Z3HopfError):
    """A rewrite rule violates a structural invariant (ordering, shape)."""


class NonInvertibleConjugation(Z3HopfError):
    """Deriving an inverse-letter rule produced an inconsistent result."""


class MissingImage(Z3HopfError):
    """A substitution has no image for a generator."""


class InhomogeneousTransformation(Z3HopfError):
    """A linear transformation image is not grade-homogeneous."""


class Unsolvable(Z3HopfError):
    """A linear solve for a derived rule coefficient is inconsistent."""


class NotInvertible(Z3HopfError):
    """Inverse requested of an element that is not a unit monomial."""


class UnsupportedInput(Z3HopfError):
    """Operation applied outside its defined domain."""


class UnknownPreset(Z3HopfError):
    """Requested presentation is not in the catalog."""


class UnknownSuite(Z3HopfError):
    """Requested check suite does not exist."""


class ExpressionError(Z3HopfError):
    """Base class for expression parsing failures."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (column {pos + 1})")
        self.pos = pos


class ExprSyntaxError(ExpressionError):
    """Malformed expression source."""


class UnknownSymbol(ExpressionError):
    """Expression references a symbol the presentation does not declare."""
