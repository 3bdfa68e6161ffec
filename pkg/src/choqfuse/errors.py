"""Exception types shared across the package."""


class ChoqfuseError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatchError(ChoqfuseError, ValueError):
    """Inputs whose shapes, lengths, or counts are inconsistent with each other."""


class InvalidDensityError(ChoqfuseError, ValueError):
    """A fuzzy density vector violates its admissibility constraints."""


class NoAdmissibleLambdaError(ChoqfuseError, ArithmeticError):
    """The measure's scaling parameter cannot be bracketed (degenerate densities)."""


class NonFiniteFitnessError(ChoqfuseError, ValueError):
    """An objective function returned NaN or an infinity."""


class MatrixParseError(ChoqfuseError, ValueError):
    """A numeric matrix file could not be parsed."""


class RaggedRowsError(MatrixParseError):
    """Rows of a matrix file have inconsistent cell counts."""


class NonNumericCellError(MatrixParseError):
    """A matrix cell failed to parse as a finite number."""


class TooFewRowsError(MatrixParseError):
    """A head file needs at least one weight row plus the trailing bias row."""
