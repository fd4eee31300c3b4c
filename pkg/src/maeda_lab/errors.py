"""Error types shared across the lab.

Every error raised for bad input carries a machine-readable ``code`` which
the command line reports on standard error.
"""


class LabError(ValueError):
    """Base class for input and precondition errors."""

    code = "lab_error"


class DegreeOutOfRangeError(LabError):
    code = "degree_out_of_range"


class InvalidCycleLengthError(LabError):
    code = "invalid_d"


class PreconditionError(LabError):
    code = "precondition_violation"


class NonpositiveDenominatorError(LabError):
    code = "nonpositive_denominator"


class EmptyTowerError(LabError):
    code = "empty_tower"


class NotSquarefreeError(LabError):
    code = "not_squarefree"


class ZeroPolynomialError(LabError):
    code = "zero_polynomial"


class LeadingCoefficientVanishesError(LabError):
    code = "leading_coefficient_vanishes"


class PrecisionTooSmallError(LabError):
    code = "precision_too_small"


class PolynomialParseError(LabError):
    code = "polynomial_parse"


class UsageError(LabError):
    code = "usage_error"


class ExactnessError(ArithmeticError):
    """An identity that must hold exactly did not (a bug, never bad input)."""
