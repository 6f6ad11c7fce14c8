"""Exception hierarchy.

Every domain error carries a machine-readable ``code`` and a CLI exit
status so that reports can surface failures uniformly.
"""


class ContactNFError(Exception):
    code = "error"
    exit_status = 1


class ParseError(ContactNFError):
    code = "parse_error"
    exit_status = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class PreconditionError(ContactNFError):
    code = "precondition"
    exit_status = 3


class UnsupportedCase(ContactNFError):
    code = "unsupported"
    exit_status = 4


class ArithmeticObstruction(ContactNFError):
    code = "arithmetic_obstruction"
    exit_status = 5


class DimensionMismatch(PreconditionError, ValueError):
    code = "dimension_mismatch"


class SingularLinearPart(PreconditionError):
    code = "singular_linear_part"


class DegenerateJacobian(PreconditionError):
    code = "degenerate_jacobian"


class WrongOrder(PreconditionError):
    code = "wrong_order"


class NotConformal(PreconditionError):
    code = "not_conformal"


class Degenerate(PreconditionError):
    code = "degenerate"


class DegenerateDifferential(Degenerate):
    code = "degenerate_differential"


class DegeneratePresymplectic(Degenerate):
    code = "degenerate_presymplectic"


class VanishingAtOrigin(PreconditionError):
    code = "vanishing_at_origin"


class NotSingular(PreconditionError):
    code = "not_singular"


class RequiresExactSpectrum(PreconditionError):
    code = "requires_exact_spectrum"


class VerificationFailure(ContactNFError):
    """A stage could not re-verify its own post-condition."""

    code = "verification_failure"
    exit_status = 1


class FactorizationFailure(VerificationFailure):
    code = "factorization_failure"


class UnclassifiableNilpotent(VerificationFailure):
    code = "unclassifiable_nilpotent"


class TangencyNotGeneric(UnsupportedCase):
    code = "tangency_not_generic"


class FloatModeRefused(UnsupportedCase):
    code = "float_mode_refused"


class RootNotInField(ArithmeticObstruction):
    code = "root_not_in_field"


class NegativeBase(ArithmeticObstruction):
    code = "negative_base"


class IrrationalSpectrum(ArithmeticObstruction):
    code = "irrational_spectrum"


class SmallDivisor(ArithmeticObstruction):
    code = "small_divisor"


class UndecidableAtTolerance(ArithmeticObstruction):
    code = "undecidable_at_tolerance"
