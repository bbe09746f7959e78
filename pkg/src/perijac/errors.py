"""Exception hierarchy shared by every module.

Each exception carries a short machine-readable ``code`` used by the CLI.
Subclasses of :class:`PreconditionError` map to exit status 2, subclasses of
:class:`InputError` to exit status 1.
"""


class AlgebraError(Exception):
    code = "algebra-error"


class InputError(AlgebraError):
    code = "input-error"


class PreconditionError(AlgebraError):
    code = "precondition-violation"


class InvalidModulusError(PreconditionError):
    code = "invalid-modulus"


class NotDivisibleError(PreconditionError):
    code = "not-divisible"


class IncompatibleError(AlgebraError):
    """Operands live in different rings or polynomial rings."""

    code = "incompatible"


class ArityError(AlgebraError):
    code = "arity-mismatch"


class ParseError(InputError):
    code = "syntax-error"

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class UnknownVariableError(ParseError):
    code = "unknown-variable"


class ExponentError(ParseError):
    code = "bad-exponent"


class InvalidLiftError(PreconditionError):
    code = "bad-lift"


class HeightRangeError(PreconditionError):
    code = "bad-height"


class NotOnVarietyError(PreconditionError):
    code = "not-on-variety"


class IdealMismatchError(PreconditionError):
    code = "ideal-mismatch"


class UndefinedDimensionError(PreconditionError):
    code = "undefined-dimension"


class GroebnerCeilingError(AlgebraError):
    """Raised when the critical-pair queue outgrows its configured ceiling."""

    code = "groebner-ceiling"


class DegreeOverflowError(AlgebraError):
    code = "degree-overflow"
