"""Error types shared across the library.

Every error carries a stable ``code`` string that the CLI prints and that
tests match against, so the exception class hierarchy can evolve without
breaking the error contract.
"""


class PerronvalError(Exception):
    code = "ERROR"

    def __init__(self, message=""):
        super().__init__(message or self.code)
        self.message = message or self.code


class InputError(PerronvalError):
    """Malformed document, literal, or argument."""
    code = "INPUT"


class DivisionByZero(PerronvalError):
    code = "DIVISION-BY-ZERO"


class ContextMismatch(PerronvalError):
    code = "CONTEXT-MISMATCH"


class FrameMismatch(PerronvalError):
    code = "FRAME-MISMATCH"


class NotASubgroup(PerronvalError):
    code = "NOT-A-SUBGROUP"


class NoRelation(PerronvalError):
    code = "NO-RELATION"


class AmbiguousRelation(PerronvalError):
    code = "AMBIGUOUS"


class ValueMismatch(PerronvalError):
    code = "VALUE-MISMATCH"


class StepBoundExceeded(PerronvalError):
    code = "STEP-BOUND-EXCEEDED"


class TruncationExhausted(PerronvalError):
    code = "TRUNCATION-EXHAUSTED"


class PreconditionError(PerronvalError):
    code = "PRECONDITION"


class PreconditionValueInGroup(PreconditionError):
    code = "PRECONDITION-VALUE-IN-GROUP"


class BinomialObstruction(PerronvalError):
    code = "BINOMIAL-OBSTRUCTION"


class DefectSuspected(PerronvalError):
    """Terminal diagnostic: the approximation ladder keeps increasing inside
    the base value group up to the computation bound."""
    code = "DEFECT-SUSPECTED"

    def __init__(self, message="", ladder=None, reason=None):
        super().__init__(message)
        self.ladder = list(ladder or [])
        self.reason = reason


class Case2Signal(PerronvalError):
    """The last variable agrees with an element of the base completion."""
    code = "CASE2-SIGNAL"

    def __init__(self, message="", approx=None):
        super().__init__(message)
        self.approx = approx


class NotCase2(PerronvalError):
    code = "NOT-CASE2"


class NotOstrowski(PerronvalError):
    code = "NOT-OSTROWSKI"


class JumpNotGtOne(PerronvalError):
    code = "JUMP-NOT-GT-ONE"


class Unsupported(PerronvalError):
    """Operation outside the implemented scope (documented restriction)."""
    code = "UNSUPPORTED"


class InternalContradiction(PerronvalError):
    """A theorem-backed assertion failed; indicates a bug or bad input."""
    code = "INTERNAL-CONTRADICTION"
