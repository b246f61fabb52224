"""Exception hierarchy.

Errors are grouped by what went wrong so that callers (and the CLI exit
codes) can tell bad input from a precision problem.
"""


class HypZetaError(Exception):
    """Base class for every error raised by this package."""


class ParameterMismatch(HypZetaError, ValueError):
    """Operands live over different rings or different curves."""


class InvalidParameters(HypZetaError, ValueError):
    """A field or precision parameter is out of range."""


class NotUnit(HypZetaError, ZeroDivisionError):
    """Inversion of an element that vanishes modulo p."""


class NewtonFailure(HypZetaError, ArithmeticError):
    """Hensel/Newton lifting did not converge (inseparable modulus)."""


class NonUnitLeading(HypZetaError, ZeroDivisionError):
    """Polynomial division by a divisor whose leading coefficient is not a unit."""


# -- curve validation -------------------------------------------------------


class CurveError(HypZetaError, ValueError):
    """The input does not describe an admissible hyperelliptic curve."""


class EvenCharacteristic(CurveError):
    """p = 2 is not supported: y^2 = P(x) is not a valid model there."""


class NotMonic(CurveError):
    """P(x) must be monic."""


class WrongDegree(CurveError):
    """P(x) must have odd degree 2g+1 >= 3."""


class NotSquarefree(CurveError):
    """P(x) has a repeated root over the algebraic closure of F_q."""


# -- precision --------------------------------------------------------------


class PrecisionError(HypZetaError, ArithmeticError):
    """The working precision was not enough to finish the computation."""


class GuardExhausted(PrecisionError):
    """An exact division by a power of p found a non-divisible dividend."""


class NotRational(PrecisionError):
    """A coefficient of the characteristic polynomial is not in Z_p."""


class LiftAmbiguous(PrecisionError):
    """No unique integer in the Weil window matches a residue."""


class InconsistentResult(PrecisionError):
    """A structural check on the output (determinant, functional equation) failed."""


# -- oracle / cli -----------------------------------------------------------


class BudgetExceeded(HypZetaError):
    """Brute-force enumeration would exceed the configured budget."""


class ParseError(HypZetaError, ValueError):
    """Malformed command line or curve file."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
