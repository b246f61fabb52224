"""Zeta functions of hyperelliptic curves y^2 = P(x) over F_q, q = p^n, p odd.

Frobenius is computed on the minus part of Monsky-Washnitzer cohomology
with fixed-point p-adic arithmetic; a brute-force counter cross-checks.
"""

__version__ = "0.1.0"

from .curve import CurveSpec, LiftedCurve, OddYForm, exact_form, fold_into_poles, validate_curve
from .errors import (
    BudgetExceeded,
    CurveError,
    EvenCharacteristic,
    GuardExhausted,
    HypZetaError,
    InconsistentResult,
    LiftAmbiguous,
    NotMonic,
    NotRational,
    NotSquarefree,
    NotUnit,
    ParseError,
    PrecisionError,
    WrongDegree,
)
from .frobenius import frobenius_basis_image
from .oracle import FqTower, naive_count, quadratic_character, verify
from .padic import PadicParams, ZqElem, default_modulus, make_params, reduce_precision, zq_inv, zq_sigma
from .poly import BezoutContext, ZqPoly, bezout_decompose, poly_derivative, poly_divmod
from .reduction import (
    BasisVector,
    FrobMatrix,
    frobenius_matrix,
    reduce_infinity_step,
    reduce_pole_step,
    reduce_to_basis,
)
from .zeta import (
    PrecisionPlan,
    ZetaResult,
    assemble_zeta,
    counts_from_Q,
    lift_Q,
    q_power_matrix,
    required_precision,
)

__all__ = [
    "BasisVector", "BezoutContext", "BudgetExceeded", "CurveError", "CurveSpec",
    "EvenCharacteristic", "FqTower", "FrobMatrix", "GuardExhausted", "HypZetaError",
    "InconsistentResult", "LiftAmbiguous", "LiftedCurve", "NotMonic", "NotRational",
    "NotSquarefree", "NotUnit", "OddYForm", "PadicParams", "ParseError", "PrecisionError",
    "PrecisionPlan", "WrongDegree", "ZetaResult", "ZqElem", "ZqPoly", "assemble_zeta",
    "bezout_decompose", "counts_from_Q", "default_modulus", "exact_form", "fold_into_poles",
    "frobenius_basis_image", "frobenius_matrix", "lift_Q", "make_params", "naive_count",
    "poly_derivative", "poly_divmod", "q_power_matrix", "quadratic_character",
    "reduce_infinity_step", "reduce_pole_step", "reduce_precision", "reduce_to_basis",
    "required_precision", "validate_curve", "verify", "zq_inv", "zq_sigma",
]  # fmt: skip
