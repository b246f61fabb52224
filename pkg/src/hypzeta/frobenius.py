"""Frobenius lift of the basis differentials.

With E = P^sigma(x^p) - P(x)^p the lift of y satisfies

    (y^sigma)^(-r) = y^(-pr) * sum_k binom(-r/2, k) E^k y^(-2pk),

and F(dx) = p x^(p-1) dx.  Every E^k is divisible by p^k, so the k-th term
of F(x^i dx / y^r) carries p^(k+1) and truncating after k = K is exact
modulo p^(K+2).
"""

from __future__ import annotations

from fractions import Fraction

from .curve import LiftedCurve, OddYForm
from .errors import InvalidParameters
from .padic import PadicParams, ZqElem
from .poly import ZqPoly


def binom_coefficient(k: int, r: int = 1) -> Fraction:
    """binom(-r/2, k) as an exact rational."""
    a = Fraction(-r, 2)
    out = Fraction(1)
    for i in range(1, k + 1):
        out *= (a - i + 1) / i
    return out


def binom_half(k: int, params: PadicParams, r: int = 1) -> ZqElem:
    """binom(-r/2, k) as a residue; p-integral because p is odd."""
    c = binom_coefficient(k, r)
    if c.denominator % params.p == 0:
        raise InvalidParameters(f"binom(-{r}/2, {k}) is not {params.p}-integral")
    M = params.pN
    return ZqElem(params, c.numerator * pow(c.denominator, -1, M) % M)


def frobenius_basis_image(curve: LiftedCurve, i: int, K: int | None = None, r: int = 1) -> OddYForm:
    """Truncated image of x^i dx / y^r under the p-power Frobenius lift.

    Term k sits in slot (p(r+2k) - 1)/2 and equals p binom(-r/2,k) x^(pi+p-1) E^k.
    """
    g = curve.g
    if not 0 <= i <= 2 * g - 1:
        raise InvalidParameters(f"basis index {i} outside [0, {2 * g - 1}]")
    if K is None:
        K = curve.prec - 1
    if K < 0:
        raise InvalidParameters("truncation order must be >= 0")
    p, R = curve.p, curve.params
    base = ZqPoly.monomial(R, p * i + p - 1, p)
    terms = {}
    Ek = ZqPoly(R, [1])
    for k in range(K + 1):
        terms[(p * (r + 2 * k) - 1) // 2] = base * Ek * binom_half(k, R, r)
        Ek = Ek * curve.E
    return OddYForm(curve, terms)
