"""Curve model y^2 = P(x), its p-adic lift, and odd differential forms."""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import CurveError, NotMonic, NotSquarefree, ParameterMismatch, WrongDegree
from .padic import PadicParams, ZqElem, make_params
from .poly import BezoutContext, ZqPoly, raw_pow


@dataclass(frozen=True)
class CurveSpec:
    """Raw curve data over F_q.

    ``field`` is the residue field F_q as a precision-1 :class:`PadicParams`;
    ``Pbar`` lists the coefficients of P(x), constant term first, each an
    n-tuple of F_p coordinates in the basis 1, t, ..., t^(n-1).
    """

    field: PadicParams
    Pbar: tuple[tuple[int, ...], ...]

    @classmethod
    def create(cls, p: int, coeffs, n: int = 1, modulus=None) -> CurveSpec:
        field = make_params(p, n, 1, modulus)
        rows = []
        for c in coeffs:
            if isinstance(c, int):
                rows.append(field.raw(c))
            else:
                rows.append(field.raw(tuple(c)))
        while rows and not any(rows[-1]):
            rows.pop()
        return cls(field, tuple(rows))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def degree(self) -> int:
        return len(self.Pbar) - 1

    @property
    def g(self) -> int:
        return (self.degree - 1) // 2

    def coefficient_list(self):
        """Plain-int view for n = 1, nested lists otherwise."""
        if self.n == 1:
            return [c[0] for c in self.Pbar]
        return [list(c) for c in self.Pbar]


def validate_curve(spec: CurveSpec, prec: int = 1) -> LiftedCurve:
    """Check the hypotheses on P and build the lift at precision ``prec``.

    p = 2 is already rejected when the field parameters are built.
    """
    F = spec.field
    deg = spec.degree
    if deg < 3 or deg % 2 == 0:
        raise WrongDegree(f"deg P = {deg}; need odd degree 2g+1 >= 3")
    if spec.Pbar[-1] != F.one:
        raise NotMonic(f"leading coefficient {list(spec.Pbar[-1])} is not 1")
    return _lift(spec, prec)


@functools.lru_cache(maxsize=64)
def _lift(spec: CurveSpec, prec: int) -> LiftedCurve:
    return LiftedCurve(spec, prec)


class LiftedCurve:
    """P lifted to W/p^prec with digits in [0, p), plus derived data.

    E = P^sigma(x^p) - P(x)^p is the numerator of the Frobenius lift of y;
    ``bezout`` holds U, V with P*U + P'*V = 1.
    """

    def __init__(self, spec: CurveSpec, prec: int):
        self.spec = spec
        self.params = spec.field.with_precision(prec)
        self.g = spec.g
        R = self.params
        self.P = ZqPoly.from_rows(R, [R.raw(c) for c in spec.Pbar])
        self.dP = self.P.derivative()
        try:
            self.bezout = BezoutContext(self.P)
        except (NotSquarefree, CurveError):
            raise
        except ZeroDivisionError as exc:
            raise NotSquarefree(str(exc)) from exc
        p = R.p
        frob_P = self.P.sigma().compose_power(p)
        self.E = frob_P - ZqPoly.from_rows(R, raw_pow(R, list(self.P.rows), p))

    @property
    def prec(self) -> int:
        return self.params.prec

    @property
    def p(self) -> int:
        return self.params.p

    def at_precision(self, prec: int) -> LiftedCurve:
        if prec == self.prec:
            return self
        return _lift(self.spec, prec)

    def same_curve(self, other: LiftedCurve) -> bool:
        return self is other or (self.spec == other.spec and self.prec == other.prec)

    def __repr__(self):
        return f"LiftedCurve(P={self.P!r}, g={self.g})"


class OddYForm:
    """Finite sum of A_j(x) dx / y^(2j+1).

    Index j >= 1: pole of order 2j+1 at the finite Weierstrass points;
    j = 0: the basis slot dx/y; j <= -1: positive powers y^(-2j-1) dx.
    """

    __slots__ = ("curve", "terms")

    def __init__(self, curve: LiftedCurve, terms=None):
        clean = {}
        for j, A in (terms or {}).items():
            if A.params != curve.params:
                raise ParameterMismatch("form coefficient over a different ring")
            if not A.is_zero():
                clean[int(j)] = A
        self.curve = curve
        self.terms = clean

    @classmethod
    def single(cls, curve, A: ZqPoly, j: int) -> OddYForm:
        return cls(curve, {j: A})

    @classmethod
    def monomial(cls, curve, i: int, j: int = 0) -> OddYForm:
        """x^i dx / y^(2j+1)."""
        return cls(curve, {j: ZqPoly.monomial(curve.params, i)})

    def support(self) -> list[int]:
        return sorted(self.terms)

    def __getitem__(self, j) -> ZqPoly:
        return self.terms.get(j, ZqPoly(self.curve.params))

    def _check(self, other):
        if not self.curve.same_curve(other.curve):
            raise ParameterMismatch("forms on different curves")

    def __add__(self, other: OddYForm) -> OddYForm:
        self._check(other)
        out = dict(self.terms)
        for j, A in other.terms.items():
            out[j] = out[j] + A if j in out else A
        return OddYForm(self.curve, out)

    def __sub__(self, other: OddYForm) -> OddYForm:
        return self + other.scale(-1)

    def scale(self, c) -> OddYForm:
        return OddYForm(self.curve, {j: A * c for j, A in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, OddYForm):
            return NotImplemented
        return self.curve.same_curve(other.curve) and self.terms == other.terms

    def __repr__(self):
        body = ", ".join(f"{j}: {self.terms[j]!r}" for j in self.support())
        return f"OddYForm({{{body}}})"

    def is_zero(self) -> bool:
        return not self.terms

    def fold_into_poles(self) -> OddYForm:
        return fold_into_poles(self)


def form_add(u: OddYForm, v: OddYForm) -> OddYForm:
    return u + v


def form_scale(u: OddYForm, c) -> OddYForm:
    return u.scale(c)


def fold_into_poles(u: OddYForm) -> OddYForm:
    """Rewrite A y^(2m-1) dx as A P^m dx/y using y^2 = P."""
    if all(j >= 0 for j in u.terms):
        return u
    out = {j: A for j, A in u.terms.items() if j >= 0}
    extra = ZqPoly(u.curve.params)
    for j, A in u.terms.items():
        if j < 0:
            extra = extra + A * (u.curve.P ** (-j))
    out[0] = out[0] + extra if 0 in out else extra
    return OddYForm(u.curve, out)


def exact_form(curve: LiftedCurve, C: ZqPoly, s: int) -> OddYForm:
    """d(C / y^(s-2)) = C' dx/y^(s-2) - (s-2)/2 C P' dx/y^s, for odd s >= 1."""
    if s % 2 == 0:
        raise CurveError("exact_form needs an odd pole order")
    half = ZqElem(curve.params, 2).inverse()
    lower = (s - 3) // 2
    upper = (s - 1) // 2
    A_up = (C * curve.dP) * (half * (-(s - 2)))
    terms = {upper: A_up}
    dC = C.derivative()
    terms[lower] = terms[lower] + dC if lower in terms else dC
    return OddYForm(curve, terms)
