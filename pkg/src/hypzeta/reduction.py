"""Reduction of odd forms to the basis x^i dx/y, i < 2g, and the Frobenius matrix.

Two relations drive everything.  Writing A = P B + P' C,

    A dx / y^s  ==  (B + 2 C' / (s-2)) dx / y^(s-2)          (poles)

because d(C / y^(s-2)) is exact, and from d(x^t y):

    (2t x^(t-1) P + x^t P') dx / y  ==  0                    (infinity)

whose leading coefficient is 2t + 2g + 1.

Divisions by s-2 and 2t+2g+1 may be divisions by p.  Every reduction
therefore runs at an internal precision raised by a shift S, on inputs
pre-multiplied by p^S, where S is the total p-adic valuation of all the
divisors the cascade can meet.  Each exact division then succeeds, the
digits it invents at the top are zero and never revisited, and the result
comes back as residues times p^-e for the smallest e that keeps them
integral.

Pole orders are cleared in one pass: the slots are combined into a single
polynomial H over y^(2J+1), H is written in base P (divide and conquer on
P^(2^j) with reversed power-series inverses), and each base-P digit is
reduced with the Bezout pair while a small carry walks down the levels.
"""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .curve import LiftedCurve, OddYForm, fold_into_poles
from .errors import GuardExhausted, InvalidParameters
from .frobenius import binom_half
from .padic import PadicParams, ZqElem, valuation
from .poly import (
    ZqPoly,
    fast_divmod,
    raw_add,
    raw_derivative,
    raw_divmod,
    raw_mul,
    raw_sub,
    series_inverse,
    trim,
)

# below this many coefficients a base-P expansion peels digits one by one
_PEEL_LIMIT = 48
# below this p*(K+1)*g a process pool costs more than it saves
_PARALLEL_MIN_WORK = 2000


def _vp(k: int, p: int) -> int:
    return valuation(k, p, 1 << 30)


def shift_bound(p: int, g: int, top_level: int, slot0_degree: int) -> int:
    """Total valuation of every divisor a full cascade can meet.

    Pole side: s-2 for odd s from top_level down to 3.  Infinity side:
    2t+2g+1 for t from slot0_degree-2g down to 0.
    """
    S = sum(_vp(o, p) for o in range(1, top_level - 1, 2))
    S += sum(_vp(2 * t + 2 * g + 1, p) for t in range(0, slot0_degree - 2 * g + 1))
    return S


@dataclass(frozen=True)
class BasisVector:
    """Coordinates on x^i dx/y, i = 0..2g-1, scaled: value = coords / p^denom_exp."""

    coords: tuple[ZqElem, ...]
    denom_exp: int = 0

    @property
    def params(self) -> PadicParams:
        return self.coords[0].params

    def __len__(self):
        return len(self.coords)

    def rescaled(self, e: int) -> tuple[int, ...]:
        """Residue tuples of p^e * value; needs e >= denom_exp."""
        if e < self.denom_exp:
            raise InvalidParameters("cannot rescale to a smaller denominator")
        k = self.params.p ** (e - self.denom_exp)
        return tuple(tuple(x * k for x in c.coeffs) for c in self.coords)

    def agrees(self, other: BasisVector, digits: int) -> bool:
        """Values agree modulo p^digits."""
        if len(self) != len(other):
            return False
        e = max(self.denom_exp, other.denom_exp)
        mod = self.params.p ** (digits + e)
        a, b = self.rescaled(e), other.rescaled(e)
        return all((x - y) % mod == 0 for ca, cb in zip(a, b) for x, y in zip(ca, cb))

    def is_zero_mod(self, digits: int) -> bool:
        mod = self.params.p ** (digits + self.denom_exp)
        return all(x % mod == 0 for c in self.coords for x in c.coeffs)

    def __repr__(self):
        if self.params.n == 1:
            body = [c.coeffs[0] for c in self.coords]
        else:
            body = [list(c.coeffs) for c in self.coords]
        return f"BasisVector({body} / {self.params.p}^{self.denom_exp})"


@dataclass(frozen=True)
class FrobMatrix:
    """Matrix of the p-power Frobenius; column i is the image of x^i dx/y.

    Entries are stored scaled: the matrix equals ``entries / p^denom_exp``.
    ``prec`` is the working precision Nw of the curve, ``shift`` the extra
    internal digits used for exact divisions, ``loss`` the largest single
    division valuation met with a non-zero dividend.
    """

    cols: tuple[BasisVector, ...]
    prec: int
    denom_exp: int = 0
    shift: int = 0
    K: int = 0
    loss: int = 0
    basis: str = "y1"

    @property
    def size(self) -> int:
        return len(self.cols)

    @property
    def params(self) -> PadicParams:
        return self.cols[0].params

    def entries(self) -> list[list[ZqElem]]:
        """Row-major scaled entries."""
        n = self.size
        return [[self.cols[j].coords[i] for j in range(n)] for i in range(n)]


class Reducer:
    """Reduction machinery for one lifted curve at one precision."""

    def __init__(self, curve: LiftedCurve):
        R = curve.params
        self.curve = curve
        self.R = R
        self.p = R.p
        self.g = curve.g
        self.P = list(curve.P.rows)
        self.dP = list(curve.dP.rows)
        self.V = list(curve.bezout.V.rows)
        self.loss = 0
        self._powers = {0: [R.one], 1: self.P}
        self._inverses = {}

    # -- powers of P ------------------------------------------------------

    def power(self, k: int):
        if k not in self._powers:
            half = self.power(k // 2)
            sq = raw_mul(self.R, half, half)
            self._powers[k] = raw_mul(self.R, sq, self.P) if k % 2 else sq
        return self._powers[k]

    def _inverse(self, k: int, length: int):
        inv = self._inverses.get(k)
        if inv is None or len(inv) < length:
            inv = series_inverse(self.R, self.power(k)[::-1], length)
            self._inverses[k] = inv
        return inv

    # -- single steps -------------------------------------------------------

    def _divide(self, rows, k: int):
        """rows * (1/k) with exact division by the p-part of k."""
        R = self.R
        v = _vp(k, self.p)
        u = k // self.p**v
        factor = pow(u, -1, R.pN)
        out = [R.scale(c, factor) for c in rows]
        if v:
            if any(any(c) for c in out):
                self.loss = max(self.loss, v)
            out = [R.shift_down(c, v) for c in out]
        return out

    def pole_step(self, A, s: int):
        """A dx/y^s -> (B + 2C'/(s-2)) dx/y^(s-2)."""
        R = self.R
        C = raw_divmod(R, raw_mul(R, A, self.V), self.P)[1]
        B, rem = raw_divmod(R, raw_sub(R, A, raw_mul(R, self.dP, C)), self.P)
        if trim(rem):
            raise ArithmeticError("Bezout exact division left a remainder")
        dC = self._divide([R.scale(c, 2) for c in raw_derivative(R, C)], s - 2)
        return trim(raw_add(R, B, dC))

    def _relation(self, t: int):
        """(offset, rows) of 2t x^(t-1) P + x^t P', a form cohomologous to 0."""
        R = self.R
        if t == 0:
            return 0, self.dP
        base = raw_add(R, [R.scale(c, 2 * t) for c in self.P], [R.zero] + self.dP)
        return t - 1, base

    def infinity_step(self, A):
        """Remove the leading term of A dx/y when deg A >= 2g."""
        R, g = self.R, self.g
        A = trim(A)
        m = len(A) - 1
        if m < 2 * g:
            return A
        t = m - 2 * g
        c = A[m]
        if any(c):
            f = self._divide([c], 2 * t + 2 * g + 1)[0]
            off, rel = self._relation(t)
            for idx, r in enumerate(rel[:-1]):
                if any(r):
                    A[off + idx] = R.sub(A[off + idx], R.mul(f, r))
        A.pop()
        return trim(A)

    def infinity_cascade(self, A):
        A = trim(A)
        while len(A) > 2 * self.g:
            A = self.infinity_step(A)
        return A

    # -- base-P expansion ---------------------------------------------------------

    def digits(self, F, count: int):
        """F = sum_m D_m P^m with deg D_m < 2g+1, for deg F < (2g+1)*count."""
        d = 2 * self.g + 1
        F = trim(F)
        if count == 1 or len(F) <= d:
            return [F] + [[] for _ in range(count - 1)]
        if len(F) <= _PEEL_LIMIT:
            out = []
            while F:
                F, r = raw_divmod(self.R, F, self.P)
                out.append(r)
            return out + [[] for _ in range(count - len(out))]
        h = 1 << ((count - 1).bit_length() - 1)
        Ph = self.power(h)
        hi, lo = fast_divmod(self.R, F, Ph, self._inverse(h, h * d))
        return self.digits(lo, h) + self.digits(hi, count - h)

    def combine(self, slots):
        """H with sum_j A_j dx/y^(2j+1) = H dx/y^(2J+1), over slots j >= 1."""
        js = sorted(slots)
        H, prev = slots[js[0]], js[0]
        for j in js[1:]:
            H = raw_add(self.R, raw_mul(self.R, H, self.power(j - prev)), slots[j])
            prev = j
        return trim(H), js[-1]

    def reduce_combined(self, H, J: int, slot0=()):
        """Reduce H dx/y^(2J+1) + slot0 dx/y to the basis (raw rows, length 2g)."""
        R = self.R
        carry = []
        tail = list(slot0)
        if J > 0 and H:
            PJ = self.power(J)
            qlen = len(H) - len(PJ) + 1
            if qlen > 0:
                Hq, Hlow = fast_divmod(R, H, PJ, self._inverse(J, qlen))
            else:
                Hq, Hlow = [], H
            digs = self.digits(Hlow, J)
            for j in range(J, 0, -1):
                A = raw_add(R, digs[J - j], carry)
                carry = self.pole_step(A, 2 * j + 1) if trim(A) else []
            tail = raw_add(R, raw_add(R, tail, Hq), carry)
        elif J == 0:
            tail = raw_add(R, tail, H)
        out = self.infinity_cascade(tail)
        return out + [R.zero] * (2 * self.g - len(out))

    def reduce_slots(self, slots, order: str = "top-down"):
        """slots: dict j >= 0 -> raw rows."""
        R = self.R
        slots = {j: trim(A) for j, A in slots.items() if trim(A)}
        slot0 = slots.pop(0, [])
        if order == "top-down":
            if not slots:
                return self.reduce_combined([], 0, slot0)
            H, J = self.combine(slots)
            return self.reduce_combined(H, J, slot0)
        if order == "stepwise":
            carry = []
            top = max(slots, default=0)
            for j in range(top, 0, -1):
                A = raw_add(R, slots.get(j, []), carry)
                carry = self.pole_step(A, 2 * j + 1) if trim(A) else []
            out = self.infinity_cascade(raw_add(R, slot0, carry))
            return out + [R.zero] * (2 * self.g - len(out))
        if order == "termwise":
            total = self.reduce_combined([], 0, slot0)
            for j, A in slots.items():
                total = raw_add(R, total, self.reduce_combined(A, j))
            return total
        raise InvalidParameters(f"unknown elimination order {order!r}")


@functools.lru_cache(maxsize=16)
def reducer_for(curve: LiftedCurve) -> Reducer:
    return Reducer(curve)


def _normalize(columns, S: int, curve: LiftedCurve, extra: int = 0):
    """Turn residues of p^S * value (mod p^(prec+S)) into scaled BasisVectors.

    ``extra`` is an additional known denominator exponent (p^-extra factor).
    """

    R = curve.params.with_precision(curve.prec + S)
    p = R.p
    vmin = min((R.valuation(c) for col in columns for c in col), default=R.prec)
    vmin = min(vmin, S)
    e = S - vmin
    target = curve.params.with_precision(curve.prec + e)
    out = []
    for col in columns:
        coords = tuple(ZqElem._make(target, tuple((x // p**vmin) % target.pN for x in c)) for c in col)
        out.append(BasisVector(coords, e + extra))
    return out


def _scaled_rows(RW: PadicParams, A: ZqPoly, factor: int):
    return [RW.scale(c, factor) for c in A.rows]


def reduce_pole_step(A: ZqPoly, s: int, curve: LiftedCurve) -> tuple[ZqPoly, int]:
    """One pole-order reduction at the curve's precision.

    Raises GuardExhausted when the division by s-2 is not exact on the
    stored residues; use :func:`reduce_to_basis` for automatic guarding.
    """
    if s < 3 or s % 2 == 0:
        raise InvalidParameters(f"pole order {s} must be odd and >= 3")
    rows = reducer_for(curve).pole_step(list(A.rows), s)
    return ZqPoly.from_rows(curve.params, rows), s - 2


def reduce_infinity_step(A: ZqPoly, curve: LiftedCurve) -> ZqPoly:
    """Eliminate the leading term of A dx/y if deg A >= 2g (one step)."""
    rows = reducer_for(curve).infinity_step(list(A.rows))
    return ZqPoly.from_rows(curve.params, rows)


def _slot0_degree(u: OddYForm, g: int) -> int:
    d = 2 * g + 1
    deg0 = 2 * g - 1
    for j, A in u.terms.items():
        deg0 = max(deg0, A.degree - d * j)
    return deg0


def reduce_to_basis(u: OddYForm, curve: LiftedCurve | None = None, order: str = "top-down") -> BasisVector:
    """Coordinates of the class of u on x^i dx/y, i < 2g.

    Largest pole first, then the infinity cascade.  ``order`` selects an
    alternative elimination order ("stepwise": one level at a time on full
    polynomials; "termwise": each slot reduced on its own, then summed).
    """
    curve = curve or u.curve
    if not curve.same_curve(u.curve):
        raise InvalidParameters("form lives on a different curve")
    u = fold_into_poles(u)
    g, p = curve.g, curve.p
    R = curve.params
    if u.is_zero():
        zero = ZqElem._make(R, R.zero)
        return BasisVector((zero,) * (2 * g))
    J = max(u.terms)
    S = shift_bound(p, g, 2 * J + 1, _slot0_degree(u, g))
    cw = curve.at_precision(curve.prec + S)
    RW = cw.params
    scale = p**S
    slots = {j: _scaled_rows(RW, A, scale) for j, A in u.terms.items()}
    coords = reducer_for(cw).reduce_slots(slots, order)
    return _normalize([coords], S, curve)[0]


# -- Frobenius matrix ------------------------------------------------------------


def _frobenius_series(red: Reducer, K: int, r: int):
    """G = sum_k binom(-r/2,k) E^k P^(p(K-k)) at the reducer's precision."""
    R, p = red.R, red.p
    E = list(red.curve.E.rows)
    slots = {}
    Ek = [R.one]
    for k in range(K + 1):
        c = binom_half(k, R, r).coeffs
        slots[k * p] = [R.mul(c, x) for x in Ek]
        if k < K:
            Ek = raw_mul(R, Ek, E)
    G, _ = red.combine(slots) if len(slots) > 1 else (slots[0], 0)
    return G


def _plan_shift(p: int, g: int, K: int, r: int):
    J = (p * (r + 2 * K) - 1) // 2
    a_max = 2 * g * p - 1
    deg0 = max(2 * g - 1, a_max + K * p * (2 * g + 1) - (2 * g + 1) * J)
    return J, shift_bound(p, g, 2 * J + 1, deg0)


@functools.lru_cache(maxsize=8)
def _scaled_series(cw: LiftedCurve, K: int, r: int, S: int):
    """p^(S+1) G, shared by all columns (and by all tasks in one worker)."""
    R = cw.params
    factor = R.p ** (S + 1)
    return [R.scale(c, factor) for c in _frobenius_series(reducer_for(cw), K, r)]


def _frobenius_columns(curve: LiftedCurve, K: int, r: int, S: int, J: int, indices):
    cw = curve.at_precision(curve.prec + S)
    red = reducer_for(cw)
    R, p = cw.params, cw.p
    scaledG = _scaled_series(cw, K, r, S)
    cols = []
    for i in indices:
        H = [R.zero] * (p * i + p - 1) + scaledG
        cols.append(red.reduce_combined(H, J))
    return cols, red.loss


def _column_task(args):
    spec, prec, K, r, S, J, i = args
    from .curve import validate_curve

    curve = validate_curve(spec, prec)
    cols, loss = _frobenius_columns(curve, K, r, S, J, [i])
    return cols[0], loss


def frobenius_matrix(curve: LiftedCurve, K: int | None = None, basis: str = "y1", workers: int = 1) -> FrobMatrix:
    """Matrix of the p-power Frobenius on the basis x^i dx/y (columns = images).

    ``basis="y3"`` computes the matrix on x^i dx/y^3 instead.
    """
    g, p = curve.g, curve.p
    if K is None:
        K = curve.prec - 1
    if basis not in ("y1", "y3"):
        raise InvalidParameters(f"unknown basis {basis!r}")
    r = 1 if basis == "y1" else 3
    J, S = _plan_shift(p, g, K, r)
    indices = range(2 * g)
    if workers > 1 and p * (K + 1) * g >= _PARALLEL_MIN_WORK:
        tasks = [(curve.spec, curve.prec, K, r, S, J, i) for i in indices]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_column_task, tasks))
        cols = [c for c, _ in results]
        loss = max(l for _, l in results)
    else:
        cols, loss = _frobenius_columns(curve, K, r, S, J, indices)
    if basis == "y1":
        vectors = _normalize(cols, S, curve)
        return FrobMatrix(tuple(vectors), curve.prec, vectors[0].denom_exp, S, K, loss, basis)
    return _change_to_y3(curve, cols, S, K, loss)


def _change_to_y3(curve: LiftedCurve, cols, S: int, K: int, loss: int) -> FrobMatrix:
    """Express Frobenius images (given on x^i dx/y) on the basis x^i dx/y^3."""
    from .linalg import adjugate_and_det, mat_mul

    g, p = curve.g, curve.p
    cw = curve.at_precision(curve.prec + S)
    R = cw.params
    red = reducer_for(cw)
    # T[:, i] = class of x^i dx/y^3 on x^j dx/y; the division by s-2 = 1 is exact
    T_cols = [red.reduce_slots({1: [R.zero] * i + [R.one]}) for i in range(2 * g)]
    T = [[ZqElem._make(R, T_cols[j][i]) for j in range(2 * g)] for i in range(2 * g)]
    V = [[ZqElem._make(R, cols[j][i]) for j in range(2 * g)] for i in range(2 * g)]
    adj, det = adjugate_and_det(T)
    v = det.valuation()
    if v >= R.prec:
        raise GuardExhausted("change of basis to x^i dx/y^3 is singular at this precision")
    unit = det.shift_down(v).inverse()
    X = [[x * unit for x in row] for row in mat_mul(adj, V)]
    # X = p^(S+v) * Phi3
    columns = [[X[i][j].coeffs for i in range(2 * g)] for j in range(2 * g)]
    vectors = _normalize(columns, S, curve, extra=0) if v == 0 else _normalize_extra(columns, S, v, curve)
    return FrobMatrix(tuple(vectors), curve.prec, vectors[0].denom_exp, S, K, max(loss, v), "y3")


def _normalize_extra(columns, S, v, curve):
    """Like _normalize for residues of p^(S+v) * value known mod p^(prec+S)."""
    R = curve.params.with_precision(curve.prec + S)
    p = R.p
    vmin = min(min((R.valuation(c) for col in columns for c in col), default=R.prec), S + v)
    e = S + v - vmin
    target = curve.params.with_precision(curve.prec + e - v) if e >= v else None
    if target is None or e - v < 0:
        target = curve.params.with_precision(max(1, curve.prec + e - v))
    out = []
    for col in columns:
        coords = tuple(ZqElem._make(target, tuple((x // p**vmin) % target.pN for x in c)) for c in col)
        out.append(BasisVector(coords, e))
    return out
