"""Dense univariate polynomials over W/p^N.

Coefficients are stored lowest degree first as raw n-tuples (see
:mod:`hypzeta.padic`).  Large products go through Kronecker substitution:
both operands are packed into one Python integer each, multiplied with the
interpreter's big-integer multiplication, and unpacked.  For n > 1 the
packing is bivariate in (x, t) with 2n-1 slots per x-coefficient.
"""

from __future__ import annotations

import functools

from .errors import NonUnitLeading, NotSquarefree, ParameterMismatch
from .padic import PadicParams, ZqElem

# below this operand length schoolbook multiplication is faster
_KRONECKER_MIN = 12


# -- raw helpers: lists of n-tuples ------------------------------------------


def trim(rows):
    rows = list(rows)
    while rows and not any(rows[-1]):
        rows.pop()
    return rows


def raw_add(R: PadicParams, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = R.add(out[i], c)
    return out


def raw_sub(R: PadicParams, a, b):
    out = list(a) + [R.zero] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = R.sub(out[i], c)
    return out


def raw_scale(R: PadicParams, a, c):
    if R.n == 1:
        M, k = R.pN, c[0]
        return [(x[0] * k % M,) for x in a]
    return [R.mul(x, c) for x in a]


def raw_mul_int(R: PadicParams, a, k: int):
    return [R.scale(x, k) for x in a]


def _pack(rows, n, bb, pad):
    if n == 1:
        return int.from_bytes(b"".join(c[0].to_bytes(bb, "little") for c in rows), "little")
    parts = []
    for c in rows:
        for x in c:
            parts.append(x.to_bytes(bb, "little"))
        parts.append(pad)
    return int.from_bytes(b"".join(parts), "little")


def raw_mul(R: PadicParams, a, b):
    la, lb = len(a), len(b)
    if not la or not lb:
        return []
    if min(la, lb) < _KRONECKER_MIN:
        return _schoolbook(R, a, b)
    n = R.n
    w = 2 * n - 1
    bits = 2 * (R.pN - 1).bit_length() + (min(la, lb) * n).bit_length() + 1
    bb = (bits + 7) // 8
    pad = bytes(bb * (n - 1))
    prod = _pack(a, n, bb, pad) * _pack(b, n, bb, pad)
    count = (la + lb - 1) * w
    buf = prod.to_bytes(count * bb, "little")
    vals = [int.from_bytes(buf[i : i + bb], "little") for i in range(0, count * bb, bb)]
    if n == 1:
        M = R.pN
        return [(v % M,) for v in vals]
    return [R.fold(vals[k : k + w]) for k in range(0, count, w)]


def _schoolbook(R, a, b):
    if R.n == 1:
        M = R.pN
        out = [0] * (len(a) + len(b) - 1)
        for i, (x,) in enumerate(a):
            if x:
                for j, (y,) in enumerate(b):
                    out[i + j] += x * y
        return [(v % M,) for v in out]
    n = R.n
    w = 2 * n - 1
    out = [[0] * w for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if not any(x):
            continue
        for j, y in enumerate(b):
            acc = out[i + j]
            for r, xr in enumerate(x):
                if xr:
                    for s, ys in enumerate(y):
                        acc[r + s] += xr * ys
    return [R.fold(c) for c in out]


def raw_divmod(R: PadicParams, f, d):
    """Schoolbook division by d whose leading coefficient is a unit."""
    d = trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    lc = d[-1]
    if not R.is_unit(lc):
        raise NonUnitLeading(f"leading coefficient {list(lc)} is not a unit")
    monic = lc == R.one
    inv_lc = lc if monic else R.inv(lc)
    f = list(f)
    dd = len(d) - 1
    if len(f) <= dd:
        return [], trim(f)
    quot = [R.zero] * (len(f) - dd)
    if R.n == 1:
        M, il = R.pN, inv_lc[0]
        fv = [c[0] for c in f]
        dv = [c[0] for c in d[:-1]]
        for k in range(len(f) - 1, dd - 1, -1):
            c = fv[k] % M
            if not monic:
                c = c * il % M
            if c:
                base = k - dd
                quot[base] = (c,)
                for r, y in enumerate(dv):
                    if y:
                        fv[base + r] -= c * y
        return trim(quot), trim([(v % M,) for v in fv[:dd]])
    for k in range(len(f) - 1, dd - 1, -1):
        c = f[k] if monic else R.mul(f[k], inv_lc)
        if any(c):
            base = k - dd
            quot[base] = c
            for r in range(dd):
                if any(d[r]):
                    f[base + r] = R.sub(f[base + r], R.mul(c, d[r]))
    return trim(quot), trim(f[:dd])


def series_inverse(R: PadicParams, f, length: int):
    """g with f*g = 1 mod x^length; f[0] must be a unit."""
    g = [R.inv(f[0])]
    k = 1
    two = R.raw(2)
    while k < length:
        k = min(2 * k, length)
        fg = raw_mul(R, f[:k], g)[:k]
        corr = [R.neg(c) for c in fg]
        corr += [R.zero] * (k - len(corr))
        corr[0] = R.add(corr[0], two)
        g = raw_mul(R, g, corr)[:k]
    return g


def fast_divmod(R: PadicParams, f, d, inv_rev_d=None):
    """Division by a monic d using a reversed power-series inverse.

    ``inv_rev_d`` may hold a precomputed inverse of reversed(d) of any
    sufficient length.
    """
    f = trim(f)
    D = len(d) - 1
    if len(f) <= D:
        return [], f
    qlen = len(f) - D
    if inv_rev_d is None or len(inv_rev_d) < qlen:
        inv_rev_d = series_inverse(R, d[::-1], qlen)
    rev_f = f[::-1][:qlen]
    qrev = raw_mul(R, rev_f, inv_rev_d[:qlen])[:qlen]
    qrev += [R.zero] * (qlen - len(qrev))
    quot = qrev[::-1]
    qd = raw_mul(R, quot, d)
    rem = raw_sub(R, f[:D], qd[:D])
    return trim(quot), trim(rem)


def raw_pow(R, f, e: int):
    result, base = [R.one], f
    while e:
        if e & 1:
            result = raw_mul(R, result, base)
        e >>= 1
        if e:
            base = raw_mul(R, base, base)
    return trim(result)


def raw_derivative(R, f):
    return trim([R.scale(c, i) for i, c in enumerate(f)][1:])


# -- public polynomial type -----------------------------------------------------


class ZqPoly:
    """Polynomial over W/p^N, coefficients lowest degree first, trimmed."""

    __slots__ = ("params", "rows")

    def __init__(self, params: PadicParams, coeffs=()):
        rows = []
        for c in coeffs:
            if isinstance(c, ZqElem):
                if c.params != params:
                    raise ParameterMismatch(f"{c.params} vs {params}")
                rows.append(c.coeffs)
            else:
                rows.append(params.raw(c))
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "rows", tuple(trim(rows)))

    @classmethod
    def from_rows(cls, params, rows):
        obj = object.__new__(cls)
        object.__setattr__(obj, "params", params)
        object.__setattr__(obj, "rows", tuple(trim(rows)))
        return obj

    @classmethod
    def monomial(cls, params, k: int, c=1):
        return cls.from_rows(params, [params.zero] * k + [params.raw(c)])

    def __setattr__(self, name, value):
        raise AttributeError("ZqPoly is immutable")

    def __reduce__(self):
        return (ZqPoly.from_rows, (self.params, self.rows))

    @property
    def coeffs(self) -> tuple[ZqElem, ...]:
        return tuple(ZqElem._make(self.params, r) for r in self.rows)

    @property
    def degree(self) -> int:
        return len(self.rows) - 1

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, k) -> ZqElem:
        if 0 <= k < len(self.rows):
            return ZqElem._make(self.params, self.rows[k])
        return ZqElem._make(self.params, self.params.zero)

    def lc(self) -> ZqElem:
        return self[self.degree]

    def is_zero(self) -> bool:
        return not self.rows

    def __bool__(self):
        return bool(self.rows)

    def _check(self, other):
        if other.params is not self.params and other.params != self.params:
            raise ParameterMismatch(f"{self.params} vs {other.params}")

    def __eq__(self, other):
        if not isinstance(other, ZqPoly):
            return NotImplemented
        return self.params == other.params and self.rows == other.rows

    def __hash__(self):
        return hash((self.params, self.rows))

    def __repr__(self):
        if self.params.n == 1:
            body = [r[0] for r in self.rows]
        else:
            body = [list(r) for r in self.rows]
        return f"ZqPoly({body} mod {self.params.p}^{self.params.prec})"

    def __add__(self, other):
        if isinstance(other, (int, ZqElem)):
            other = ZqPoly(self.params, [other])
        self._check(other)
        return ZqPoly.from_rows(self.params, raw_add(self.params, self.rows, other.rows))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, ZqElem)):
            other = ZqPoly(self.params, [other])
        self._check(other)
        return ZqPoly.from_rows(self.params, raw_sub(self.params, self.rows, other.rows))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return ZqPoly.from_rows(self.params, [self.params.neg(c) for c in self.rows])

    def __mul__(self, other):
        R = self.params
        if isinstance(other, int):
            return ZqPoly.from_rows(R, raw_mul_int(R, self.rows, other))
        if isinstance(other, ZqElem):
            if other.params != R:
                raise ParameterMismatch(f"{R} vs {other.params}")
            return ZqPoly.from_rows(R, raw_scale(R, self.rows, other.coeffs))
        if not isinstance(other, ZqPoly):
            return NotImplemented
        self._check(other)
        return ZqPoly.from_rows(R, raw_mul(R, self.rows, other.rows))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return ZqPoly.from_rows(self.params, raw_pow(self.params, list(self.rows), e))

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def shift(self, k: int) -> ZqPoly:
        """Multiply by x^k."""
        if not self.rows:
            return self
        return ZqPoly.from_rows(self.params, [self.params.zero] * k + list(self.rows))

    def derivative(self) -> ZqPoly:
        return poly_derivative(self)

    def sigma(self) -> ZqPoly:
        return ZqPoly.from_rows(self.params, [self.params.sigma(c) for c in self.rows])

    def compose_power(self, k: int) -> ZqPoly:
        """f(x^k)."""
        R = self.params
        out = [R.zero] * (k * self.degree + 1) if self.rows else []
        for i, c in enumerate(self.rows):
            out[k * i] = c
        return ZqPoly.from_rows(R, out)

    def __call__(self, x: ZqElem) -> ZqElem:
        acc = ZqElem._make(self.params, self.params.zero)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def valuation(self) -> int:
        if not self.rows:
            return self.params.prec
        return min(self.params.valuation(c) for c in self.rows)

    def reduce_precision(self, N: int) -> ZqPoly:
        target = self.params.with_precision(N)
        return ZqPoly.from_rows(target, [tuple(x % target.pN for x in c) for c in self.rows])

    def lift_precision(self, N: int) -> ZqPoly:
        return ZqPoly.from_rows(self.params.with_precision(N), self.rows)


def poly_derivative(f: ZqPoly) -> ZqPoly:
    return ZqPoly.from_rows(f.params, raw_derivative(f.params, f.rows))


def poly_divmod(f: ZqPoly, d: ZqPoly) -> tuple[ZqPoly, ZqPoly]:
    """Return (q, r) with f = q*d + r and deg r < deg d."""
    f._check(d)
    quot, rem = raw_divmod(f.params, f.rows, d.rows)
    return ZqPoly.from_rows(f.params, quot), ZqPoly.from_rows(f.params, rem)


# -- Bezout decomposition against (P, P') ----------------------------------------


def _field_inverse_of_derivative(R1: PadicParams, P, dP):
    """V over F_q with dP*V = 1 mod P, or NotSquarefree."""
    r0, r1 = trim(P), trim(dP)
    t0, t1 = [], [R1.one]
    while r1:
        quot, rem = raw_divmod(R1, r0, r1)
        r0, r1 = r1, rem
        t0, t1 = t1, trim(raw_sub(R1, t0, raw_mul(R1, quot, t1)))
    if len(r0) != 1:
        raise NotSquarefree(f"gcd(P, P') has degree {len(r0) - 1} over F_q")
    return raw_scale(R1, t0, R1.inv(r0[0]))


class BezoutContext:
    """Precomputed U, V with P*U + P'*V = 1 over W/p^N.

    V is first found over F_q by the extended Euclidean algorithm and then
    Hensel-lifted as the inverse of P' in the ring W[x]/(P).
    """

    def __init__(self, P: ZqPoly):
        R = P.params
        if P.is_zero() or P.lc() != 1:
            raise NonUnitLeading("P must be monic")
        self.P = P
        self.dP = P.derivative()
        R1 = R.with_precision(1)
        low = lambda rows: [tuple(x % R1.pN for x in c) for c in rows]  # noqa: E731
        V = _field_inverse_of_derivative(R1, low(P.rows), low(self.dP.rows))
        prec = 1
        while prec < R.prec:
            prec = min(2 * prec, R.prec)
            Rk = R.with_precision(prec)
            Pk = [tuple(x % Rk.pN for x in c) for c in P.rows]
            dPk = [tuple(x % Rk.pN for x in c) for c in self.dP.rows]
            Vk = [tuple(x % Rk.pN for x in c) for c in V]
            e = raw_divmod(Rk, raw_mul(Rk, dPk, Vk), Pk)[1]
            corr = raw_sub(Rk, [Rk.raw(2)], e)
            V = raw_divmod(Rk, raw_mul(Rk, Vk, corr), Pk)[1]
        self.V = ZqPoly.from_rows(R, [R.raw(c) for c in V])
        one_minus = ZqPoly(R, [1]) - self.dP * self.V
        U, rem = poly_divmod(one_minus, P)
        if not rem.is_zero():
            raise NotSquarefree("P'V = 1 mod P failed after lifting")
        self.U = U

    def decompose(self, A: ZqPoly) -> tuple[ZqPoly, ZqPoly]:
        C = (A * self.V) % self.P
        B, rem = poly_divmod(A - self.dP * C, self.P)
        if not rem.is_zero():
            raise ArithmeticError("Bezout exact division left a remainder")
        return B, C


@functools.lru_cache(maxsize=32)
def _context_for(P: ZqPoly) -> BezoutContext:
    return BezoutContext(P)


def bezout_decompose(A: ZqPoly, P) -> tuple[ZqPoly, ZqPoly]:
    """(B, C) with A = P*B + P'*C and deg C < deg P.

    ``P`` is either the polynomial itself or a prepared BezoutContext.
    """
    ctx = P if isinstance(P, BezoutContext) else _context_for(P)
    return ctx.decompose(A)
