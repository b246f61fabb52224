"""Fixed-point arithmetic in the unramified extension Z_q of Z_p.

Z_q is modelled as ``(Z/p^N)[t] / m(t)`` where ``m`` is a monic lift of an
irreducible polynomial over F_p.  Every coefficient is kept as a residue in
``[0, p^N)`` regardless of its valuation (fixed point, not floating point).

Elements are stored "raw" as n-tuples of ints; :class:`PadicParams` carries
the raw ring operations so that the heavy polynomial code can work on
tuples without allocating wrapper objects.  :class:`ZqElem` is the public,
immutable wrapper.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

from .errors import (
    EvenCharacteristic,
    GuardExhausted,
    InvalidParameters,
    NewtonFailure,
    NotUnit,
    ParameterMismatch,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def valuation(x: int, p: int, cap: int) -> int:
    """p-adic valuation of ``x``, returning ``cap`` for zero."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def ceil_log(x: int, p: int) -> int:
    """Smallest d >= 0 with p**d >= x."""
    d, pd = 0, 1
    while pd < x:
        pd *= p
        d += 1
    return d


# -- polynomials over F_p (lists of ints, constant term first) ---------------


def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _fp_mod(prod, f, p)


def _fp_mod(a, f, p):
    a = [x % p for x in a]
    df = len(f) - 1
    inv_lc = pow(f[-1], -1, p)
    for d in range(len(a) - 1, df - 1, -1):
        c = a[d] * inv_lc % p
        if c:
            for r in range(df + 1):
                a[d - df + r] = (a[d - df + r] - c * f[r]) % p
    return _fp_trim(a[:df] if len(a) > df else a)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def fp_is_irreducible(f, p: int) -> bool:
    """Ben-Or irreducibility test for a polynomial over F_p (constant first)."""
    f = _fp_trim([x % p for x in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(n // 2):
        # xp <- xp^p mod f
        r, base, e = [1], xp, p
        while e:
            if e & 1:
                r = _fp_mulmod(r, base, f, p)
            base = _fp_mulmod(base, base, f, p)
            e >>= 1
        xp = r
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_fp_gcd(f, _fp_trim(diff), p)) > 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidates x^n + a_{n-1} x^{n-1} + ... + a_0 are scanned with the tuple
    (a_{n-1}, ..., a_0) in increasing lexicographic order.  The result is
    returned constant term first, with the leading 1 included.
    """
    if n == 1:
        return (0, 1)
    for high_first in itertools.product(range(p), repeat=n):
        coeffs = tuple(reversed(high_first)) + (1,)
        if coeffs[0] != 0 and fp_is_irreducible(coeffs, p):
            return coeffs
    raise InvalidParameters(f"no irreducible polynomial of degree {n} over F_{p}")


# -- the ring W / p^N ----------------------------------------------------------


@dataclass(frozen=True)
class PadicParams:
    """Shared context for Z_q = W/p^prec.

    ``modulus`` holds the n+1 coefficients (constant first, monic) of the
    defining polynomial; its digits are kept in [0, p) so the same tuple
    serves at every precision.
    """

    p: int
    n: int = 1
    prec: int = 1
    modulus: tuple[int, ...] | None = None
    pN: int = field(init=False, repr=False, compare=False)
    sigma_t: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p, n = self.p, self.n
        if p == 2:
            raise EvenCharacteristic("p = 2: the model y^2 = P(x) needs odd characteristic")
        if not is_prime(p):
            raise InvalidParameters(f"p = {p} is not prime")
        if n < 1:
            raise InvalidParameters(f"extension degree n = {n} must be >= 1")
        if self.prec < 1:
            raise InvalidParameters(f"precision {self.prec} must be >= 1")
        if self.modulus is None:
            mod = default_modulus(p, n)
        else:
            mod = tuple(int(c) % p for c in self.modulus)
            if len(mod) != n + 1 or mod[-1] != 1:
                raise InvalidParameters(f"modulus must be monic of degree {n}")
            if not fp_is_irreducible(mod, p):
                raise InvalidParameters(f"modulus {list(mod)} is not irreducible over F_{p}")
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "pN", p**self.prec)
        object.__setattr__(self, "sigma_t", self._frobenius_of_t())

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.n

    @property
    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.n - 1)

    def with_precision(self, prec: int) -> PadicParams:
        return _params_at(self.p, self.n, prec, self.modulus)

    def same_field(self, other: PadicParams) -> bool:
        return self.p == other.p and self.n == other.n and self.modulus == other.modulus

    # -- raw ring operations on n-tuples ------------------------------------

    def raw(self, value) -> tuple[int, ...]:
        if isinstance(value, int):
            return (value % self.pN,) + (0,) * (self.n - 1)
        value = tuple(value)
        if len(value) != self.n:
            raise ParameterMismatch(f"expected {self.n} coordinates, got {len(value)}")
        return tuple(int(c) % self.pN for c in value)

    def add(self, a, b):
        M = self.pN
        return tuple((x + y) % M for x, y in zip(a, b))

    def sub(self, a, b):
        M = self.pN
        return tuple((x - y) % M for x, y in zip(a, b))

    def neg(self, a):
        M = self.pN
        return tuple(-x % M for x in a)

    def scale(self, a, k: int):
        M = self.pN
        return tuple(x * k % M for x in a)

    def mul(self, a, b):
        if self.n == 1:
            return (a[0] * b[0] % self.pN,)
        n = self.n
        conv = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    conv[i + j] += x * y
        return self.fold(conv)

    def fold(self, conv) -> tuple[int, ...]:
        """Reduce a t-polynomial of degree <= 2n-2 modulo m(t) and p^prec."""
        n, M, m = self.n, self.pN, self.modulus
        conv = list(conv)
        for d in range(len(conv) - 1, n - 1, -1):
            c = conv[d]
            if c:
                base = d - n
                for r in range(n):
                    if m[r]:
                        conv[base + r] -= c * m[r]
        conv += [0] * (n - len(conv))
        return tuple(x % M for x in conv[:n])

    def pow(self, a, e: int):
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_unit(self, a) -> bool:
        return any(x % self.p for x in a)

    def inv(self, a):
        if not self.is_unit(a):
            raise NotUnit(f"{list(a)} is divisible by p = {self.p}")
        if self.n == 1:
            return (pow(a[0], -1, self.pN),)
        # inverse in F_q by Fermat, then Newton x <- x(2 - ax) at full precision
        p = self.p
        x = self.pow(tuple(c % p for c in a), self.q - 2)
        x = tuple(c % p for c in x)
        if self.prec == 1:
            return x
        two = self.raw(2)
        correct = 1
        while correct < self.prec:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            correct *= 2
        return x

    def sigma(self, a):
        if self.n == 1:
            return a
        s = self.sigma_t
        acc = (a[-1],) + (0,) * (self.n - 1)
        for c in reversed(a[:-1]):
            acc = self.mul(acc, s)
            acc = (acc[0] + c) % self.pN, *acc[1:]
        return acc

    def valuation(self, a) -> int:
        return min(valuation(x, self.p, self.prec) for x in a)

    def shift_down(self, a, v: int):
        """Exact division by p^v; the invented top digits are zero."""
        if v == 0:
            return a
        pv = self.p**v
        if any(x % pv for x in a):
            raise GuardExhausted(f"residue {list(a)} is not divisible by {self.p}^{v}")
        return tuple(x // pv for x in a)

    def _frobenius_of_t(self):
        """Root of m in W/p^prec congruent to t^p, by Newton iteration."""
        n = self.n
        if n == 1:
            return (0,)
        m = self.modulus
        t = (0, 1) + (0,) * (n - 2)

        def evaluate(coeffs, x):
            acc = self.raw(coeffs[-1])
            for c in reversed(coeffs[:-1]):
                acc = self.add(self.mul(acc, x), self.raw(c))
            return acc

        dm = [i * m[i] for i in range(1, n + 1)]
        s = self.pow(t, self.p)
        steps = (self.prec - 1).bit_length() + 1
        for _ in range(steps):
            deriv = evaluate(dm, s)
            if not self.is_unit(deriv):
                raise NewtonFailure("m'(t^p) is not a unit: modulus is not separable mod p")
            s = self.sub(s, self.mul(evaluate(m, s), self.inv(deriv)))
        if any(evaluate(m, s)):
            raise NewtonFailure("Newton iteration for sigma(t) did not converge")
        return s


@functools.lru_cache(maxsize=None)
def _params_at(p, n, prec, modulus):
    return PadicParams(p, n, prec, modulus)


def make_params(p: int, n: int = 1, prec: int = 1, modulus=None) -> PadicParams:
    """Cached constructor; equal arguments give the identical object."""
    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
    else:
        if p == 2:
            raise EvenCharacteristic("p = 2: the model y^2 = P(x) needs odd characteristic")
        if not is_prime(p):
            raise InvalidParameters(f"p = {p} is not prime")
        modulus = default_modulus(p, n) if n >= 1 else None
    return _params_at(p, n, prec, modulus)


class ZqElem:
    """An element of W/p^prec, immutable."""

    __slots__ = ("coeffs", "params")

    def __init__(self, params: PadicParams, coeffs=0):
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "coeffs", params.raw(coeffs))

    @classmethod
    def _make(cls, params, raw):
        obj = object.__new__(cls)
        object.__setattr__(obj, "params", params)
        object.__setattr__(obj, "coeffs", raw)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("ZqElem is immutable")

    def __reduce__(self):
        return (ZqElem, (self.params, self.coeffs))

    def _other(self, other):
        if isinstance(other, ZqElem):
            if other.params is not self.params and other.params != self.params:
                raise ParameterMismatch(f"{self.params} vs {other.params}")
            return other.coeffs
        if isinstance(other, int):
            return self.params.raw(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return ZqElem._make(self.params, self.params.add(self.coeffs, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return ZqElem._make(self.params, self.params.sub(self.coeffs, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return ZqElem._make(self.params, self.params.sub(b, self.coeffs))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return ZqElem._make(self.params, self.params.mul(self.coeffs, b))

    __rmul__ = __mul__

    def __neg__(self):
        return ZqElem._make(self.params, self.params.neg(self.coeffs))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return ZqElem._make(self.params, self.params.pow(self.coeffs, e))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == self.params.raw(other)
        if not isinstance(other, ZqElem):
            return NotImplemented
        return self.params == other.params and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.params, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        if self.params.n == 1:
            return f"ZqElem({self.coeffs[0]} mod {self.params.p}^{self.params.prec})"
        return f"ZqElem({list(self.coeffs)} mod {self.params.p}^{self.params.prec})"

    def is_unit(self) -> bool:
        return self.params.is_unit(self.coeffs)

    def inverse(self) -> ZqElem:
        return ZqElem._make(self.params, self.params.inv(self.coeffs))

    def sigma(self) -> ZqElem:
        return ZqElem._make(self.params, self.params.sigma(self.coeffs))

    def valuation(self) -> int:
        return self.params.valuation(self.coeffs)

    def shift_down(self, v: int) -> ZqElem:
        return ZqElem._make(self.params, self.params.shift_down(self.coeffs, v))

    def reduce_precision(self, N: int) -> ZqElem:
        """Reduce every coordinate modulo p^N, 1 <= N <= prec."""
        if not 1 <= N <= self.params.prec:
            raise InvalidParameters(f"precision {N} outside [1, {self.params.prec}]")
        target = self.params.with_precision(N)
        return ZqElem._make(target, tuple(c % target.pN for c in self.coeffs))

    def lift_precision(self, N: int) -> ZqElem:
        """Embed into W/p^N (N >= prec) using the same representatives."""
        target = self.params.with_precision(N)
        return ZqElem._make(target, self.coeffs)

    def is_rational(self, digits: int | None = None) -> bool:
        """True when the t-coordinates vanish modulo p^digits."""
        pd = self.params.p ** (self.params.prec if digits is None else digits)
        return all(c % pd == 0 for c in self.coeffs[1:])


# operator names from the module map
def zq_inv(a: ZqElem) -> ZqElem:
    return a.inverse()


def zq_sigma(a: ZqElem) -> ZqElem:
    return a.sigma()


def reduce_precision(a: ZqElem, N: int) -> ZqElem:
    return a.reduce_precision(N)
