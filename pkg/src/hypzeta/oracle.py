"""Brute-force point counting over F_{q^m}, independent of the p-adic code.

The counting field F_{p^(nm)} is built directly as F_p[u]/(f) with f the
lexicographically smallest monic irreducible of degree nm.  Curve
coefficients, given in the basis 1, t, ..., t^(n-1) of F_q = F_p[t]/(m),
are re-embedded through a root of m found by exhaustive search.  Field
elements are tuples of F_p digits, constant term first.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidParameters

DEFAULT_BUDGET = 1 << 24


# -- F_p[u] helpers (deliberately separate from padic.py) ---------------------


def _strip(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, f, p):
    a = [x % p for x in a]
    d = len(f) - 1
    inv = pow(f[-1], -1, p)
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * f[j]) % p
    return _strip(a[:d])


def _polymulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _polymod(out, f, p)


def _polygcd(a, b, p):
    a, b = _strip(x % p for x in a), _strip(x % p for x in b)
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _irreducible(f, p):
    """Rabin's test for a monic f over F_p."""
    d = len(f) - 1
    if d == 1:
        return True

    def frob_power(k):
        x = [0, 1]
        for _ in range(k):
            x = _polypowmod(x, p, f, p)
        return x

    def minus_x(h):
        return _strip((x - y) % p for x, y in itertools.zip_longest(h, [0, 1], fillvalue=0))

    if minus_x(frob_power(d)):
        return False
    for r in _prime_factors(d):
        if len(_polygcd(f, minus_x(frob_power(d // r)), p)) != 1:
            return False
    return True


def _polypowmod(a, e, f, p):
    result, base = [1], _polymod(a, f, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        e >>= 1
    return result


def smallest_irreducible(p: int, d: int):
    """Lexicographically smallest monic irreducible of degree d (constant first)."""
    for tail in itertools.product(range(p), repeat=d):
        f = list(reversed(tail)) + [1]
        if d > 1 and f[0] == 0:
            continue
        if _irreducible(f, p):
            return tuple(f)
    raise InvalidParameters(f"no irreducible of degree {d} over F_{p}")


# -- the counting field -------------------------------------------------------------


class FqTower:
    """F_{p^(nm)} with the curve's F_q embedded.

    ``base_modulus``: the F_q modulus m(t) (constant first, monic, degree n).
    ``modulus``: optional irreducible of degree nm for the counting field.
    """

    def __init__(self, p: int, n: int, m: int, base_modulus=None, modulus=None):
        if p % 2 == 0:
            raise InvalidParameters("the oracle needs odd characteristic")
        self.p, self.n, self.m = p, n, m
        self.degree = n * m
        self.size = p**self.degree
        self.modulus = tuple(modulus) if modulus else smallest_irreducible(p, self.degree)
        if len(self.modulus) != self.degree + 1 or self.modulus[-1] != 1:
            raise InvalidParameters("counting-field modulus must be monic of degree n*m")
        if not _irreducible(list(self.modulus), p):
            raise InvalidParameters("counting-field modulus is reducible")
        if n == 1:
            self.base_modulus = (0, 1)
            self.root = (0,) * self.degree
        else:
            if base_modulus is None:
                raise InvalidParameters("n > 1 needs the F_q modulus")
            self.base_modulus = tuple(base_modulus)
            self.root = self._find_root()

    # element helpers: tuples of length `degree`
    def _norm(self, a):
        a = list(a) + [0] * (self.degree - len(a))
        return tuple(a)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        return self._norm(_polymulmod(list(a), list(b), list(self.modulus), self.p))

    def power(self, a, e):
        return self._norm(_polypowmod(list(a), e, list(self.modulus), self.p))

    def scalar(self, c):
        return self._norm([c % self.p])

    def elements(self):
        for digits in itertools.product(range(self.p), repeat=self.degree):
            yield tuple(reversed(digits))

    def _evaluate(self, coeffs, x):
        acc = self._norm([])
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def _find_root(self):
        coeffs = [self.scalar(c) for c in self.base_modulus]
        for x in self.elements():
            if not any(self._evaluate(coeffs, x)):
                return x
        raise InvalidParameters("F_q modulus has no root in the counting field")

    def embed(self, c):
        """Image of sum c_i t^i (c: n-tuple of F_p digits)."""
        if self.n == 1:
            return self.scalar(c[0])
        acc = self._norm([])
        for ci in reversed(c):
            acc = self.add(self.mul(acc, self.root), self.scalar(ci))
        return acc


def quadratic_character(a, field: FqTower | None = None, p: int | None = None) -> int:
    """Legendre symbol in F_p (a: int) or in ``field`` (a: element tuple)."""
    if field is None:
        if p is None or p % 2 == 0:
            raise InvalidParameters("quadratic_character needs an odd prime")
        a %= p
        if a == 0:
            return 0
        return 1 if pow(a, (p - 1) // 2, p) == 1 else -1
    if not any(a):
        return 0
    r = field.power(a, (field.size - 1) // 2)
    return 1 if r == field.scalar(1) else -1


def _curve_data(curve):
    return curve.p, curve.n, curve.field.modulus, tuple(curve.Pbar)


def _count_chunk(args):
    p, n, m, base_mod, modulus, Pbar, start, stop = args
    F = FqTower(p, n, m, base_mod, modulus)
    coeffs = [F.embed(c) for c in Pbar]
    squares = {F.mul(x, x) for x in F.elements()}
    total = 0
    for x in itertools.islice(F.elements(), start, stop):
        v = F._evaluate(coeffs, x)
        if not any(v):
            total += 1
        elif v in squares:
            total += 2
    return total


def naive_count(curve, m: int = 1, budget: int = DEFAULT_BUDGET, modulus=None, workers: int = 1) -> int:
    """#X(F_{q^m}) for the smooth projective model (one point at infinity)."""
    p, n, base_mod, Pbar = _curve_data(curve)
    size = p ** (n * m)
    if size > budget:
        raise BudgetExceeded(f"F_(q^{m}) has {size} elements, budget is {budget}")
    F = FqTower(p, n, m, base_mod, modulus)
    if workers <= 1 or size < 4096:
        return 1 + _count_chunk((p, n, m, base_mod, F.modulus, Pbar, 0, size))
    step = -(-size // workers)
    tasks = [(p, n, m, base_mod, F.modulus, Pbar, a, min(a + step, size)) for a in range(0, size, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return 1 + sum(pool.map(_count_chunk, tasks))


@dataclass(frozen=True)
class VerifyEntry:
    m: int
    predicted: int
    counted: int | None  # None when the budget was exceeded

    @property
    def status(self) -> str:
        if self.counted is None:
            return "BudgetExceeded"
        return "agree" if self.counted == self.predicted else "MISMATCH"


@dataclass(frozen=True)
class VerifyReport:
    entries: tuple[VerifyEntry, ...]

    @property
    def all_agree(self) -> bool:
        return all(e.status == "agree" for e in self.entries)

    @property
    def mismatch(self) -> bool:
        return any(e.status == "MISMATCH" for e in self.entries)

    @property
    def budget_exceeded(self) -> bool:
        return any(e.status == "BudgetExceeded" for e in self.entries)


def verify(curve, Q, mmax: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> VerifyReport:
    """Compare counts predicted by Q with naive counts for m = 1..mmax."""
    from .zeta import counts_from_Q

    out = []
    for m in range(1, mmax + 1):
        predicted = counts_from_Q(Q, curve.q, m)
        try:
            counted = naive_count(curve, m, budget, workers=workers)
        except BudgetExceeded:
            counted = None
        out.append(VerifyEntry(m, predicted, counted))
    return VerifyReport(tuple(out))
