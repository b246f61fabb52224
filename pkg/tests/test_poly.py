import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from hypzeta import BezoutContext, ZqPoly, bezout_decompose, make_params, poly_derivative, poly_divmod
from hypzeta.errors import NonUnitLeading, NotSquarefree
from hypzeta.poly import _schoolbook, fast_divmod, raw_divmod, raw_mul, series_inverse, trim


def rpoly(R, rng, deg):
    return ZqPoly(R, [tuple(rng.randrange(R.pN) for _ in range(R.n)) for _ in range(deg + 1)])


def residue(x: Fraction, mod: int) -> int:
    return x.numerator * pow(x.denominator, -1, mod) % mod


def test_ring_examples():
    R = make_params(7, 1, 3)
    f = ZqPoly(R, [1, 2, 3])
    assert f + ZqPoly(R) == f
    assert ZqPoly(R, [1, 1]) * ZqPoly(R, [-1, 1]) == ZqPoly(R, [-1, 0, 1])
    assert ZqPoly(R, [0, 0, 0]).degree == -1 and ZqPoly(R, [5, 0, 0]).degree == 0


def test_degree_of_product_with_unit_leading():
    rng = random.Random(1)
    R = make_params(5, 2, 3)
    for _ in range(30):
        f, g = rpoly(R, rng, rng.randrange(1, 8)), rpoly(R, rng, rng.randrange(1, 8))
        if f.lc().is_unit() and g.lc().is_unit():
            assert (f * g).degree == f.degree + g.degree


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kronecker_matches_schoolbook(n):
    rng = random.Random(n)
    R = make_params(7, n, 6)
    for la, lb in [(12, 12), (40, 13), (100, 57), (3, 200)]:
        a = rpoly(R, rng, la - 1).rows
        b = rpoly(R, rng, lb - 1).rows
        assert trim(raw_mul(R, list(a), list(b))) == trim(_schoolbook(R, list(a), list(b)))


def test_derivative_examples():
    R = make_params(7, 1, 2)
    assert poly_derivative(ZqPoly(R, [1, 1, 0, 1])) == ZqPoly(R, [1, 0, 3])
    assert poly_derivative(ZqPoly(R, [5])).is_zero()


def test_leibniz_random():
    rng = random.Random(4)
    R = make_params(5, 2, 3)
    for _ in range(30):
        f, g = rpoly(R, rng, rng.randrange(6)), rpoly(R, rng, rng.randrange(6))
        assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


def test_divmod_examples():
    R = make_params(7, 1, 3)
    P = ZqPoly(R, [1, 1, 0, 1])
    q, r = poly_divmod(P, P)
    assert q == ZqPoly(R, [1]) and r.is_zero()
    f = ZqPoly(R, [3, 4, 5])
    assert poly_divmod(f, ZqPoly(R, [1])) == (f, ZqPoly(R))
    with pytest.raises(NonUnitLeading):
        poly_divmod(f, ZqPoly(R, [1, 7]))


def test_divmod_reconstruction_random():
    rng = random.Random(5)
    R = make_params(5, 2, 4)
    for _ in range(40):
        f = rpoly(R, rng, rng.randrange(30))
        d = rpoly(R, rng, rng.randrange(1, 8))
        d = d + ZqPoly.monomial(R, d.degree + 1)
        q, r = poly_divmod(f, d)
        assert q * d + r == f and r.degree < d.degree


def test_fast_divmod_matches_schoolbook():
    rng = random.Random(6)
    R = make_params(7, 1, 5)
    for _ in range(20):
        f = list(rpoly(R, rng, rng.randrange(40, 120)).rows)
        d = list(rpoly(R, rng, rng.randrange(3, 30)).rows) + [R.one]
        assert fast_divmod(R, f, d) == raw_divmod(R, f, d)


def test_series_inverse():
    R = make_params(5, 1, 4)
    f = [R.raw(1), R.raw(3), R.raw(7)]
    inv = series_inverse(R, f, 20)
    prod = trim(raw_mul(R, f, inv))[:20]
    assert prod[0] == R.one and all(not any(c) for c in prod[1:])


def test_bezout_trivial_cases():
    R = make_params(7, 1, 5)
    P = ZqPoly(R, [1, 1, 0, 1])
    assert bezout_decompose(P, P) == (ZqPoly(R, [1]), ZqPoly(R))
    assert bezout_decompose(P.derivative(), P) == (ZqPoly(R), ZqPoly(R, [1]))


def test_bezout_rational_example():
    # B = (27-18x)/31, C = (6x^2-9x+4)/31 from an exact extended Euclid over Q
    x = sympy.symbols("x")
    P = x**3 + x + 1
    s, t, h = sympy.gcdex(P, sympy.diff(P, x), x)
    assert h == 1
    assert sympy.expand(s - (27 - 18 * x) / sympy.Integer(31)) == 0
    assert sympy.expand(t - (6 * x**2 - 9 * x + 4) / sympy.Integer(31)) == 0
    R = make_params(7, 1, 9)
    B, C = bezout_decompose(ZqPoly(R, [1]), ZqPoly(R, [1, 1, 0, 1]))
    M = R.pN
    assert [c.coeffs[0] for c in B.coeffs] == [residue(Fraction(27, 31), M), residue(Fraction(-18, 31), M)]
    assert [c.coeffs[0] for c in C.coeffs] == [residue(Fraction(v, 31), M) for v in (4, -9, 6)]
    # spot check P*B + P'*C = 1 at x = 0 and x = 1
    for v in (0, 1):
        Pv = ZqPoly(R, [1, 1, 0, 1])
        assert Pv(v) * B(v) + Pv.derivative()(v) * C(v) == 1


@pytest.mark.parametrize("p,g,n", [(7, 1, 1), (5, 2, 1), (3, 2, 2)])
def test_bezout_reconstruction_random(p, g, n):
    from .conftest import random_curve

    rng = random.Random(p * g * n)
    spec = random_curve(rng, p, g, n)
    R = make_params(p, n, 6, spec.field.modulus)
    P = ZqPoly(R, [R.raw(c) for c in spec.Pbar])
    ctx = BezoutContext(P)
    assert P * ctx.U + P.derivative() * ctx.V == ZqPoly(R, [1])
    for _ in range(100):
        A = rpoly(R, rng, rng.randrange(p * (2 * g + 1) * 4 + 1))
        B, C = bezout_decompose(A, ctx)
        assert P * B + P.derivative() * C == A
        assert C.degree < 2 * g + 1


def test_bezout_rejects_repeated_root():
    R = make_params(7, 1, 3)
    with pytest.raises(NotSquarefree):
        BezoutContext(ZqPoly(R, [0, 0, 0, 1]))


@given(st.lists(st.integers(0, 124), min_size=1, max_size=15), st.lists(st.integers(0, 124), min_size=1, max_size=15))
def test_product_commutes(a, b):
    R = make_params(5, 1, 3)
    f, g = ZqPoly(R, a), ZqPoly(R, b)
    assert f * g == g * f
