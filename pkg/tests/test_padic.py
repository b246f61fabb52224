import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypzeta import ZqElem, default_modulus, make_params, reduce_precision, zq_inv, zq_sigma
from hypzeta.errors import EvenCharacteristic, InvalidParameters, NotUnit, ParameterMismatch
from hypzeta.padic import PadicParams, fp_is_irreducible


def elem(R, rng):
    return ZqElem(R, tuple(rng.randrange(R.pN) for _ in range(R.n)))


def unit(R, rng):
    while True:
        a = elem(R, rng)
        if a.is_unit():
            return a


def test_multiplication_example():
    R = make_params(5, 1, 2)
    assert (ZqElem(R, 7) * ZqElem(R, 18)).coeffs == (1,)


def test_additive_identity():
    R = make_params(7, 2, 3)
    a = ZqElem(R, (10, 20))
    assert a + ZqElem(R, 0) == a


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ring_axioms_random(n):
    rng = random.Random(n)
    R = make_params(5, n, 4)
    for _ in range(100):
        a, b, c = elem(R, rng), elem(R, rng), elem(R, rng)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert (a + b) - b == a


def test_results_are_reduced():
    R = make_params(3, 3, 2)
    a = ZqElem(R, (-1, 100, 8))
    assert all(0 <= c < R.pN for c in a.coeffs) and len(a.coeffs) == 3


def test_parameter_mismatch():
    a = ZqElem(make_params(5, 1, 2), 1)
    b = ZqElem(make_params(5, 1, 3), 1)
    with pytest.raises(ParameterMismatch):
        a + b


def test_inverse_examples():
    R = make_params(5, 1, 2)
    assert zq_inv(ZqElem(R, 7)).coeffs == (18,)
    assert zq_inv(ZqElem(R, 1)) == 1
    with pytest.raises(NotUnit):
        zq_inv(ZqElem(R, 5))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_inverse_random_units(n):
    rng = random.Random(10 + n)
    R = make_params(7, n, 5)
    for _ in range(100):
        a = unit(R, rng)
        assert a * zq_inv(a) == 1


def test_non_unit_in_extension():
    R = make_params(5, 2, 3)
    with pytest.raises(NotUnit):
        ZqElem(R, (5, 10)).inverse()


def test_sigma_identity_on_prime_field():
    R = make_params(11, 1, 3)
    for v in range(0, 1331, 37):
        assert zq_sigma(ZqElem(R, v)) == ZqElem(R, v)


def test_sigma_is_frobenius_mod_p():
    rng = random.Random(2)
    R = make_params(5, 2, 3)
    R1 = R.with_precision(1)
    for _ in range(100):
        a = elem(R, rng)
        lhs = a.sigma().reduce_precision(1)
        rhs = ZqElem(R1, a.reduce_precision(1).coeffs) ** 5
        assert lhs == rhs


def test_sigma_order_n():
    rng = random.Random(3)
    R = make_params(5, 3, 4)
    for _ in range(100):
        a = elem(R, rng)
        assert a.sigma().sigma().sigma() == a


def test_sigma_t_is_root_of_modulus():
    R = make_params(7, 3, 6)
    s = ZqElem(R, R.sigma_t)
    m = R.modulus
    acc = ZqElem(R, 0)
    for c in reversed(m):
        acc = acc * s + c
    assert acc == 0


@given(st.integers(0, 5**4 - 1), st.integers(0, 5**4 - 1), st.integers(0, 5**4 - 1), st.integers(0, 5**4 - 1))
def test_sigma_homomorphism(a0, a1, b0, b1):
    R = make_params(5, 2, 4)
    a, b = ZqElem(R, (a0, a1)), ZqElem(R, (b0, b1))
    assert (a * b).sigma() == a.sigma() * b.sigma()
    assert (a + b).sigma() == a.sigma() + b.sigma()


def test_reduce_precision_examples():
    R = make_params(5, 1, 3)
    a = ZqElem(R, 24)
    assert reduce_precision(a, 3) == a
    assert reduce_precision(a, 1).coeffs == (4,)
    b = ZqElem(R, 117)
    assert reduce_precision(reduce_precision(b, 3), 2) == reduce_precision(b, 2)
    with pytest.raises(InvalidParameters):
        reduce_precision(a, 0)
    with pytest.raises(InvalidParameters):
        reduce_precision(a, 4)


def test_default_modulus_is_lex_smallest():
    assert default_modulus(5, 2) == (2, 0, 1)
    assert default_modulus(7, 2) == (1, 0, 1)
    assert default_modulus(5, 3) == (1, 1, 0, 1)
    # brute check: nothing smaller in lex order (a_{n-1}, ..., a_0) is irreducible
    for a1 in range(5):
        for a0 in range(5):
            if (a1, a0) < (0, 2):
                assert not fp_is_irreducible([a0, a1, 1], 5)


def test_parameter_validation():
    with pytest.raises(EvenCharacteristic):
        make_params(2, 1, 1)
    with pytest.raises(InvalidParameters):
        make_params(9, 1, 1)
    with pytest.raises(InvalidParameters):
        PadicParams(5, 2, 1, (1, 0, 1))  # x^2 + 1 = (x-2)(x+2) over F_5
    with pytest.raises(InvalidParameters):
        PadicParams(5, 1, 0)


def test_deterministic():
    R = make_params(7, 2, 5)
    a = ZqElem(R, (123, 4567))
    assert (a * a).coeffs == (a * a).coeffs
    assert a.sigma().coeffs == a.sigma().coeffs
