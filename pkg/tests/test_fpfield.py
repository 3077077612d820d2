import itertools

import pytest
from hypothesis import given, strategies as st

from qstructure.fpfield import Felt, FieldError, check_prime, elements, fp_inv, inv_mod, is_prime

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def test_is_prime_matches_sieve():
    limit = 500
    sieve = [True] * limit
    sieve[0] = sieve[1] = False
    for i in range(2, limit):
        if sieve[i]:
            for j in range(i * i, limit, i):
                sieve[j] = False
    assert [n for n in range(limit) if is_prime(n)] == [n for n in range(limit) if sieve[n]]


@pytest.mark.parametrize("bad", [0, 1, 4, 9, 15, -3, True])
def test_check_prime_rejects(bad):
    with pytest.raises(FieldError, match="prime required"):
        check_prime(bad)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_field_axioms_exhaustive(p):
    els = elements(p)
    zero, one = Felt(0, p), Felt(1, p)
    for a in els:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if a != zero:
            assert a * a.inv() == one
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
        assert (a - b) + b == a
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_inverse_of_zero_raises():
    with pytest.raises(FieldError):
        fp_inv(Felt(0, 7))
    with pytest.raises(FieldError):
        Felt(3, 7) / 0


def test_mixed_moduli_raise():
    with pytest.raises(FieldError, match="mismatch"):
        Felt(1, 3) + Felt(1, 5)


def test_out_of_range_value_rejected():
    with pytest.raises(FieldError):
        Felt(5, 5)
    assert Felt.of(-1, 5) == Felt(4, 5)


def test_examples():
    assert Felt(2, 5).inv() == Felt(3, 5)
    assert Felt(3, 7) * Felt(5, 7) == Felt(1, 7)
    assert inv_mod(4, 5) == 4
    assert int(Felt(4, 5)) == 4


@given(st.sampled_from(SMALL_PRIMES), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_reduction_is_a_homomorphism(p, x, y):
    assert Felt.of(x, p) + Felt.of(y, p) == Felt.of(x + y, p)
    assert Felt.of(x, p) * Felt.of(y, p) == Felt.of(x * y, p)
