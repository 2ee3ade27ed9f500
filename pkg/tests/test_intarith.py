import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chatelet.intarith import (
    FactorLimitError,
    divisors,
    factorize,
    field_character,
    is_inert,
    is_squarefree,
    jacobi,
    kronecker,
    squarefree_part,
    valuation,
)


def trial_division(n):
    n = abs(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def legendre_bruteforce(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if any(x * x % p == a for x in range(1, p)) else -1


def test_factorize_examples():
    f = factorize(12)
    assert f.as_dict() == {2: 2, 3: 1} and f.sign == 1
    f = factorize(-1)
    assert f.factors == () and f.sign == -1
    assert factorize(9797).as_dict() == trial_division(9797) == {97: 1, 101: 1}


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_large_cofactor():
    p, q = 1000003, 1000033
    assert factorize(p * q).as_dict() == {p: 1, q: 1}
    big = (2**61 - 1) * (2**89 - 1)
    assert factorize(big).as_dict() == {2**61 - 1: 1, 2**89 - 1: 1}


def test_factor_limit():
    n = (2**127 - 1) * (2**521 - 1)
    with pytest.raises(FactorLimitError):
        factorize(n, max_bits=64)


def test_factorize_roundtrip_exhaustive_block():
    for n in list(range(-3000, 0)) + list(range(1, 3000)) + list(range(999_000, 1_000_001)):
        f = factorize(n)
        assert f.recompose() == n
        primes = f.primes()
        assert list(primes) == sorted(set(primes))


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=-(10**6), max_value=10**6).filter(lambda n: n != 0))
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert f.recompose() == n
    assert f.as_dict() == trial_division(n)


def test_valuation_examples():
    assert valuation(12, 2) == 2
    assert valuation(12, 5) == 0
    assert valuation(-250, 5) == 3


def test_valuation_errors():
    with pytest.raises(ValueError):
        valuation(0, 2)
    with pytest.raises(ValueError):
        valuation(12, 4)


@given(
    st.integers(min_value=1, max_value=10**9) | st.integers(max_value=-1, min_value=-(10**9)),
    st.integers(min_value=1, max_value=10**9) | st.integers(max_value=-1, min_value=-(10**9)),
    st.sampled_from([2, 3, 5, 7, 11, 13]),
)
def test_valuation_additive(m, n, p):
    assert valuation(m * n, p) == valuation(m, p) + valuation(n, p)


def test_kronecker_examples():
    assert kronecker(-1, 5) == 1
    assert kronecker(2, 3) == -1
    assert kronecker(21, 7) == 0


def test_kronecker_matches_legendre():
    for p in [3, 5, 7, 11, 13, 17, 19, 23, 97]:
        for a in range(-50, 50):
            assert kronecker(a, p) == legendre_bruteforce(a, p)


def test_kronecker_multiplicative_random():
    rng = random.Random(20261018)
    for _ in range(10_000):
        a = rng.randint(-500, 500)
        m = rng.choice([-1, 1]) * rng.randint(1, 400)
        n = rng.choice([-1, 1]) * rng.randint(1, 400)
        assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_jacobi_rejects_even_modulus():
    with pytest.raises(ValueError):
        jacobi(3, 8)


def test_is_squarefree():
    assert is_squarefree(-1)
    assert not is_squarefree(12)
    assert is_squarefree(1155)
    with pytest.raises(ValueError):
        is_squarefree(0)


def test_squarefree_part_signed():
    assert squarefree_part(-12) == -3
    assert squarefree_part(72) == 2
    for n in range(-200, 200):
        if n:
            k = squarefree_part(n)
            assert n % k == 0 and (n // k) > 0
            s = round((n // k) ** 0.5)
            assert s * s == n // k


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(-7) == [1, 7]


def test_field_character_at_two():
    # 2 ramifies in Q(sqrt 3) although the bare symbol (3/2) is -1
    assert kronecker(3, 2) == -1
    assert field_character(3, 2) == 0
    assert not is_inert(3, 2)
    assert is_inert(5, 2)
    assert is_inert(-3, 2)
    for a in (-7, -3, 5, 13):
        for p in (3, 5, 7, 11, 13):
            assert field_character(a, p) == kronecker(a, p)
