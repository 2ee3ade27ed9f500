"""Exact integer utilities: factorization, valuations, Kronecker symbols."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from sympy import factorint, isprime

TRIAL_BOUND = 10**6
DEFAULT_MAX_BITS = 256


class FactorLimitError(ArithmeticError):
    """Raised when a cofactor is too large to factor within the bit budget."""


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]
    sign: int

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def recompose(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    sieve = bytearray([1]) * (TRIAL_BOUND + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(TRIAL_BOUND) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, TRIAL_BOUND + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _trial_divide(m: int, out: dict[int, int]) -> int:
    # small primes first without touching the sieve
    for p in (2, 3, 5, 7, 11, 13):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    if m < 17 * 17:
        return m
    for p in _small_primes()[6:]:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out[p] = e
    return m


@lru_cache(maxsize=65536)
def factorize(n: int, max_bits: int = DEFAULT_MAX_BITS) -> Factorization:
    """Prime factorization of a nonzero integer.

    Trial division up to 10**6, then a randomized splitting method for the
    cofactor. Cofactors above ``max_bits`` bits that are not prime raise
    :class:`FactorLimitError`.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    m = _trial_divide(m, found)
    if m > 1:
        if m < TRIAL_BOUND**2 or isprime(m):
            # cofactor below the trial bound squared is prime
            found[m] = found.get(m, 0) + 1
        else:
            if m.bit_length() > max_bits:
                raise FactorLimitError(f"cofactor of {m.bit_length()} bits exceeds {max_bits}")
            for p, e in factorint(m).items():
                if not isprime(p):
                    raise FactorLimitError(f"could not certify {p}")
                found[p] = found.get(p, 0) + e
    return Factorization(n, tuple(sorted(found.items())), sign)


def is_prime(p: int) -> bool:
    return p >= 2 and bool(isprime(p))


def valuation(n: int, p: int) -> int:
    """Exponent of the prime ``p`` in ``n``."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_squarefree(n: int) -> bool:
    if n == 0:
        raise ValueError("0 is not squarefree-testable")
    return all(e == 1 for _, e in factorize(n).factors)


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel: n = squarefree_part(n) * s**2."""
    f = factorize(n)
    out = f.sign
    for p, e in f.factors:
        if e % 2:
            out *= p
    return out


def radical(n: int) -> int:
    out = 1
    for p, _ in factorize(n).factors:
        out *= p
    return out


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extended to all integers n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(a, n)


def divisors(n: int) -> list[int]:
    """Positive divisors of a nonzero integer, sorted."""
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def field_character(a: int, n: int) -> int:
    """kronecker(D, n) for D the fundamental discriminant of Q(sqrt a).

    Equals (a/n) for odd n; at n = 2 it sees the ramification that the bare
    symbol (a/2) misses when a = 3 mod 4.
    """
    D = a if a % 4 == 1 else 4 * a
    return kronecker(D, n)


def is_inert(a: int, p: int) -> bool:
    return field_character(a, p) == -1
