"""Arithmetic of Q(sqrt a): units, class numbers, norm equations, r_a(n)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from .intarith import divisors, factorize, is_inert, is_squarefree, kronecker

# cap on the number of y values tried by a single witness search
DEFAULT_SEARCH_LIMIT = 10**7


@dataclass(frozen=True)
class QuadFieldInfo:
    a: int
    fundamental_discriminant: int
    h: int | None
    h_plus: int | None = None
    unit: tuple[int, int, bool] | None = None  # (x, y, half): (x + y sqrt a) / 2**half
    unit_norm: int | None = None
    omega_a: int | None = None

    @property
    def real(self) -> bool:
        return self.a > 0

    def integral_unit(self) -> tuple[int, int]:
        """Fundamental unit of Z[sqrt a] as (x, y) with x + y sqrt a > 1."""
        x, y, half = self.unit
        if not half:
            return x, y
        # the cube of a half-integral unit always lies in Z[sqrt a]
        a = self.a
        return x * (x * x + 3 * a * y * y) // 8, y * (3 * x * x + a * y * y) // 8


@dataclass(frozen=True)
class Representable:
    x: int
    y: int


@dataclass(frozen=True)
class NotRepresentable:
    reason: str = ""


@dataclass(frozen=True)
class Unknown:
    reason: str = ""


def fundamental_discriminant(a: int) -> int:
    return a if a % 4 == 1 else 4 * a


def _check_a(a: int) -> None:
    if a in (0, 1) or not is_squarefree(a):
        raise ValueError(f"a={a} must be squarefree and not 0 or 1")


def _unit_from_convergents(a: int) -> tuple[int, int, bool, int]:
    """Fundamental unit of the maximal order via convergents of omega.

    omega = sqrt(a) or (1 + sqrt(a)) / 2. The first convergent p/q with
    N(p - q omega) = +-1 gives the unit; Legendre's criterion guarantees it
    is reached.
    """
    half = a % 4 == 1
    P, Q = (1, 2) if half else (0, 1)
    s = isqrt(a)
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        c = (P + s) // Q
        p_prev, p = p, c * p + p_prev
        q_prev, q = q, c * q + q_prev
        if half:
            norm = p * p - p * q - q * q * ((a - 1) // 4)
        else:
            norm = p * p - a * q * q
        if norm in (1, -1):
            break
        P = c * Q - P
        Q = (a - P * P) // Q
    if half:
        u, t = 2 * p - q, q
        if u % 2 == 0 and t % 2 == 0:
            return u // 2, t // 2, False, norm
        return u, t, True, norm
    return p, q, False, norm


def _imaginary_class_number(D: int) -> int:
    """Number of reduced primitive positive definite forms of discriminant D."""
    count = 0
    A = 1
    while 3 * A * A <= -D:
        for B in range(-A + 1, A + 1):
            num = B * B - D
            if num % (4 * A):
                continue
            C = num // (4 * A)
            if C < A:
                continue
            if C == A and B < 0:
                continue
            if gcd(gcd(A, B), C) != 1:
                continue
            count += 1
        A += 1
    return count


def _gt_sqrt(x: int, D: int) -> bool:
    return x > 0 and x * x > D


def _lt_sqrt(x: int, D: int) -> bool:
    return x < 0 or x * x < D


def _is_reduced_indefinite(A: int, B: int, D: int) -> bool:
    # 0 < B < sqrt D and sqrt D - B < 2|A| < sqrt D + B
    return B > 0 and _lt_sqrt(B, D) and _gt_sqrt(2 * abs(A) + B, D) and _lt_sqrt(2 * abs(A) - B, D)


def _rho(form: tuple[int, int, int], D: int) -> tuple[int, int, int]:
    A, B, C = form
    c = abs(C)
    # B' = -B mod 2|C| chosen in (sqrt D - 2|C|, sqrt D)
    r = (-B) % (2 * c)
    s = isqrt(D)
    # largest r' = r mod 2c with r' < sqrt D
    r += ((s - r) // (2 * c)) * 2 * c
    while not _lt_sqrt(r, D):
        r -= 2 * c
    while _lt_sqrt(r + 2 * c, D):
        r += 2 * c
    return C, r, (r * r - D) // (4 * C)


def _narrow_class_number(D: int) -> int:
    """Number of cycles of reduced indefinite forms of discriminant D."""
    s = isqrt(D)
    reduced = set()
    for B in range(1, s + 1):
        if (B - D) % 2:
            continue
        prod = (B * B - D) // 4  # A * C, negative
        for A0 in divisors(-prod):
            for A in (A0, -A0):
                C = prod // A
                if gcd(gcd(A, B), C) == 1 and _is_reduced_indefinite(A, B, D):
                    reduced.add((A, B, C))
    cycles = 0
    seen = set()
    for form in sorted(reduced):
        if form in seen:
            continue
        cycles += 1
        f = form
        while f not in seen:
            seen.add(f)
            f = _rho(f, D)
            if f not in reduced:
                raise ArithmeticError(f"reduction cycle left the reduced set at {f}")
    return cycles


@lru_cache(maxsize=None)
def field_info(a: int) -> QuadFieldInfo:
    _check_a(a)
    D = fundamental_discriminant(a)
    if a < 0:
        omega = 4 if a == -1 else 6 if a == -3 else 2
        return QuadFieldInfo(a, D, _imaginary_class_number(D), omega_a=omega)
    x, y, half, norm = _unit_from_convergents(a)
    h_plus = _narrow_class_number(D)
    h = h_plus if norm == -1 else h_plus // 2
    return QuadFieldInfo(a, D, h, h_plus, (x, y, half), norm)


def negative_pell_solvable(a: int) -> tuple[bool, tuple[int, int] | None]:
    """Whether x^2 - a y^2 = -1 has an integral solution, with a witness."""
    if a <= 1:
        raise ValueError("negative Pell needs a > 1")
    info = field_info(a)
    if info.unit_norm == 1:
        return False, None
    x, y = info.integral_unit()
    assert x * x - a * y * y == -1
    return True, (x, y)


def inert_parity_ok(n: int, a: int) -> bool:
    """nu_p(|n|) is even for every prime p with (a/p) = -1."""
    return all(e % 2 == 0 for p, e in factorize(n).factors if is_inert(a, p))


def _search(n: int, a: int, ymax: int) -> tuple[int, int] | None:
    for y in range(ymax + 1):
        w = n + a * y * y
        if w < 0:
            if a < 0:
                return None
            continue
        x = isqrt(w)
        if x * x == w:
            return x, y
    return None


def _real_search_bound(n: int, info: QuadFieldInfo) -> int:
    # |y| <= sqrt|n| * (x_e + |y_e| sqrt a), rounded up
    x, y = info.integral_unit()
    return (isqrt(abs(n)) + 1) * (x + abs(y) * (isqrt(info.a) + 1))


def is_norm(n: int, a: int, search_limit: int = DEFAULT_SEARCH_LIMIT):
    """Decide whether n = x^2 - a y^2 has an integral solution."""
    if n == 0:
        raise ValueError("n must be nonzero")
    info = field_info(a)
    root = isqrt(n) if n > 0 else -1
    if root * root == n:
        return Representable(root, 0)
    if a < 0:
        if info.h != 1:
            hit = _search(n, a, isqrt(n // -a)) if n > 0 else None
            return Representable(*hit) if hit else Unknown(f"h={info.h}")
        if n < 0:
            return NotRepresentable("negative values are not norms from an imaginary field")
        hit = _search(n, a, isqrt(n // -a))
        return Representable(*hit) if hit else NotRepresentable("exhaustive search")

    bound = _real_search_bound(n, info)
    if info.h != 1:
        hit = _search(n, a, min(bound, search_limit))
        return Representable(*hit) if hit else Unknown(f"h={info.h}")
    if not inert_parity_ok(n, a):
        return NotRepresentable("odd valuation at an inert prime")
    if bound > search_limit:
        return Unknown(f"search bound {bound} exceeds limit {search_limit}")
    hit = _search(n, a, bound)
    if hit:
        return Representable(*hit)
    if info.h_plus == 1:
        return Unknown("criterion holds but no witness within the bound")
    if _search(-n, a, bound):
        return NotRepresentable("the opposite sign is represented")
    return Unknown("neither sign found within the bound")


def r_a_count(n: int, a: int, box: int | None = None) -> int:
    """Number of (y, z) with y^2 - a z^2 = n, boxed by |y|, |z| <= box when a > 0."""
    if n < 1:
        raise ValueError("n must be positive")
    if a > 0 and box is None:
        raise ValueError("a > 0 needs a box bound")
    count = 0
    if a < 0:
        zmax = isqrt(n // -a)
        if box is not None:
            zmax = min(zmax, box)
        for z in range(zmax + 1):
            w = n + a * z * z
            y = isqrt(w)
            if y * y == w and (box is None or y <= box):
                count += (1 if y == 0 else 2) * (1 if z == 0 else 2)
        return count
    for z in range(box + 1):
        w = n + a * z * z
        y = isqrt(w)
        if y * y == w and y <= box:
            count += (1 if y == 0 else 2) * (1 if z == 0 else 2)
    return count


def r_a_divisor_formula(n: int, a: int) -> int:
    """omega_a * sum over d | n of chi(d), chi the character of Q(sqrt a).

    chi(d) = kronecker(D, d) with D the fundamental discriminant; this agrees
    with the Jacobi symbol (a/d) on odd d.
    """
    if a > 0:
        raise ValueError("divisor formula is for imaginary fields")
    info = field_info(a)
    if info.h != 1:
        raise ValueError(f"class number of Q(sqrt {a}) is {info.h}, not 1")
    D = info.fundamental_discriminant
    return info.omega_a * sum(kronecker(D, d) for d in divisors(n))
