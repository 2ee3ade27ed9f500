"""Integral binary forms, resultants and the standing hypotheses on (a, F)."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from math import isqrt

from sympy import Poly, symbols

from .intarith import factorize, field_character, is_inert, is_prime, is_square, is_squarefree

_X = symbols("x")

# number of admissible primes scanned by the finite-field certificates
CERTIFICATE_PRIMES = 50


class Irreducibility(enum.Enum):
    IRREDUCIBLE = "irreducible"
    REDUCIBLE = "reducible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BinaryForm:
    """F(u, v) = sum_j coeffs[j] * u**(d - j) * v**j."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs or not any(self.coeffs):
            raise ValueError("binary form must have a nonzero coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, u: int, v: int) -> int:
        return evaluate(self, u, v)

    def __mul__(self, other: BinaryForm) -> BinaryForm:
        out = [0] * (self.degree + other.degree + 1)
        for i, c in enumerate(self.coeffs):
            for j, e in enumerate(other.coeffs):
                out[i + j] += c * e
        return BinaryForm(tuple(out))

    def discriminant(self) -> int:
        """Discriminant of a quadratic form b^2 - 4ac."""
        if self.degree != 2:
            raise ValueError("discriminant is only provided for quadratic forms")
        a, b, c = self.coeffs
        return b * b - 4 * a * c

    def __str__(self) -> str:
        d = self.degree
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "".join(
                s if e == 1 else f"{s}^{e}" for s, e in (("u", d - j), ("v", j)) if e
            )
            terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(terms) or "0"


def evaluate(F: BinaryForm, u: int, v: int) -> int:
    d = F.degree
    # Horner in u with powers of v carried along
    acc = 0
    vpow = 1
    upows = [1] * (d + 1)
    for k in range(1, d + 1):
        upows[k] = upows[k - 1] * u
    for j, c in enumerate(F.coeffs):
        acc += c * upows[d - j] * vpow
        vpow *= v
    return acc


def sylvester_matrix(F: BinaryForm, G: BinaryForm) -> list[list[int]]:
    d, e = F.degree, G.degree
    size = d + e
    rows = []
    for k in range(e):
        rows.append([0] * k + list(F.coeffs) + [0] * (size - d - 1 - k))
    for k in range(d):
        rows.append([0] * k + list(G.coeffs) + [0] * (size - e - 1 - k))
    return rows


def bareiss_det(M: list[list[int]]) -> int:
    """Fraction-free determinant of a square integer matrix."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def resultant(F: BinaryForm, G: BinaryForm) -> int:
    """Homogeneous resultant: determinant of the Sylvester matrix at the declared degrees."""
    return bareiss_det(sylvester_matrix(F, G))


@dataclass(frozen=True)
class SurfaceSpec:
    """The pair (a, F = F_1 ... F_r) defining y^2 - a z^2 = F(u, v)."""

    a: int
    factors: tuple[BinaryForm, ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "factors",
            tuple(f if isinstance(f, BinaryForm) else BinaryForm(tuple(f)) for f in self.factors),
        )
        if not self.factors:
            raise ValueError("at least one factor is required")

    @classmethod
    def from_coefficients(cls, a: int, factors) -> SurfaceSpec:
        return cls(int(a), tuple(BinaryForm(tuple(f)) for f in factors))

    @property
    def r(self) -> int:
        return len(self.factors)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.factors)

    @property
    def n(self) -> int:
        return sum(self.degrees)

    @property
    def form(self) -> BinaryForm:
        out = self.factors[0]
        for f in self.factors[1:]:
            out = out * f
        return out

    def values(self, u: int, v: int) -> tuple[int, ...]:
        return tuple(evaluate(f, u, v) for f in self.factors)

    def first_odd_index(self) -> int | None:
        for i, d in enumerate(self.degrees):
            if d % 2:
                return i
        return None


def resultant_splitting(spec: SurfaceSpec, i: int, j: int) -> tuple[int, int, int]:
    """(r_ij, r_ij^(1), r_ij^(-1)) splitting the radical of r_ij by (a/p)."""
    if i == j:
        raise ValueError("need two distinct factor indices")
    r = resultant(spec.factors[i], spec.factors[j])
    if r == 0:
        raise ValueError(f"factors {i} and {j} share a root")
    plus, minus = 1, 1
    for p, _ in factorize(r).factors:
        if is_inert(spec.a, p):
            minus *= p
        else:
            plus *= p
    return r, plus, minus


def _mod_p_irreducible(F: BinaryForm, p: int) -> bool:
    return Poly(list(F.coeffs), _X, modulus=p).is_irreducible


def _primes():
    p = 2
    while True:
        if is_prime(p):
            yield p
        p += 1


def irreducible_over_q(F: BinaryForm) -> Irreducibility:
    """Root/discriminant test up to degree 2, finite-field certificate above."""
    d = F.degree
    if d == 0:
        return Irreducibility.REDUCIBLE
    if d == 1:
        return Irreducibility.IRREDUCIBLE
    if F.coeffs[0] == 0 or F.coeffs[-1] == 0:
        # divisible by v or by u
        return Irreducibility.REDUCIBLE
    if d == 2:
        return Irreducibility.REDUCIBLE if is_square(F.discriminant()) else Irreducibility.IRREDUCIBLE
    tried = 0
    for p in _primes():
        if F.coeffs[0] % p == 0:
            continue
        if _mod_p_irreducible(F, p):
            return Irreducibility.IRREDUCIBLE
        tried += 1
        if tried >= CERTIFICATE_PRIMES:
            return Irreducibility.UNKNOWN


def irreducible_over_quadratic(F: BinaryForm, a: int) -> Irreducibility:
    """Whether a Q-irreducible form stays irreducible over Q(sqrt a).

    Odd degrees cannot split into conjugate halves. Quadratics split iff
    disc/a is a rational square. Even degree >= 4 is certified irreducible
    by reduction modulo a split prime; otherwise the answer is UNKNOWN.
    """
    if irreducible_over_q(F) is Irreducibility.REDUCIBLE:
        raise ValueError(f"{F} is reducible over Q")
    d = F.degree
    if d % 2:
        return Irreducibility.IRREDUCIBLE
    if d == 2:
        return Irreducibility.REDUCIBLE if is_square(F.discriminant() * a) else Irreducibility.IRREDUCIBLE
    tried = 0
    for p in _primes():
        if (a * F.coeffs[0]) % p == 0 or field_character(a, p) != 1:
            continue
        if _mod_p_irreducible(F, p):
            return Irreducibility.IRREDUCIBLE
        tried += 1
        if tried >= CERTIFICATE_PRIMES:
            return Irreducibility.UNKNOWN


@dataclass
class ValidationReport:
    checks: list[tuple[str, str, str]] = field(default_factory=list)

    def add(self, name: str, status: str, detail: str = "") -> None:
        self.checks.append((name, status, detail))

    @property
    def ok(self) -> bool:
        return all(status != "fail" for _, status, _ in self.checks)

    @property
    def warnings(self) -> list[tuple[str, str, str]]:
        return [c for c in self.checks if c[1] == "unknown"]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"name": n, "status": s, "detail": d} for n, s, d in self.checks],
        }


class InvalidSurface(ValueError):
    def __init__(self, report: ValidationReport):
        failed = [f"{n}: {d}" for n, s, d in report.checks if s == "fail"]
        super().__init__("; ".join(failed))
        self.report = report


def validate_surface(spec: SurfaceSpec) -> ValidationReport:
    report = ValidationReport()
    a = spec.a
    if a in (0, 1):
        report.add("a squarefree", "fail", f"a={a} is excluded")
    elif not is_squarefree(a):
        report.add("a squarefree", "fail", f"a={a} has a square factor")
    else:
        report.add("a squarefree", "pass", f"a={a}")

    if spec.n % 2:
        report.add("n even", "fail", f"total degree {spec.n} is odd")
    else:
        report.add("n even", "pass", f"n={spec.n}")

    q_irreducible = []
    for i, F in enumerate(spec.factors):
        status = irreducible_over_q(F)
        q_irreducible.append(status)
        verdict = {"irreducible": "pass", "reducible": "fail", "unknown": "unknown"}[status.value]
        report.add(f"F_{i + 1} irreducible over Q", verdict, str(F))

    for i, j in combinations(range(spec.r), 2):
        r = resultant(spec.factors[i], spec.factors[j])
        report.add(
            f"Res(F_{i + 1}, F_{j + 1}) nonzero", "pass" if r else "fail", f"resultant {r}"
        )

    square_a = a in (0, 1) or (a > 0 and isqrt(a) ** 2 == a)
    for i, F in enumerate(spec.factors):
        if q_irreducible[i] is Irreducibility.REDUCIBLE or square_a:
            report.add(f"F_{i + 1} irreducible over Q(sqrt a)", "unknown", "skipped")
            continue
        status = irreducible_over_quadratic(F, a)
        verdict = {"irreducible": "pass", "reducible": "fail", "unknown": "unknown"}[status.value]
        report.add(f"F_{i + 1} irreducible over Q(sqrt a)", verdict, str(F))
    return report


def require_valid(spec: SurfaceSpec) -> ValidationReport:
    report = validate_surface(spec)
    if not report.ok:
        raise InvalidSurface(report)
    return report
