"""Exact arithmetic in multiquadratic fields Q(sqrt d_1, ..., sqrt d_k).

Elements are stored on the basis of square-root monomials
prod_{i in S} sqrt(d_i), indexed by bitmasks S. Square roots of negative
radicands use the principal branch, so sqrt(d) * sqrt(d) = d for every d.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import isqrt

from .forms import BinaryForm, SurfaceSpec
from .intarith import factorize, is_square, squarefree_part


class BasisError(ValueError):
    pass


def _subset_product(radicands, mask: int) -> int:
    out = 1
    for i, d in enumerate(radicands):
        if mask >> i & 1:
            out *= d
    return out


def _check_basis(radicands: tuple[int, ...]) -> None:
    for d in radicands:
        if d in (0, 1) or squarefree_part(d) != d:
            raise BasisError(f"radicand {d} is not a squarefree integer other than 0, 1")
    for size in range(2, len(radicands) + 1):
        for combo in combinations(radicands, size):
            prod = 1
            for d in combo:
                prod *= d
            if is_square(prod):
                raise BasisError(f"radicands {combo} are multiplicatively dependent")


class MQElement:
    __slots__ = ("radicands", "coords")

    def __init__(self, radicands=(), coords=None, _checked=False):
        self.radicands = tuple(int(d) for d in radicands)
        if not _checked:
            _check_basis(self.radicands)
        self.coords = {
            int(m): Fraction(c) for m, c in (coords or {}).items() if c != 0
        }

    # constructors ------------------------------------------------------
    @classmethod
    def rational(cls, q, radicands=()) -> MQElement:
        return cls(radicands, {0: Fraction(q)})

    @classmethod
    def sqrt(cls, d: int) -> MQElement:
        """Principal square root of a nonzero integer."""
        if d == 0:
            return cls()
        k = squarefree_part(d)
        s = isqrt(d // k)
        if k == 1:
            return cls.rational(s)
        return cls((k,), {1: s})

    @classmethod
    def coerce(cls, x) -> MQElement:
        return x if isinstance(x, MQElement) else cls.rational(x)

    # basis handling ----------------------------------------------------
    def _images_in(self, target: tuple[int, ...]) -> list[MQElement]:
        """Each sqrt(d_i) of self rewritten on the basis ``target``."""
        images = []
        for d in self.radicands:
            images.append(_express_sqrt(d, target))
        return images

    def rebased(self, target: tuple[int, ...]) -> MQElement:
        if target == self.radicands:
            return self
        images = self._images_in(target)
        out = MQElement(target, {}, _checked=True)
        for mask, c in self.coords.items():
            term = MQElement(target, {0: c}, _checked=True)
            for i, img in enumerate(images):
                if mask >> i & 1:
                    term = term._mul_same(img)
            out = out._add_same(term)
        return out

    def _aligned(self, other) -> tuple[MQElement, MQElement]:
        other = MQElement.coerce(other)
        if self.radicands == other.radicands:
            return self, other
        target = merge_bases(self.radicands, other.radicands)
        return self.rebased(target), other.rebased(target)

    # arithmetic --------------------------------------------------------
    def _add_same(self, other: MQElement) -> MQElement:
        coords = dict(self.coords)
        for m, c in other.coords.items():
            coords[m] = coords.get(m, 0) + c
        return MQElement(self.radicands, coords, _checked=True)

    def _mul_same(self, other: MQElement) -> MQElement:
        coords: dict[int, Fraction] = {}
        for m1, c1 in self.coords.items():
            for m2, c2 in other.coords.items():
                c = c1 * c2 * _subset_product(self.radicands, m1 & m2)
                m = m1 ^ m2
                coords[m] = coords.get(m, 0) + c
        return MQElement(self.radicands, coords, _checked=True)

    def __add__(self, other):
        x, y = self._aligned(other)
        return x._add_same(y)

    __radd__ = __add__

    def __neg__(self):
        return MQElement(self.radicands, {m: -c for m, c in self.coords.items()}, _checked=True)

    def __sub__(self, other):
        return self + (-MQElement.coerce(other))

    def __rsub__(self, other):
        return MQElement.coerce(other) - self

    def __mul__(self, other):
        x, y = self._aligned(other)
        return x._mul_same(y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MQElement):
            return self * other.inverse()
        q = Fraction(other)
        return MQElement(self.radicands, {m: c / q for m, c in self.coords.items()}, _checked=True)

    def conjugate(self, flips) -> MQElement:
        """Change the sign of sqrt(d_i) for i in ``flips`` (indices or a bitmask)."""
        mask = flips if isinstance(flips, int) else sum(1 << i for i in flips)
        return MQElement(
            self.radicands,
            {m: (-c if bin(m & mask).count("1") % 2 else c) for m, c in self.coords.items()},
            _checked=True,
        )

    def norm_to_q(self) -> Fraction:
        """Product of all 2^k conjugates."""
        out = MQElement(self.radicands, {0: 1}, _checked=True)
        for mask in range(1 << len(self.radicands)):
            out = out._mul_same(self.conjugate(mask))
        if any(m for m in out.coords):
            raise ArithmeticError("norm did not descend to Q")
        return out.coords.get(0, Fraction(0))

    def inverse(self) -> MQElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # x^{-1} = (product of the nontrivial conjugates) / N(x)
        rest = MQElement(self.radicands, {0: 1}, _checked=True)
        for mask in range(1, 1 << len(self.radicands)):
            rest = rest._mul_same(self.conjugate(mask))
        return rest / self.norm_to_q()

    def is_zero(self) -> bool:
        return not self.coords

    def rational_value(self) -> Fraction | None:
        if all(m == 0 for m in self.coords):
            return self.coords.get(0, Fraction(0))
        return None

    def __eq__(self, other):
        if not isinstance(other, (MQElement, int, Fraction)):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.rational_value()) if self.rational_value() is not None else id(self)

    def __repr__(self):
        if not self.coords:
            return "0"
        parts = []
        for m in sorted(self.coords):
            c = self.coords[m]
            rad = _subset_product(self.radicands, m)
            parts.append(f"{c}" if m == 0 else f"{c}*sqrt({rad})")
        return " + ".join(parts)


def _express_sqrt(c: int, basis: tuple[int, ...]) -> MQElement:
    for mask in range(1 << len(basis)):
        prod = _subset_product(basis, mask)
        if prod % c == 0 and is_square(prod // c):
            s = isqrt(prod // c)
            negs = sum(1 for i, d in enumerate(basis) if mask >> i & 1 and d < 0)
            # prod_{S} sqrt(d_i) = s * i^negs * sqrt|c| and sqrt(c) = i^[c<0] * sqrt|c|
            sign = -1 if ((negs - (c < 0)) // 2) % 2 else 1
            return MQElement(basis, {mask: Fraction(sign, s)}, _checked=True)
    raise BasisError(f"sqrt({c}) is not in the span of {basis}")


def _in_span(c: int, basis: tuple[int, ...]) -> bool:
    try:
        _express_sqrt(c, basis)
        return True
    except BasisError:
        return False


def merge_bases(first: tuple[int, ...], second: tuple[int, ...]) -> tuple[int, ...]:
    """Smallest independent extension of ``first`` covering ``second``."""
    out = tuple(first)
    for c in second:
        if not _in_span(c, out):
            out = out + (c,)
    _check_basis(out)
    return out


class MQLinearForm:
    """L(u, v) = alpha * u - beta * v."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha, beta):
        alpha, beta = MQElement.coerce(alpha), MQElement.coerce(beta)
        if alpha.is_zero() and beta.is_zero():
            raise ValueError("linear form must be nonzero")
        self.alpha, self.beta = alpha._aligned(beta)

    def __call__(self, u, v) -> MQElement:
        return self.alpha * u - self.beta * v

    def times(self, other: MQLinearForm) -> tuple[MQElement, MQElement, MQElement]:
        """Coefficients (u^2, uv, v^2) of the product of two linear forms."""
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        return a1 * a2, -(a1 * b2 + a2 * b1), b1 * b2

    def __repr__(self):
        return f"({self.alpha})*u - ({self.beta})*v"


def split_quadratic(F: BinaryForm) -> tuple[MQLinearForm, MQLinearForm]:
    """Factor an irreducible quadratic form over Q(sqrt disc).

    The leading coefficient rides on the first factor, and the pair is ordered
    so that delta(L1, L2) = sqrt(disc).
    """
    if F.degree != 2:
        raise ValueError("split_quadratic needs a degree-2 form")
    a1, b1, c1 = F.coeffs
    disc = b1 * b1 - 4 * a1 * c1
    if a1 == 0 or is_square(disc):
        raise ValueError(f"{F} splits over Q")
    root = MQElement.sqrt(disc)
    L1 = MQLinearForm(MQElement.rational(a1), (-root - b1) / 2)
    L2 = MQLinearForm(MQElement.rational(1), (root - b1) / (2 * a1))
    return L1, L2


def delta(Li: MQLinearForm, Lj: MQLinearForm) -> MQElement:
    """The 2x2 determinant alpha_i beta_j - alpha_j beta_i."""
    return Li.alpha * Lj.beta - Lj.alpha * Li.beta


def pluecker_residue(Lj: MQLinearForm, Lk: MQLinearForm, Ll: MQLinearForm, u, v) -> MQElement:
    """Delta_jk L_l + Delta_kl L_j + Delta_lj L_k at (u, v); identically zero."""
    return delta(Lj, Lk) * Ll(u, v) + delta(Lk, Ll) * Lj(u, v) + delta(Ll, Lj) * Lk(u, v)


def linear_factors(spec: SurfaceSpec) -> list[list[MQLinearForm]]:
    """Linear factors of every F_i of degree <= 2, grouped per factor."""
    out = []
    for F in spec.factors:
        if F.degree == 1:
            c0, c1 = F.coeffs
            out.append([MQLinearForm(c0, -c1)])
        elif F.degree == 2:
            out.append(list(split_quadratic(F)))
        else:
            raise NotImplementedError("factors of degree > 2 are not split")
    return out
