"""Point counts N(B), the sums S(X), gcd recovery of (t, u, v), local densities."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, sqrt

from .forms import SurfaceSpec, require_valid
from .intarith import is_inert, is_prime
from .points import enumerate_points
from .quadfield import r_a_count, r_a_divisor_formula
from .torsors import LabelUnknown, TorsorLabel, assign_label

# exhaustive local densities cost about p^(2n) histogram cells per level
DEFAULT_DENSITY_BUDGET = 2 * 10**7
DEFAULT_SAMPLES = 200_000


class SymmetryError(ArithmeticError):
    pass


@dataclass
class CountReport:
    bound: int
    total: int
    raw_quintuples: int
    per_label: dict = field(default_factory=dict)
    zero_locus: int = 0
    screened: int = 0
    unknowns: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.total == sum(self.per_label.values()) + self.screened

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "total": self.total,
            "raw_quintuples": self.raw_quintuples,
            "per_label": [
                {"label": lab.to_dict(), "count": c} for lab, c in sorted(self.per_label.items())
            ],
            "zero_locus": self.zero_locus,
            "screened": self.screened,
            "unknowns": [{"point": list(p), "reason": r} for p, r in self.unknowns],
            "consistent": self.consistent,
        }


def count_nb(spec: SurfaceSpec, B: int, jobs: int | None = None, labels: bool = True) -> CountReport:
    """N(B) for the sup norm, with a per-torsor breakdown.

    Points whose label cannot be decided are tallied as screened.
    """
    require_valid(spec)
    enum = enumerate_points(spec, B, jobs)
    if enum.symmetry_violations:
        raise SymmetryError(f"{len(enum.symmetry_violations)} points break the sign pairing")
    if enum.raw_quintuples % 4:
        raise SymmetryError(f"raw count {enum.raw_quintuples} is not divisible by 4")
    total = enum.raw_quintuples // 4
    if total != len(enum.points):
        raise SymmetryError(f"raw/4 = {total} but {len(enum.points)} distinct points")
    report = CountReport(B, total, enum.raw_quintuples)
    if not labels:
        report.screened = total
        return report
    for pt in enum.points:
        if any(x == 0 for x in spec.values(pt.u, pt.v)):
            report.zero_locus += 1
        lab = assign_label(spec, pt)
        if isinstance(lab, LabelUnknown):
            report.screened += 1
            report.unknowns.append(((pt.y, pt.z, pt.t, pt.u, pt.v), lab.reason))
            continue
        report.per_label[lab] = report.per_label.get(lab, 0) + 1
    return report


def chain_vectors(B: int, m: int):
    """Integer (x_0, ..., x_m) in [-B, B]^(m+1) with x_k x_(k+2) = x_(k+1)^2."""
    if m == 1:
        for x0 in range(-B, B + 1):
            for x1 in range(-B, B + 1):
                yield (x0, x1)
        return
    for xm in range(-B, B + 1):
        yield (0,) * m + (xm,)
    for x0 in range(-B, B + 1):
        if x0 == 0:
            continue
        for x1 in range(-B, B + 1):
            x = [x0, x1]
            ok = True
            for k in range(m - 1):
                num = x[k + 1] ** 2
                if num % x[k] if x[k] else num:
                    ok = False
                    break
                nxt = num // x[k] if x[k] else 0
                if abs(nxt) > B:
                    ok = False
                    break
                x.append(nxt)
            if ok:
                yield tuple(x)


def quadric_value(F, x) -> int:
    """Q(x_0, ..., x_m) = sum_j c_j x_floor(j/2) x_ceil(j/2), so Q = t^2 F(u, v) on the chain."""
    return sum(c * x[j // 2] * x[(j + 1) // 2] for j, c in enumerate(F.coeffs))


def count_nb_bruteforce(spec: SurfaceSpec, B: int) -> int:
    """Independent oracle: primitive integer points of S' with sup norm <= B, up to sign.

    Works on the anticanonical model directly (quadric chain plus
    y^2 - a z^2 = Q(x)) and never uses the (t, u, v) parametrization.
    """
    m = spec.n // 2
    F = spec.form
    a = spec.a
    count = 0
    for head in chain_vectors(B, m):
        N = quadric_value(F, head)
        for z in range(-B, B + 1):
            w = N + a * z * z
            if w < 0:
                continue
            y = isqrt(w)
            if y * y != w or y > B:
                continue
            for yy in {y, -y}:
                if gcd(*head, yy, z) == 1:
                    count += 1
    if count % 2:
        raise SymmetryError("primitive vectors do not pair up under x -> -x")
    return count // 2


def recover_parametrization(x) -> list[tuple[int, int, int]]:
    """Both (t, u, v) with x_k = t u^(m-k) v^k, gcd(u, v) = 1.

    x must satisfy x_0 x_2 = x_1^2, ..., x_(m-2) x_m = x_(m-1)^2.
    """
    x = [int(c) for c in x]
    m = len(x) - 1
    if m < 1:
        raise ValueError("need at least two coordinates")
    for k in range(m - 1):
        if x[k] * x[k + 2] != x[k + 1] ** 2:
            raise ValueError(f"x_{k} x_{k + 2} != x_{k + 1}^2")
    t = gcd(*x)
    if t == 0:
        raise ValueError("x must be nonzero")
    y = [c // t for c in x]
    u = gcd(*y[:m])
    v = gcd(*y[1:])
    out = []
    for st in (1, -1):
        for su in (1, -1):
            for sv in (1, -1):
                T, U, V = st * t, su * u, sv * v
                if (T, U, V) in out:
                    continue
                if all(T * U ** (m - k) * V**k == x[k] for k in range(m + 1)):
                    out.append((T, U, V))
    if len(out) != 2:
        raise ValueError(f"expected two preimages, found {out}")
    return sorted(out, reverse=True)


def sum_r_a(spec: SurfaceSpec, X: int, box: int | None = None, use_formula: bool = False) -> int:
    """S(X): sum of r_a(F(x)) over integer x in [-X, X]^2 with F(x) > 0."""
    a = spec.a
    if a > 0 and box is None:
        raise ValueError("a > 0 needs a (y, z) box")
    F = spec.form
    cache: dict[int, int] = {}
    total = 0
    for u in range(-X, X + 1):
        for v in range(-X, X + 1):
            w = F(u, v)
            if w <= 0:
                continue
            if w not in cache:
                cache[w] = r_a_divisor_formula(w, a) if use_formula else r_a_count(w, a, box)
            total += cache[w]
    return total


def _nu_truncated(x: int, p: int, level: int) -> int:
    """Valuation of a residue mod p^level, capped at level."""
    x %= p**level
    if x == 0:
        return level
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass
class DensityLevel:
    level: int
    value: Fraction | float
    exact: bool
    count: int | None = None
    ambiguous: int = 0
    stderr: float | None = None

    def to_dict(self) -> dict:
        val = self.value
        return {
            "level": self.level,
            "value": f"{val.numerator}/{val.denominator}" if isinstance(val, Fraction) else val,
            "exact": self.exact,
            "count": self.count,
            "ambiguous": self.ambiguous,
            "stderr": self.stderr,
        }


def _parity_filter(spec: SurfaceSpec, label: TorsorLabel, p: int, level: int):
    """f(u, v) -> (parity condition holds, some valuation reached the cap).

    The parity is read off min(nu_p, level); when the cap is reached the
    true parity is not determined by the residue, which is flagged.
    """
    if not is_inert(spec.a, p):
        return lambda u, v: (True, False)
    mu = [1 if m % p == 0 else 0 for m in label.m]

    def check(u, v):
        ok, capped = True, False
        for F, target in zip(spec.factors, mu):
            nu = _nu_truncated(F(u, v), p, level)
            capped = capped or nu >= level
            if (nu - target) % 2:
                ok = False
        return ok, capped

    return check


def _norm_histograms(a: int, p: int, q: int):
    hist = [0] * q
    hist_pp = [0] * q
    for y in range(q):
        yy = y * y
        for z in range(q):
            w = (yy - a * z * z) % q
            hist[w] += 1
            if y % p == 0 and z % p == 0:
                hist_pp[w] += 1
    return hist, hist_pp


def _exact_level(spec, label, p, level) -> DensityLevel:
    q = p**level
    hist, hist_pp = _norm_histograms(spec.a, p, q)
    squares = [t * t % q for t in range(q)]
    F = spec.form
    parity = _parity_filter(spec, label, p, level)
    per_c: dict[int, int] = {}
    count = 0
    ambiguous = 0
    for u in range(q):
        for v in range(q):
            if u % p == 0 and v % p == 0:
                continue
            ok, capped = parity(u, v)
            if not ok:
                continue
            c = F(u, v) % q
            if c not in per_c:
                s = 0
                for t in range(q):
                    w = c * squares[t] % q
                    s += hist[w]
                    if t % p == 0:
                        s -= hist_pp[w]
                per_c[c] = s
            if capped:
                ambiguous += per_c[c]
            count += per_c[c]
    return DensityLevel(level, Fraction(count, p ** (4 * level)), True, count, ambiguous)


def _sampled_level(spec, label, p, level, samples, rng) -> DensityLevel:
    q = p**level
    F = spec.form
    a = spec.a
    parity = _parity_filter(spec, label, p, level)
    hits = 0
    ambiguous = 0
    for _ in range(samples):
        u, v, y, z, t = (rng.randrange(q) for _ in range(5))
        if u % p == 0 and v % p == 0:
            continue
        if y % p == 0 and z % p == 0 and t % p == 0:
            continue
        if (t * t * F(u, v) - y * y + a * z * z) % q:
            continue
        ok, capped = parity(u, v)
        if ok:
            hits += 1
            ambiguous += capped
    # value = q * P(hit) since there are q^5 tuples and we divide by q^4
    phat = hits / samples
    return DensityLevel(
        level, q * phat, False, hits, ambiguous, q * sqrt(phat * (1 - phat) / samples)
    )


def local_density(
    spec: SurfaceSpec,
    label: TorsorLabel,
    p: int,
    levels: int,
    budget: int = DEFAULT_DENSITY_BUDGET,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> list[DensityLevel]:
    """Truncated densities omega_p at levels 1..levels.

    The parity condition applies at inert p only and is read off the
    truncated valuation min(nu_p, level). Counted solutions whose (u, v)
    hit the cap are also tallied in ``ambiguous``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    rng = random.Random(seed)
    out = []
    for level in range(1, levels + 1):
        q = p**level
        if q * q <= budget:
            out.append(_exact_level(spec, label, p, level))
        else:
            out.append(_sampled_level(spec, label, p, level, samples, rng))
    return out


def local_density_bruteforce(spec: SurfaceSpec, label: TorsorLabel, p: int, level: int) -> Fraction:
    """The defining p^(5n) loop; oracle for small p^n."""
    q = p**level
    F = spec.form
    a = spec.a
    parity = _parity_filter(spec, label, p, level)
    count = 0
    for u in range(q):
        for v in range(q):
            if u % p == 0 and v % p == 0:
                continue
            if not parity(u, v)[0]:
                continue
            c = F(u, v)
            for t in range(q):
                for y in range(q):
                    for z in range(q):
                        if t % p == 0 and y % p == 0 and z % p == 0:
                            continue
                        if (t * t * c - y * y + a * z * z) % q == 0:
                            count += 1
    return Fraction(count, p ** (4 * level))
