"""Torsor classes Sigma x M and the assignment of rational points to them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from math import isqrt

from .forms import SurfaceSpec, require_valid, resultant_splitting
from .intarith import factorize, is_inert, is_square, squarefree_part, valuation
from .points import PointRecord, enumerate_points
from .quadfield import NotRepresentable, Representable, Unknown, field_info, is_norm


@dataclass(frozen=True, order=True)
class TorsorLabel:
    epsilon: tuple[int, ...]
    m: tuple[int, ...]

    @property
    def n(self) -> tuple[int, ...]:
        return tuple(e * m for e, m in zip(self.epsilon, self.m))

    def to_dict(self) -> dict:
        return {"epsilon": list(self.epsilon), "m": list(self.m)}

    def __str__(self):
        return f"eps={self.epsilon} m={self.m}"


@dataclass(frozen=True)
class LabelUnknown:
    reason: str


def sigma_set(spec: SurfaceSpec) -> list[tuple[int, ...]]:
    i0 = spec.first_odd_index()
    out = []
    for eps in product((1, -1), repeat=spec.r):
        prod = 1
        for e in eps:
            prod *= e
        if prod != 1 or (i0 is not None and eps[i0] != 1):
            continue
        out.append(eps)
    return sorted(out, reverse=True)


def inert_resultant_matrix(spec: SurfaceSpec) -> dict[tuple[int, int], int]:
    """r_ij^(-1) for every ordered pair i != j."""
    out = {}
    for i, j in combinations(range(spec.r), 2):
        _, _, minus = resultant_splitting(spec, i, j)
        out[i, j] = out[j, i] = minus
    return out


def m_set(spec: SurfaceSpec) -> list[tuple[int, ...]]:
    """Enumerate M prime by prime.

    For an inert prime p the indices i with p | m_i form a set S_p of even
    size whose members pairwise satisfy p | r_ij^(-1). Any such choice of the
    S_p meets every condition defining M, and every element of M arises this
    way.
    """
    r = spec.r
    rm = inert_resultant_matrix(spec)
    primes = sorted({p for v in rm.values() if v > 1 for p in factorize(v).primes()})
    choices_per_prime = []
    for p in primes:
        options = []
        for size in range(0, r + 1, 2):
            for S in combinations(range(r), size):
                if all(rm[i, j] % p == 0 for i, j in combinations(S, 2)):
                    options.append(S)
        choices_per_prime.append(options)
    out = set()
    for pick in product(*choices_per_prime):
        m = [1] * r
        for p, S in zip(primes, pick):
            for i in S:
                m[i] *= p
        out.add(tuple(m))
    return sorted(out)


def in_m_set(spec: SurfaceSpec, m, rm=None) -> bool:
    """Direct check of the defining conditions of M."""
    rm = rm or inert_resultant_matrix(spec)
    r = spec.r
    prod = 1
    for i in range(r):
        if m[i] < 1 or (m[i] > 1 and squarefree_part(m[i]) != m[i]):
            return False
        lcm = 1
        for j in range(r):
            if j != i:
                lcm = lcm * rm[i, j] // _gcd(lcm, rm[i, j])
        if lcm % m[i]:
            return False
        prod *= m[i]
    for i, j in combinations(range(r), 2):
        if rm[i, j] % _gcd(m[i], m[j]):
            return False
    return is_square(prod)


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return abs(x)


def torsor_classes(spec: SurfaceSpec) -> list[TorsorLabel]:
    return [TorsorLabel(e, m) for e in sigma_set(spec) for m in m_set(spec)]


@lru_cache(maxsize=1 << 16)
def _cached_norm(n: int, a: int):
    return is_norm(n, a)


def _inert_m(a: int, value: int) -> int:
    m = 1
    for p, e in factorize(value).factors:
        if e % 2 and is_inert(a, p):
            m *= p
    return m


def _sign_for(value: int, m: int, a: int, h_plus: int | None):
    """epsilon with value / (epsilon m) a norm from Z[sqrt a], or an Unknown."""
    if a < 0:
        return 1 if value > 0 else -1
    if h_plus == 1:
        # -1 is a norm, so both signs work; pin the label to epsilon = 1
        return 1
    res = _cached_norm(value // m, a)
    if isinstance(res, Representable):
        return 1
    if isinstance(res, NotRepresentable):
        other = _cached_norm(-value // m, a)
        if isinstance(other, Representable):
            return -1
        return Unknown(f"neither sign of {value // m} is a norm")
    return res


def _branch_values(spec: SurfaceSpec, u: int, v: int, flip: bool) -> tuple[int, ...]:
    return spec.values(-u, -v) if flip else spec.values(u, v)


def _has_odd_degree(spec: SurfaceSpec) -> bool:
    return spec.first_odd_index() is not None


def _label_on_branch(spec: SurfaceSpec, vals, h_plus):
    a = spec.a
    eps: list = [None] * spec.r
    ms: list = [None] * spec.r
    zeros = [i for i, x in enumerate(vals) if x == 0]
    for i, x in enumerate(vals):
        if x == 0:
            continue
        ms[i] = _inert_m(a, x)
        s = _sign_for(x, ms[i], a, h_plus)
        if isinstance(s, Unknown):
            return LabelUnknown(s.reason)
        eps[i] = s
    if len(zeros) > 1:
        raise ArithmeticError("two factors vanish at a coprime (u, v) despite nonzero resultants")
    if zeros:
        prod = 1
        for i in range(spec.r):
            if i not in zeros:
                prod *= eps[i] * ms[i]
        completion = squarefree_part(prod)
        eps[zeros[0]] = 1 if completion > 0 else -1
        ms[zeros[0]] = abs(completion)
    return TorsorLabel(tuple(eps), tuple(ms))


def assign_label(spec: SurfaceSpec, pt: PointRecord):
    """The class (epsilon, m) whose torsor carries the point, or LabelUnknown."""
    a = spec.a
    info = field_info(a)
    if a > 0 and info.h != 1:
        return LabelUnknown(f"class number of Q(sqrt {a}) is {info.h}")
    h_plus = info.h_plus
    label = _label_on_branch(spec, spec.values(pt.u, pt.v), h_plus)
    if isinstance(label, LabelUnknown):
        return label
    i0 = spec.first_odd_index()
    if i0 is not None and label.epsilon[i0] != 1:
        label = _label_on_branch(spec, spec.values(-pt.u, -pt.v), h_plus)
        if isinstance(label, LabelUnknown):
            return label
    _check_label(spec, label)
    return label


def _check_label(spec: SurfaceSpec, label: TorsorLabel) -> None:
    if label.epsilon not in sigma_set(spec):
        raise ArithmeticError(f"epsilon {label.epsilon} is outside Sigma")
    if not in_m_set(spec, label.m):
        raise ArithmeticError(f"m {label.m} is outside M")


def _inert_primes_of(a: int, *values) -> set[int]:
    out = set()
    for x in values:
        if x:
            out.update(p for p, _ in factorize(x).factors if is_inert(a, p))
    return out


def _branch_member(spec: SurfaceSpec, label: TorsorLabel, vals, h_plus):
    a = spec.a
    unknown = None
    if a > 0 and h_plus == 1 and any(e != 1 for e in label.epsilon):
        return False
    for i, x in enumerate(vals):
        if x == 0:
            # the completion is forced by the square condition on the label
            continue
        e, m = label.epsilon[i], label.m[i]
        if a < 0 and e * x <= 0:
            return False
        for p in _inert_primes_of(a, x, m):
            if (valuation(x, p) - (1 if m % p == 0 else 0)) % 2:
                return False
        if x % m:
            return False
        res = _cached_norm(x // (e * m), a)
        if isinstance(res, NotRepresentable):
            return False
        if isinstance(res, Unknown):
            unknown = res
    return unknown if unknown is not None else True


def membership_test(spec: SurfaceSpec, label: TorsorLabel, pt: PointRecord):
    """True, False or an Unknown from the norm oracle."""
    h_plus = field_info(spec.a).h_plus
    flips = (False, True) if _has_odd_degree(spec) else (False,)
    unknown = None
    for flip in flips:
        res = _branch_member(spec, label, _branch_values(spec, pt.u, pt.v, flip), h_plus)
        if res is True:
            return True
        if isinstance(res, Unknown):
            unknown = res
    return unknown if unknown is not None else False


@dataclass(frozen=True)
class TorsorWitness:
    n: tuple[int, ...]
    st: tuple[tuple[int, int], ...]
    product_witness: tuple[int, int]
    branch: tuple[int, int]


def lambda_torsor_witness(spec: SurfaceSpec, pt: PointRecord, label: TorsorLabel):
    """(s_i, t_i) with F_i(u, v) = n_i (s_i^2 - a t_i^2), n_i = epsilon_i m_i."""
    a = spec.a
    flips = (False, True) if _has_odd_degree(spec) else (False,)
    h_plus = field_info(a).h_plus
    for flip in flips:
        vals = _branch_values(spec, pt.u, pt.v, flip)
        if _branch_member(spec, label, vals, h_plus) is not True:
            continue
        st = []
        for x, ni in zip(vals, label.n):
            if x == 0:
                st.append((0, 0))
                continue
            res = _cached_norm(x // ni, a)
            if not isinstance(res, Representable):
                return Unknown(f"no witness for {x // ni}")
            if ni * (res.x**2 - a * res.y**2) != x:
                raise ArithmeticError("norm witness does not verify")
            st.append((res.x, res.y))
        prod = 1
        for ni in label.n:
            prod *= ni
        pres = _cached_norm(prod, a)
        if not isinstance(pres, Representable):
            return Unknown(f"product {prod} has no witness")
        branch = (-pt.u, -pt.v) if flip else (pt.u, pt.v)
        return TorsorWitness(label.n, tuple(st), (pres.x, pres.y), branch)
    return Unknown("point is not on this torsor")


@dataclass
class PartitionReport:
    bound: int
    points: int = 0
    per_label: dict = field(default_factory=dict)
    zero_locus: int = 0
    unknowns: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "bound": self.bound,
            "points": self.points,
            "zero_locus": self.zero_locus,
            "per_label": [
                {"label": lab.to_dict(), "count": c} for lab, c in sorted(self.per_label.items())
            ],
            "unknowns": [{"point": list(p), "reason": r} for p, r in self.unknowns],
            "violations": [{"point": list(p), "detail": d} for p, d in self.violations],
            "ok": self.ok,
        }


def _pt_tuple(pt: PointRecord) -> tuple[int, ...]:
    return (pt.y, pt.z, pt.t, pt.u, pt.v)


def parity_conservation_ok(spec: SurfaceSpec, pt: PointRecord) -> bool:
    vals = spec.values(pt.u, pt.v)
    if any(x == 0 for x in vals):
        return True
    for p in _inert_primes_of(spec.a, *vals):
        if sum(valuation(x, p) for x in vals) % 2:
            return False
    return True


def partition_check(spec: SurfaceSpec, B: int, jobs: int | None = None, points=None) -> PartitionReport:
    """Every point up to height B lies on exactly one torsor of Sigma x M."""
    require_valid(spec)
    if points is None:
        points = enumerate_points(spec, B, jobs).points
    classes = torsor_classes(spec)
    report = PartitionReport(B)
    for pt in points:
        report.points += 1
        key = _pt_tuple(pt)
        if not parity_conservation_ok(spec, pt):
            report.violations.append((key, "odd total valuation at an inert prime"))
        try:
            label = assign_label(spec, pt)
        except ArithmeticError as exc:
            report.violations.append((key, f"label outside Sigma x M: {exc}"))
            continue
        if isinstance(label, LabelUnknown):
            report.unknowns.append((key, label.reason))
            continue
        if any(x == 0 for x in spec.values(pt.u, pt.v)):
            report.zero_locus += 1
        accepted = []
        undecided = []
        for cls in classes:
            res = membership_test(spec, cls, pt)
            if res is True:
                accepted.append(cls)
            elif isinstance(res, Unknown):
                undecided.append(cls)
        if undecided:
            report.unknowns.append((key, f"membership undecided for {len(undecided)} classes"))
        if accepted != [label]:
            names = ", ".join(str(c) for c in accepted) or "none"
            report.violations.append((key, f"assigned {label}; accepted by {names}"))
            continue
        report.per_label[label] = report.per_label.get(label, 0) + 1
    return report
