"""Integral points on the intermediate torsor y^2 - a z^2 = t^2 F(u, v).

A rational point of height <= B on the surface corresponds to exactly four
quintuples (y, z, t, u, v); two of them have t > 0, and the canonical one
among those has (u, v) lexicographically positive.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd, isqrt

from .forms import SurfaceSpec


@dataclass(frozen=True)
class PointRecord:
    y: int
    z: int
    t: int
    u: int
    v: int

    def check(self, spec: SurfaceSpec) -> None:
        if gcd(gcd(self.y, self.z), self.t) != 1:
            raise ValueError(f"gcd(y, z, t) != 1 at {self}")
        if gcd(self.u, self.v) != 1:
            raise ValueError(f"gcd(u, v) != 1 at {self}")
        if self.t <= 0:
            raise ValueError(f"t must be positive at {self}")
        if self.y**2 - spec.a * self.z**2 != self.t**2 * spec.form(self.u, self.v):
            raise ValueError(f"{self} is not on the torsor")

    def projective(self, n: int) -> tuple[int, ...]:
        m = n // 2
        head = tuple(self.t * self.u ** (m - k) * self.v**k for k in range(m + 1))
        return head + (self.y, self.z)

    def height(self, n: int) -> int:
        return max(abs(x) for x in self.projective(n))


def lex_positive(u: int, v: int) -> bool:
    return u > 0 or (u == 0 and v > 0)


def _sign_normalized(x: tuple[int, ...]) -> tuple[int, ...]:
    for c in x:
        if c:
            return x if c > 0 else tuple(-e for e in x)
    return x


def max_coordinate(B: int, t: int, m: int) -> int:
    """Largest s >= 0 with t * s^m <= B."""
    if t > B:
        return -1
    s = int(round((B / t) ** (1.0 / m)))
    while s > 0 and t * s**m > B:
        s -= 1
    while t * (s + 1) ** m <= B:
        s += 1
    return s


def norm_form_reps(N: int, a: int, bound: int) -> list[tuple[int, int]]:
    """All (y, z) with y^2 - a z^2 = N and |y|, |z| <= bound."""
    out = []
    if a < 0:
        if N < 0:
            return out
        zmax = min(bound, isqrt(N // -a))
    else:
        zmax = bound
    for z in range(zmax + 1):
        w = N + a * z * z
        if w < 0:
            continue
        y = isqrt(w)
        if y * y != w or y > bound:
            continue
        for ys in {y, -y}:
            for zs in {z, -z}:
                out.append((ys, zs))
    return out


@dataclass
class EnumerationChunk:
    raw_positive: int
    points: list[PointRecord]
    symmetry_violations: list[tuple]


def _enumerate_ts(a: int, factors, B: int, ts) -> EnumerationChunk:
    spec = SurfaceSpec.from_coefficients(a, factors)
    F = spec.form
    n = spec.n
    m = n // 2
    raw = 0
    groups: dict[tuple[int, ...], list[PointRecord]] = {}
    for t in ts:
        s = max_coordinate(B, t, m)
        for u in range(-s, s + 1):
            for v in range(-s, s + 1):
                if gcd(u, v) != 1:
                    continue
                N = t * t * F(u, v)
                for y, z in norm_form_reps(N, a, B):
                    if gcd(gcd(y, z), t) != 1:
                        continue
                    raw += 1
                    pt = PointRecord(y, z, t, u, v)
                    key = _sign_normalized(pt.projective(n))
                    groups.setdefault(key, []).append(pt)
    points = []
    bad = []
    for key, pts in groups.items():
        canon = [p for p in pts if lex_positive(p.u, p.v)]
        if len(pts) != 2 or len(canon) != 1:
            bad.append((key, pts))
            continue
        points.append(canon[0])
    return EnumerationChunk(raw, points, bad)


def default_jobs() -> int:
    env = os.environ.get("TORSOR_JOBS")
    if env:
        return max(1, int(env))
    return 1


@dataclass
class Enumeration:
    bound: int
    raw_quintuples: int
    points: list[PointRecord]
    symmetry_violations: list[tuple]


def enumerate_points(spec: SurfaceSpec, B: int, jobs: int | None = None) -> Enumeration:
    """Canonical PointRecords of height <= B, sorted.

    Only t > 0 is enumerated; t -> -t is a bijection of the quintuple set
    preserving height, so the raw count is twice the t > 0 count. Within
    t > 0 every projective point must show up exactly twice, which is
    checked rather than assumed.
    """
    if B < 1:
        return Enumeration(B, 0, [], [])
    jobs = jobs or default_jobs()
    coeffs = [list(f.coeffs) for f in spec.factors]
    ts = list(range(1, B + 1))
    if jobs <= 1:
        chunks = [_enumerate_ts(spec.a, coeffs, B, ts)]
    else:
        # small t carry the most (u, v) pairs, so deal round-robin
        parts = [ts[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_enumerate_ts, [spec.a] * jobs, [coeffs] * jobs, [B] * jobs, parts))
    raw = 2 * sum(c.raw_positive for c in chunks)
    points = sorted(
        (p for c in chunks for p in c.points), key=lambda p: (p.t, p.u, p.v, p.y, p.z)
    )
    bad = [b for c in chunks for b in c.symmetry_violations]
    return Enumeration(B, raw, points, bad)
