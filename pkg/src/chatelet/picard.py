"""The geometric Picard lattice of y^2 - a z^2 = F(u, v) with its Galois action.

Basis order: [E+], [D_1+], ..., [D_n+], [D_1-]. Matrices act on column
vectors, column j being the image of basis vector j. The other exceptional
classes are rewritten through

    [D_j-] = [D_1+] + [D_1-] - [D_j+]
    [E-]   = [E+] + sum_j [D_j+] - (n/2) ([D_1+] + [D_1-]).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from .forms import SurfaceSpec, require_valid
from .lattice import (
    identity,
    kernel_basis,
    madd,
    matmul,
    matvec,
    quotient_invariants,
    solve_integer,
    transpose,
    vstack,
)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    divisors: tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.divisors:
            out *= d
        return out

    def __str__(self):
        return " x ".join(f"Z/{d}" for d in self.divisors) or "0"


@dataclass(frozen=True)
class PicLattice:
    n: int
    degrees: tuple[int, ...]
    labels: tuple[str, ...]
    sigma: tuple[tuple[int, ...], ...]
    perm_generators: tuple[tuple[tuple[int, ...], ...], ...]
    anticanonical: tuple[int, ...]

    @property
    def rank(self) -> int:
        return self.n + 2

    def blocks(self) -> list[range]:
        """Root indices (1-based) belonging to each factor."""
        out, start = [], 1
        for d in self.degrees:
            out.append(range(start, start + d))
            start += d
        return out

    def symbol(self, name: str) -> list[int]:
        """Basis coordinates of one of E+, E-, Dk+, Dk-."""
        return _symbol_vector(self.n, name)


def _unit(size: int, i: int) -> list[int]:
    v = [0] * size
    v[i] = 1
    return v


_SYMBOL = re.compile(r"^(E|D(\d+))([+-])$")


def _symbol_vector(n: int, name: str) -> list[int]:
    m = _SYMBOL.match(name)
    if not m:
        raise ValueError(f"unknown class {name!r}")
    size = n + 2
    sign = m.group(3)
    if m.group(1) == "E":
        if sign == "+":
            return _unit(size, 0)
        v = [1] + [1] * n + [0]
        v[1] -= n // 2
        v[n + 1] -= n // 2
        return v
    k = int(m.group(2))
    if not 1 <= k <= n:
        raise ValueError(f"root index {k} out of range")
    if sign == "+":
        return _unit(size, k)
    if k == 1:
        return _unit(size, n + 1)
    v = [0] * size
    v[1] += 1
    v[n + 1] += 1
    v[k] -= 1
    return v


def _columns_to_matrix(cols: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in transpose(cols))


def _sigma_matrix(n: int):
    cols = [_symbol_vector(n, "E-")]
    cols += [_symbol_vector(n, f"D{j}-") for j in range(1, n + 1)]
    cols.append(_symbol_vector(n, "D1+"))
    return _columns_to_matrix(cols)


def _cycle_matrix(n: int, block: range):
    succ = {k: k for k in range(1, n + 1)}
    ks = list(block)
    for i, k in enumerate(ks):
        succ[k] = ks[(i + 1) % len(ks)]
    cols = [_symbol_vector(n, "E+")]
    cols += [_symbol_vector(n, f"D{succ[j]}+") for j in range(1, n + 1)]
    cols.append(_symbol_vector(n, f"D{succ[1]}-"))
    return _columns_to_matrix(cols)


def lattice_from_degrees(degrees) -> PicLattice:
    degrees = tuple(int(d) for d in degrees)
    n = sum(degrees)
    if n % 2 or n < 2:
        raise ValueError(f"total degree {n} must be even and positive")
    labels = ("E+",) + tuple(f"D{k}+" for k in range(1, n + 1)) + ("D1-",)
    blocks, start = [], 1
    for d in degrees:
        blocks.append(range(start, start + d))
        start += d
    anti = [2] + [1] * n + [0]
    return PicLattice(
        n=n,
        degrees=degrees,
        labels=labels,
        sigma=_sigma_matrix(n),
        perm_generators=tuple(_cycle_matrix(n, b) for b in blocks),
        anticanonical=tuple(anti),
    )


def build_lattice(spec: SurfaceSpec) -> PicLattice:
    require_valid(spec)
    return lattice_from_degrees(spec.degrees)


def _as_lists(M):
    return [list(row) for row in M]


def fixed_sublattice(lat: PicLattice, use_sigma: bool = True, use_perms: bool = True):
    """Columns spanning the sublattice fixed by the selected generators."""
    gens = []
    if use_sigma:
        gens.append(_as_lists(lat.sigma))
    if use_perms:
        gens.extend(_as_lists(g) for g in lat.perm_generators)
    I = identity(lat.rank)
    if not gens:
        return I
    stacked = vstack(*(madd(g, I, -1) for g in gens))
    return kernel_basis(stacked, lat.rank)


def fixed_rank(lat: PicLattice, use_sigma: bool = True, use_perms: bool = True) -> int:
    B = fixed_sublattice(lat, use_sigma, use_perms)
    return len(B[0]) if B and B[0] else 0


def restrict(M, B):
    """Matrix of M on the M-stable sublattice spanned by the columns of B."""
    MB = matmul(_as_lists(M), B)
    cols = []
    for col in transpose(MB):
        c = solve_integer(B, col)
        if c is None:
            raise ArithmeticError("sublattice is not stable under the map")
        cols.append(c)
    return transpose(cols)


def tate_h1(lat: PicLattice) -> FiniteAbelianGroup:
    """Ker(sigma + 1) / Im(1 - sigma) on the perm-fixed sublattice."""
    B = fixed_sublattice(lat, use_sigma=False, use_perms=True)
    S = restrict(lat.sigma, B)
    k = len(S)
    I = identity(k)
    K = kernel_basis(madd(S, I), k)
    if not K or not K[0]:
        return FiniteAbelianGroup(())
    image = transpose(madd(I, S, -1))
    coords = []
    for col in image:
        c = solve_integer(K, col)
        if c is None:
            raise ArithmeticError("image of 1 - sigma escapes the kernel of 1 + sigma")
        coords.append(c)
    divisors, free = quotient_invariants(transpose(coords), len(K[0]))
    if free:
        raise ArithmeticError("Tate cohomology came out infinite")
    return FiniteAbelianGroup(tuple(divisors))


def beta_closed_form(degrees) -> int:
    r = len(degrees)
    if all(d % 2 == 0 for d in degrees):
        return 2 ** (r - 1)
    return 2 ** (r - 2)


def beta_mod2(degrees) -> int:
    """2^dim of (parity vector)^perp / (all-ones line) over F_2."""
    r = len(degrees)
    parity = [d % 2 for d in degrees]
    perp = [
        x for x in product((0, 1), repeat=r) if sum(a * b for a, b in zip(x, parity)) % 2 == 0
    ]
    ones = (1,) * r
    if ones not in perp:
        raise ArithmeticError("all-ones vector is not orthogonal to the parity vector")
    # cosets of {0, ones}
    return len(perp) // 2


@dataclass(frozen=True)
class BetaReport:
    closed_form: int
    mod2: int
    h1_order: int
    h1: FiniteAbelianGroup

    @property
    def agree(self) -> bool:
        return self.closed_form == self.mod2 == self.h1_order


def beta_report(degrees) -> BetaReport:
    h1 = tate_h1(lattice_from_degrees(degrees))
    return BetaReport(beta_closed_form(degrees), beta_mod2(degrees), h1.order, h1)


def beta(spec: SurfaceSpec) -> int:
    require_valid(spec)
    rep = beta_report(spec.degrees)
    if not rep.agree:
        raise ArithmeticError(f"beta computations disagree: {rep}")
    return rep.closed_form


def cone_generators(lat: PicLattice) -> tuple[list[int], list[int]]:
    """[E+] + [E-] and [D_1+] + [D_1-] in the Picard basis."""
    ee = madd([lat.symbol("E+")], [lat.symbol("E-")])[0]
    dd = madd([lat.symbol("D1+")], [lat.symbol("D1-")])[0]
    return ee, dd


def alpha_from_lattice(lat: PicLattice) -> Fraction:
    """Length of {x in C_eff^dual : <anticanonical, x> = 1}, in lattice units.

    Works in the rank-2 Galois-fixed sublattice and its dual.
    """
    B = fixed_sublattice(lat)
    if len(B[0]) != 2:
        raise ArithmeticError(f"Pic(S) has rank {len(B[0])}, expected 2")
    w = solve_integer(B, list(lat.anticanonical))
    gens = [solve_integer(B, g) for g in cone_generators(lat)]
    if w is None or any(g is None for g in gens):
        raise ArithmeticError("cone generators are not in Pic(S)")
    # dual rays: the normal of each generator, oriented positive on the other one
    rays = []
    for g, other in ((gens[0], gens[1]), (gens[1], gens[0])):
        ray = [-g[1], g[0]]
        if ray[0] * other[0] + ray[1] * other[1] < 0:
            ray = [-ray[0], -ray[1]]
        rays.append(ray)
    ends = []
    for ray in rays:
        pair = w[0] * ray[0] + w[1] * ray[1]
        if pair <= 0:
            raise ArithmeticError("anticanonical class is not in the interior of the cone")
        ends.append([Fraction(x, pair) for x in ray])
    # primitive generator of {x : <w, x> = 0}
    step = [-w[1], w[0]]
    g = gcd(*step)
    step = [s // g for s in step]
    diff = [ends[0][0] - ends[1][0], ends[0][1] - ends[1][1]]
    lam = diff[0] / step[0] if step[0] else diff[1] / step[1]
    return abs(lam)


def alpha(spec: SurfaceSpec) -> Fraction:
    return alpha_from_lattice(build_lattice(spec))


def symbol_images(lat: PicLattice, which: str | int):
    """Symbol-level action: sigma swaps signs, a cycle moves root indices.

    ``which`` is "sigma" or the index of a factor. Returns name -> name over
    the 2n + 2 exceptional classes.
    """
    n = lat.n
    names = ["E+", "E-"] + [f"D{k}{s}" for k in range(1, n + 1) for s in "+-"]
    if which == "sigma":
        flip = {"+": "-", "-": "+"}
        return {nm: nm[:-1] + flip[nm[-1]] for nm in names}
    ks = list(lat.blocks()[which])
    succ = {k: ks[(i + 1) % len(ks)] for i, k in enumerate(ks)}
    out = {}
    for nm in names:
        if nm.startswith("E"):
            out[nm] = nm
        else:
            k = int(nm[1:-1])
            out[nm] = f"D{succ.get(k, k)}{nm[-1]}"
    return out


def relation_residues(lat: PicLattice, which: str | int) -> list[list[int]]:
    """G [x] - [g x] for every exceptional class x; all zero when g respects the relations."""
    G = lat.sigma if which == "sigma" else lat.perm_generators[which]
    G = _as_lists(G)
    out = []
    for src, dst in symbol_images(lat, which).items():
        out.append(madd([matvec(G, lat.symbol(src))], [lat.symbol(dst)], -1)[0])
    return out
