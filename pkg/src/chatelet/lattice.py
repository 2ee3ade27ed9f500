"""Integer matrices: Smith normal form, integer kernels, exact solves.

Matrices are lists of rows of Python ints. Nothing here uses floating point.
"""
from __future__ import annotations

from fractions import Fraction


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def matmul(A, B):
    if not A:
        return []
    Bt = transpose(B)
    if not Bt:
        return [[] for _ in A]
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def matvec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def madd(A, B, sign: int = 1):
    return [[a + sign * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def hstack(*mats):
    return [sum((list(M[i]) for M in mats), []) for i in range(len(mats[0]))]


def vstack(*mats):
    return [list(row) for M in mats for row in M]


def smith_normal_form(A):
    """Return (U, D, V) with U*A*V = D diagonal, d_1 | d_2 | ..., U and V unimodular."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(row) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for k in range(min(m, n)):
        # pivot: smallest nonzero entry in the remaining block
        while True:
            best = None
            for i in range(k, m):
                for j in range(k, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return U, D, V
            swap_rows(k, best[0])
            swap_cols(k, best[1])
            p = D[k][k]
            done = True
            for i in range(k + 1, m):
                q = D[i][k] // p
                if q:
                    add_row(k, i, -q)
                if D[i][k]:
                    done = False
            for j in range(k + 1, n):
                q = D[k][j] // p
                if q:
                    add_col(k, j, -q)
                if D[k][j]:
                    done = False
            if not done:
                continue
            # divisibility: fold any entry not divisible by p into row k
            bad = next(
                ((i, j) for i in range(k + 1, m) for j in range(k + 1, n) if D[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], k, 1)
        if D[k][k] < 0:
            D[k] = [-x for x in D[k]]
            U[k] = [-x for x in U[k]]
    return U, D, V


def elementary_divisors(A) -> tuple[list[int], int]:
    """Nonzero diagonal of the Smith form and the rank."""
    _, D, _ = smith_normal_form(A)
    diag = [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]
    return diag, len(diag)


def kernel_basis(A, ncols: int | None = None):
    """Columns spanning {x in Z^n : A x = 0}; the span is saturated."""
    n = ncols if ncols is not None else len(A[0])
    if not A:
        return identity(n)
    _, D, V = smith_normal_form(A)
    rank = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return [row[rank:] for row in V]


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    return elementary_divisors(A)[1]


def solve_integer(A, b):
    """An integer x with A x = b, or None when no integral solution exists."""
    U, D, V = smith_normal_form(A)
    c = matvec(U, b)
    n = len(V)
    y = [0] * n
    for i, ci in enumerate(c):
        d = D[i][i] if i < n else 0
        if d == 0:
            if ci:
                return None
            continue
        if ci % d:
            return None
        y[i] = ci // d
    return matvec(V, y)


def solve_rational(A, b) -> list[Fraction] | None:
    """Exact rational solution of a square or overdetermined consistent system."""
    m, n = len(A), len(A[0])
    M = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        M[r] = [x / M[r][c] for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][n] for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = M[i][n]
    return x


def quotient_invariants(sub_gens, ambient_dim: int) -> tuple[list[int], int]:
    """Z^k / span(columns): torsion divisors > 1 and free rank."""
    if not sub_gens or not sub_gens[0]:
        return [], ambient_dim
    diag, r = elementary_divisors(sub_gens)
    return [d for d in diag if d > 1], ambient_dim - r
