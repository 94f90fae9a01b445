"""Exact matrix routines over Z and Q.

Matrices are lists of rows. Row Hermite normal form is implemented here
because lattice identity relies on it; Smith form and LLL go through sympy.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.matrices import DomainMatrix

from .arith import lcm


def common_denominator(rows) -> int:
    return lcm(*(Fraction(x).denominator for row in rows for x in row))


def to_integer(rows) -> tuple[list[list[int]], int]:
    """Scale a rational matrix to an integer one; returns (matrix, scale)."""
    d = common_denominator(rows)
    return [[int(Fraction(x) * d) for x in row] for row in rows], d


def hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of an integer matrix, zero rows dropped.

    Pivots are positive and entries above a pivot lie in [0, pivot).
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    out = []
    col = 0
    while A and col < ncols:
        nz = [r for r in A if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in A if not r[col]]
        # Euclid on the column until one row carries the gcd
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col]:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        A = rest
        col += 1
    for i, row in enumerate(out):
        c = next(j for j, x in enumerate(row) if x)
        for k in range(i):
            q = out[k][c] // row[c]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], row)]
    return out


def rational_hnf(rows) -> list[list[Fraction]]:
    M, d = to_integer(rows)
    return [[Fraction(x, d) for x in row] for row in hnf(M)]


def inverse(M) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def det(M) -> Fraction:
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            out = -out
        out *= A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] / A[c][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return out


def matmul(A, B):
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)] for row in A]


def vecmat(v, M):
    return [sum((x * row[j] for x, row in zip(v, M)), Fraction(0)) for j in range(len(M[0]))]


def transpose(M):
    return [list(col) for col in zip(*M)]


def integer_kernel(constraints: list[list[int]], n: int) -> list[list[int]]:
    """Z-basis of {y in Z^n : C y = 0} for an integer constraint matrix C."""
    if not constraints:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    m = len(constraints)
    aug = [[constraints[k][i] for k in range(m)] + [int(i == j) for j in range(n)]
           for i in range(n)]
    return [row[m:] for row in hnf(aug) if not any(row[:m])]


def saturate(rows: list[list[int]], n: int) -> list[list[int]]:
    """Z^n intersected with the Q-span of ``rows``."""
    K = integer_kernel(rows, n)
    return hnf(integer_kernel(K, n))


def smith_diagonal(M: list[list[int]]) -> list[int]:
    S = smith_normal_form(Matrix(M), domain=ZZ)
    return [abs(int(S[i, i])) for i in range(min(S.shape))]


def lll_transform(M: list[list[int]]) -> list[list[int]]:
    """Unimodular T with T*M LLL-reduced (rows of M independent)."""
    dm = DomainMatrix([[ZZ(x) for x in row] for row in M], (len(M), len(M[0])), ZZ)
    _, T = dm.lll_transform()
    return [[int(x) for x in row] for row in T.to_Matrix().tolist()]


def mod_p_kernel(M: list[list[int]], p: int) -> list[list[int]]:
    """Basis of {v in F_p^n : M v = 0 mod p}."""
    n = len(M[0])
    A = [[x % p for x in row] for row in M]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fc] % p
        basis.append(v)
    return basis


def primitive_vector(v: list[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1
