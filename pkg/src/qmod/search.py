"""Height-bounded enumeration of lattice vectors with a prescribed quadratic value.

Vectors are integer coordinate tuples in some fixed basis; the height of a
vector is its largest absolute coordinate. Linear constraints are eliminated
over Q, one free coordinate is solved from the quadratic equation, and the
rest are scanned shell by shell. Witnesses come out ordered by (height,
coordinates), so the first one is deterministic.
"""
from __future__ import annotations

import enum
import heapq
from fractions import Fraction
from itertools import product
from math import gcd, isqrt
from typing import Iterator, Optional, Protocol, Sequence


class Inconclusive(enum.Enum):
    INCONCLUSIVE = "INCONCLUSIVE"

    def __bool__(self):
        return False

    def __str__(self):
        return self.value


INCONCLUSIVE = Inconclusive.INCONCLUSIVE


class SearchCancelled(RuntimeError):
    pass


class CancelToken(Protocol):
    def is_set(self) -> bool: ...


def shell(dim: int, h: int) -> Iterator[tuple[int, ...]]:
    """Integer vectors of dimension ``dim`` with max-abs exactly h, lexicographic."""
    if dim == 0:
        if h == 0:
            yield ()
        return
    for v in product(range(-h, h + 1), repeat=dim):
        if max(map(abs, v)) == h:
            yield v


def integer_roots(A: Fraction, B: Fraction, C: Fraction) -> list[int] | None:
    """Integer roots of A s^2 + B s + C; None means every integer is a root."""
    A, B, C = Fraction(A), Fraction(B), Fraction(C)
    den = 1
    for c in (A, B, C):
        den = den * c.denominator // gcd(den, c.denominator)
    return _int_roots(*(int(x * den) for x in (A, B, C)))


def _int_roots(a: int, b: int, c: int) -> list[int] | None:
    if a == 0:
        if b == 0:
            return None if c == 0 else []
        return [-c // b] if c % b == 0 else []
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    r = isqrt(disc)
    if r * r != disc:
        return []
    out = []
    for num in sorted({-b - r, -b + r}):
        if num % (2 * a) == 0:
            out.append(num // (2 * a))
    return out


def _solve_linear(constraints: Sequence[Sequence[Fraction]], n: int):
    """Reduced echelon form; returns (pivot columns, rows) over Q."""
    A = [[Fraction(x) for x in row] for row in constraints]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return pivots, A[:r]


class QuadraticSearch:
    """Vectors y in Z^n, |y| <= bound, with C y = 0 and y^T G y = target.

    ``form`` is the symmetric rational matrix G of the quadratic form in the
    chosen basis.
    """

    def __init__(self, form, target, bound: int, constraints=(), cancel: Optional[CancelToken] = None):
        self.n = n = len(form)
        self.G = [[Fraction(x) for x in row] for row in form]
        self.target = Fraction(target)
        self.bound = bound
        self.cancel = cancel
        pivots, rows = _solve_linear(constraints, n)
        free = [c for c in range(n) if c not in pivots]
        # direction vector for each free coordinate with pivots solved
        dirs = {}
        for f in free:
            v = [Fraction(0)] * n
            v[f] = Fraction(1)
            for p, row in zip(pivots, rows):
                v[p] = -row[f]
            dirs[f] = v
        self.free = free
        self.dirs = dirs
        self.solve = None
        if free:
            # prefer a solving direction on which the form does not vanish
            self.solve = next((f for f in reversed(free) if self.Q(dirs[f])), free[-1])
        self.scan = [f for f in free if f != self.solve]
        self._prepare()

    def Q(self, v) -> Fraction:
        G = self.G
        return sum((v[i] * G[i][j] * v[j] for i in range(self.n) if v[i]
                    for j in range(self.n) if v[j]), Fraction(0))

    def B(self, v, w) -> Fraction:
        G = self.G
        return sum((v[i] * G[i][j] * w[j] for i in range(self.n) if v[i]
                    for j in range(self.n) if w[j]), Fraction(0))

    def _prepare(self):
        U = [self.dirs[f] for f in self.scan]
        self._U = U
        Bmat = [[self.B(u, v) for v in U] for u in U]
        Qd = self.Q(self.dirs[self.solve]) if self.solve is not None else Fraction(0)
        Bd = [self.B(u, self.dirs[self.solve]) for u in U] if self.solve is not None else []
        # integer copies of the forms, all scaled by one common denominator
        vals = [x for row in Bmat for x in row] + Bd + [Qd, self.target]
        den = 1
        for x in vals:
            den = den * x.denominator // gcd(den, x.denominator)
        self._Bmat = [[int(x * den) for x in row] for row in Bmat]
        self._Bd = [int(x * den) for x in Bd]
        self._Qd = int(Qd * den)
        self._T = int(self.target * den)

    def _complete(self, t: tuple[int, ...]) -> list[tuple[int, ...]]:
        m = len(t)
        Bmat = self._Bmat
        Qw = 0
        for a in range(m):
            ta = t[a]
            if ta:
                row = Bmat[a]
                Qw += ta * sum(row[b] * t[b] for b in range(m) if t[b])
        if self.solve is None:
            roots = [0] if Qw == self._T else []
        else:
            Bw = sum(x * b for x, b in zip(t, self._Bd) if x)
            roots = _int_roots(self._Qd, 2 * Bw, Qw - self._T)
            if roots is None:
                roots = range(-self.bound, self.bound + 1)
        if not roots:
            return []
        n = self.n
        w = [Fraction(0)] * n
        for u, x in zip(self._U, t):
            if x:
                w = [c + x * e for c, e in zip(w, u)]
        if self.solve is None:
            cands = [w]
        else:
            d = self.dirs[self.solve]
            cands = [[c + s * e for c, e in zip(w, d)] for s in roots if abs(s) <= self.bound]
        out = []
        for y in cands:
            if all(c.denominator == 1 for c in y):
                yi = tuple(int(c) for c in y)
                if max(map(abs, yi), default=0) <= self.bound:
                    out.append(yi)
        return out

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        heap: list = []
        for h in range(self.bound + 1):
            if self.cancel is not None and self.cancel.is_set():
                raise SearchCancelled("search cancelled")
            for t in shell(len(self.scan), h):
                for y in self._complete(t):
                    heapq.heappush(heap, (max(map(abs, y), default=0), y))
            while heap and heap[0][0] <= h:
                yield heapq.heappop(heap)[1]
        while heap:
            yield heapq.heappop(heap)[1]
