"""Homothety classes of lattices in Q_p^2 and their distances in the Bruhat-Tits tree.

Lattices are global: a 2x2 rational matrix whose rows span a Z-lattice in Q^2.
Local data at p is read off p-adic valuations, so no p-adic number type is
needed. Matrices act on row vectors from the right, and End(L) is realized
inside a split algebra (1, b / Q) via

    i = diag(1, -1),  j = [[0, b], [1, 0]],  ij = [[0, b], [-1, 0]],

the default being b = 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import QuatElement, QuaternionAlgebra
from .arith import prime_divisors, valuation
from .linalg import det, inverse, matmul, rational_hnf
from .orders import QuatLattice, QuatOrder, intersect

Matrix2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


class SingularLatticeError(ValueError):
    pass


def _as_matrix(rows) -> Matrix2:
    M = tuple(tuple(Fraction(x) for x in r) for r in rows)
    if len(M) != 2 or any(len(r) != 2 for r in M):
        raise ValueError("a plane lattice basis is a 2x2 matrix")
    if det(M) == 0:
        raise SingularLatticeError("lattice basis is singular")
    return M


@dataclass(frozen=True)
class PlaneLattice:
    basis: Matrix2
    prime: int

    def __post_init__(self):
        M = _as_matrix(self.basis)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in rational_hnf(M)))

    @classmethod
    def parse(cls, text: str, prime: int) -> "PlaneLattice":
        """'a,b;c,d' -> rows (a, b) and (c, d)."""
        rows = [[Fraction(x.strip()) for x in r.split(",")] for r in text.split(";")]
        return cls(rows, prime)


@dataclass(frozen=True)
class TreeVertex:
    """Upper triangular [[p^a, y], [0, p^b]] with min(a, b, v_p(y)) = 0 and 0 <= y < p^b."""

    prime: int
    a: int
    b: int
    y: int

    @property
    def basis(self) -> Matrix2:
        p = self.prime
        return ((Fraction(p ** self.a), Fraction(self.y)), (Fraction(0), Fraction(p ** self.b)))


def _vp(x: Fraction, p: int) -> float:
    return float("inf") if x == 0 else valuation(x, p)


def vertex_of(L: PlaneLattice | Matrix2, p: int | None = None) -> TreeVertex:
    if isinstance(L, PlaneLattice):
        p = L.prime if p is None else p
        rows = L.basis
    else:
        rows = _as_matrix(L)
    if p is None:
        raise ValueError("a prime is required")
    # Gaussian elimination over Z_(p): pivot on the entry of least valuation
    r1, r2 = [list(r) for r in rows]
    if _vp(r2[0], p) < _vp(r1[0], p):
        r1, r2 = r2, r1
    f = r2[0] / r1[0]
    r2 = [x - f * y for x, y in zip(r2, r1)]
    # unit parts are invertible in Z_(p)
    a, b = valuation(r1[0], p), valuation(r2[1], p)
    r1 = [x * Fraction(p) ** a / r1[0] for x in r1]
    r2 = [x * Fraction(p) ** b / r2[1] for x in r2]
    y = r1[1]
    shift = min(a, b, _vp(y, p)) if y else min(a, b)
    a, b, y = a - shift, b - shift, y / Fraction(p) ** shift
    m = p ** b
    y = (y.numerator * pow(y.denominator, -1, m)) % m if m > 1 else 0
    return TreeVertex(p, a, b, y)


def _change_matrix(L1, L2) -> list[list[Fraction]]:
    G1 = L1.basis if isinstance(L1, PlaneLattice) else _as_matrix(L1)
    G2 = L2.basis if isinstance(L2, PlaneLattice) else _as_matrix(L2)
    return matmul(G2, inverse(G1))


def tree_distance(L1, L2, p: int) -> int:
    """v_p(d2) - v_p(d1) for the elementary divisors d1 | d2 of the change of basis."""
    M = _change_matrix(L1, L2)
    lo = min(_vp(x, p) for row in M for x in row if x)
    return int(valuation(det(M), p) - 2 * lo)


def differing_primes(L1, L2) -> list[int]:
    M = _change_matrix(L1, L2)
    ps = set()
    for x in [det(M)] + [x for row in M for x in row if x]:
        ps |= set(prime_divisors(x.numerator)) | set(prime_divisors(x.denominator))
    return sorted(ps)


def global_distance(L1, L2) -> int:
    """prod_p p^(tree distance at p)."""
    n = 1
    for p in differing_primes(L1, L2):
        n *= p ** tree_distance(L1, L2, p)
    return n


@lru_cache(maxsize=None)
def split_algebra(b: int = 1) -> QuaternionAlgebra:
    return QuaternionAlgebra(1, b)


def matrix_to_quat(M, b: int = 1) -> QuatElement:
    (al, be), (ga, de) = M
    h = Fraction(1, 2)
    be = Fraction(be) / b
    return split_algebra(b).element(h * (al + de), h * (al - de), h * (be + ga), h * (be - ga))


def quat_to_matrix(x: QuatElement) -> Matrix2:
    if x.algebra.a != 1:
        raise ValueError("matrix form is only defined for split presentations (1, b)")
    b = x.algebra.b
    x0, x1, x2, x3 = x.coords
    return ((x0 + x1, b * (x2 + x3)), (x2 - x3, x0 - x1))


def endomorphism_order(L: PlaneLattice | Matrix2, b: int = 1) -> QuatOrder:
    """{x in M_2(Q) : L x subset of L} = G^-1 M_2(Z) G, inside (1, b / Q)."""
    G = L.basis if isinstance(L, PlaneLattice) else _as_matrix(L)
    Gi = inverse(G)
    units = [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]]
    gens = [matrix_to_quat(matmul(matmul(Gi, E), G), b) for E in units]
    return QuatOrder(QuatLattice.from_rows(split_algebra(b), [g.coords for g in gens]))


def eichler_order(N: int, b: int = 1) -> QuatOrder:
    """End(Z^2) intersected with End(Z + NZ), the standard Eichler order of level N."""
    return intersect(endomorphism_order(((1, 0), (0, 1)), b), endomorphism_order(((1, 0), (0, N)), b))
