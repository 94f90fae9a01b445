"""Lattices and orders in rational quaternion algebras.

Lattices are stored by their row Hermite normal form over (1, i, j, ij), so
two lattices are equal exactly when their bases are. Searches run over a
second, LLL-reduced basis of each order; "height" always refers to integer
coordinates in that reduced basis.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import isqrt
from typing import Optional, Sequence

from .algebra import MixedAlgebraError, QuatElement, QuaternionAlgebra
from .arith import fmt_rational, is_square, parse_rational, prime_divisors, valuation
from .linalg import (
    det,
    integer_kernel,
    inverse,
    lll_transform,
    mod_p_kernel,
    rational_hnf,
    smith_diagonal,
    to_integer,
    vecmat,
)
from .search import INCONCLUSIVE, CancelToken, Inconclusive, QuadraticSearch

DEFAULT_SEARCH_BOUND = 25


class NotAnOrderError(ValueError):
    pass


class NotMaximalError(ValueError):
    pass


class SaturationError(RuntimeError):
    """Saturation could not reach discriminant(B); signals a defect."""


@dataclass(frozen=True)
class QuatLattice:
    algebra: QuaternionAlgebra
    basis: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.basis) != 4 or any(len(r) != 4 for r in self.basis):
            raise ValueError("a lattice basis is a 4x4 matrix")
        if det(self.basis) == 0:
            raise ValueError("lattice basis is singular")

    @classmethod
    def from_rows(cls, algebra: QuaternionAlgebra, rows) -> "QuatLattice":
        H = rational_hnf(rows)
        if len(H) < 4:
            raise ValueError(f"vectors span a rank-{len(H)} lattice, need rank 4")
        return cls(algebra, tuple(tuple(r) for r in H))

    @cached_property
    def _inverse(self):
        return inverse(self.basis)

    @cached_property
    def elements(self) -> list[QuatElement]:
        return [QuatElement(self.algebra, tuple(r)) for r in self.basis]

    @property
    def volume(self) -> Fraction:
        return abs(det(self.basis))

    def coordinates(self, x: QuatElement) -> list[Fraction]:
        if x.algebra != self.algebra:
            raise MixedAlgebraError(f"{x.algebra} vs {self.algebra}")
        return vecmat(x.coords, self._inverse)

    def contains(self, x: QuatElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    __contains__ = contains

    def contains_lattice(self, other: "QuatLattice") -> bool:
        return all(self.contains(e) for e in other.elements)

    def conjugate(self, g: QuatElement) -> "QuatLattice":
        """g L g^-1."""
        gi = g.inverse()
        return QuatLattice.from_rows(self.algebra, [(g * e * gi).coords for e in self.elements])

    def scale(self, c) -> "QuatLattice":
        c = Fraction(c)
        return QuatLattice(self.algebra, tuple(tuple(c * x for x in r) for r in self.basis))


def _check_same(x, y):
    if x.algebra != y.algebra:
        raise MixedAlgebraError(f"{x.algebra} vs {y.algebra}")


def lattice_from_generators(algebra: QuaternionAlgebra, vectors: Sequence[QuatElement]) -> QuatLattice:
    for v in vectors:
        if v.algebra != algebra:
            raise MixedAlgebraError(f"{v.algebra} vs {algebra}")
    return QuatLattice.from_rows(algebra, [v.coords for v in vectors])


def lattice_sum(L1: QuatLattice, L2: QuatLattice) -> QuatLattice:
    _check_same(L1, L2)
    return QuatLattice.from_rows(L1.algebra, list(L1.basis) + list(L2.basis))


def _dual_rows(L: QuatLattice):
    # dual for the standard dot product on coordinates
    inv = L._inverse
    return [list(col) for col in zip(*inv)]


def lattice_intersection(L1: QuatLattice, L2: QuatLattice) -> QuatLattice:
    _check_same(L1, L2)
    dual_sum = rational_hnf(_dual_rows(L1) + _dual_rows(L2))
    inv = inverse(dual_sum)
    return QuatLattice.from_rows(L1.algebra, [list(col) for col in zip(*inv)])


def is_order(L: QuatLattice) -> bool:
    if not L.contains(L.algebra.one):
        return False
    E = L.elements
    return all(L.contains(x * y) for x in E for y in E)


def _trace_gram(elements) -> list[list[Fraction]]:
    return [[(x * y.conj()).trace() for y in elements] for x in elements]


def _gram_discriminant(elements) -> int:
    d2 = abs(det(_trace_gram(elements)))
    if d2.denominator != 1 or isqrt(d2.numerator) ** 2 != d2.numerator:
        raise ArithmeticError(f"trace-form determinant {d2} is not a perfect square")
    return isqrt(d2.numerator)


class QuatOrder:
    """An order: a lattice containing 1 that is closed under multiplication."""

    __slots__ = ("lattice", "__dict__")

    def __init__(self, lattice: QuatLattice, check: bool = True):
        if check and not is_order(lattice):
            raise NotAnOrderError("lattice is not an order")
        self.lattice = lattice

    @property
    def algebra(self) -> QuaternionAlgebra:
        return self.lattice.algebra

    @property
    def basis(self):
        return self.lattice.basis

    @property
    def elements(self) -> list[QuatElement]:
        return self.lattice.elements

    def __eq__(self, other):
        return isinstance(other, QuatOrder) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __contains__(self, x: QuatElement) -> bool:
        return self.lattice.contains(x)

    def __repr__(self):
        rows = "; ".join(" ".join(str(c) for c in r) for r in self.basis)
        return f"QuatOrder({self.algebra}, [{rows}])"

    @cached_property
    def reduced_discriminant(self) -> int:
        return _gram_discriminant(self.elements)

    @cached_property
    def eichler_level(self) -> int:
        D = self.algebra.discriminant
        if self.reduced_discriminant % D:
            raise ArithmeticError("disc(B) does not divide the reduced discriminant")
        return self.reduced_discriminant // D

    @property
    def is_maximal(self) -> bool:
        return self.reduced_discriminant == self.algebra.discriminant

    @cached_property
    def search_basis(self) -> list[QuatElement]:
        """LLL-reduced basis for the majorant x0^2 + |a|x1^2 + |b|x2^2 + |ab|x3^2."""
        return reduced_basis(self.elements)

    def normalizes(self, g: QuatElement) -> bool:
        """g O g^-1 == O as canonical lattices."""
        if g.norm() == 0:
            return False
        return self.lattice.conjugate(g) == self.lattice

    def conjugate(self, g: QuatElement) -> "QuatOrder":
        return QuatOrder(self.lattice.conjugate(g), check=False)


def reduced_basis(elements: Sequence[QuatElement], scale: int = 1 << 20) -> list[QuatElement]:
    """LLL-reduce a basis of a sublattice for the majorant of the norm form."""
    B = elements[0].algebra
    weights = [1, abs(B.a), abs(B.b), abs(B.a * B.b)]
    rows, den = to_integer([e.coords for e in elements])
    approx = [[x * isqrt(w * scale * scale) for x, w in zip(r, weights)] for r in rows]
    if len(elements) < 4:
        # drop identically zero columns so LLL sees independent rows
        keep = [c for c in range(4) if any(r[c] for r in approx)]
        approx = [[r[c] for c in keep] for r in approx]
    T = lll_transform(approx)
    return [sum((e * t for e, t in zip(elements, row) if t), B.scalar(0)) for row in T]


def reduced_discriminant(O: QuatOrder) -> int:
    if not isinstance(O, QuatOrder):
        O = QuatOrder(O)
    return O.reduced_discriminant


def standard_order(algebra: QuaternionAlgebra) -> QuatOrder:
    """Z + Zi + Zj + Zij."""
    O = QuatOrder(lattice_from_generators(algebra, algebra.basis()))
    return O


# ---------------------------------------------------------------------------
# Saturation


def _ring_closure(L: QuatLattice, max_rounds: int = 64) -> Optional[QuatLattice]:
    """Smallest lattice containing L closed under products, or None if not integral."""
    for _ in range(max_rounds):
        E = L.elements
        if any(e.norm().denominator != 1 or e.trace().denominator != 1 for e in E):
            return None
        if any(t.denominator != 1 for row in _trace_gram(E) for t in row):
            return None
        prods = [x * y for x in E for y in E]
        if all(L.contains(z) for z in prods):
            return L
        L = QuatLattice.from_rows(L.algebra, list(L.basis) + [z.coords for z in prods])
    raise RuntimeError("ring closure did not stabilize")


def _enlarge_at(O: QuatOrder, p: int) -> Optional[QuatOrder]:
    """An order O' with O < O' and [O' : O] a power of p, if one exists."""
    E = O.elements
    T = [[int((x * y).trace()) for y in E] for x in E]
    K = mod_p_kernel(T, p)
    for coeffs in product(range(p), repeat=len(K)):
        if not any(coeffs) or next(c for c in coeffs if c) != 1:
            continue
        v = [sum(c * k[i] for c, k in zip(coeffs, K)) % p for i in range(4)]
        x = sum((e * vi for e, vi in zip(E, v) if vi), O.algebra.scalar(0)) * Fraction(1, p)
        if x.trace().denominator != 1 or x.norm().denominator != 1:
            continue
        L = _ring_closure(QuatLattice.from_rows(O.algebra, list(O.basis) + [x.coords]))
        if L is not None:
            return QuatOrder(L, check=False)
    return None


def saturate_to_maximal(O: QuatOrder) -> QuatOrder:
    if not isinstance(O, QuatOrder):
        O = QuatOrder(O)
    D = O.algebra.discriminant
    while O.reduced_discriminant != D:
        if O.reduced_discriminant % D:
            raise SaturationError("disc(B) does not divide the reduced discriminant")
        for p in prime_divisors(O.reduced_discriminant // D):
            bigger = _enlarge_at(O, p)
            if bigger is not None:
                O = bigger
                break
        else:
            raise SaturationError(
                f"no enlargement found but reduced discriminant {O.reduced_discriminant} != {D}")
    return O


def maximal_order(algebra: QuaternionAlgebra) -> QuatOrder:
    return saturate_to_maximal(standard_order(algebra))


# ---------------------------------------------------------------------------
# Intersections and distance ideals


@dataclass(frozen=True)
class DistanceIdeal:
    generator: int

    def __post_init__(self):
        if self.generator < 1:
            raise ValueError("distance ideal generator must be positive")


def intersect(O1: QuatOrder, O2: QuatOrder) -> QuatOrder:
    _check_same(O1, O2)
    for O in (O1, O2):
        if not O.is_maximal:
            raise NotMaximalError("intersect expects maximal orders")
    L = lattice_intersection(O1.lattice, O2.lattice)
    return QuatOrder(L)


def index(big: QuatLattice, small: QuatLattice) -> int:
    """[big : small] as the product of elementary divisors of the inclusion."""
    M = [[c for c in big.coordinates(e)] for e in small.elements]
    if any(c.denominator != 1 for row in M for c in row):
        raise ValueError("not a sublattice")
    n = 1
    for d in smith_diagonal([[int(c) for c in row] for row in M]):
        n *= d
    return n


def distance_ideal(O1: QuatOrder, O2: QuatOrder) -> DistanceIdeal:
    E = intersect(O1, O2)
    n = index(O1.lattice, E.lattice)
    if n != E.eichler_level:
        raise ArithmeticError(f"index {n} differs from level {E.eichler_level}")
    return DistanceIdeal(n)


# ---------------------------------------------------------------------------
# Integral anticommuting bases


def check_basis_divisibility(N: int, a: int, b: int) -> bool:
    if N < 1:
        raise ValueError("level must be positive")
    return (4 * a * b) % N == 0


def _norm_form(elements) -> list[list[Fraction]]:
    """Matrix of nrd in the given basis: nrd(sum y_i e_i) = y^T G y."""
    return [[(x * y.conj()).trace() / 2 for y in elements] for x in elements]


def _combine(elements, y) -> QuatElement:
    out = elements[0].algebra.scalar(0)
    for e, c in zip(elements, y):
        if c:
            out = out + e * c
    return out


def pure_elements_of_norm(O: QuatOrder, n, bound: int, orthogonal_to: Sequence[QuatElement] = (),
                          cancel: Optional[CancelToken] = None):
    """Trace-zero x in O with nrd(x) = n, height <= bound, and trd(x conj(w)) = 0 for each w."""
    E = O.search_basis
    constraints = [[e.trace() for e in E]]
    constraints += [[(e * w.conj()).trace() for e in E] for w in orthogonal_to]
    for y in QuadraticSearch(_norm_form(E), n, bound, constraints, cancel):
        yield _combine(E, y)


def elements_of_norm(O: QuatOrder, n, bound: int, cancel: Optional[CancelToken] = None):
    E = O.search_basis
    for y in QuadraticSearch(_norm_form(E), n, bound, (), cancel):
        yield _combine(E, y)


def _canonical_sign(x: QuatElement) -> bool:
    first = next((c for c in x.coords if c), 0)
    return first > 0


def enumerate_sqrt(O: QuatOrder, a: int, bound: int = DEFAULT_SEARCH_BOUND,
                   cancel: Optional[CancelToken] = None) -> list[QuatElement]:
    """All eta in O with eta^2 = a and height <= bound, one of each pair +-eta."""
    if bound < 1:
        raise ValueError("bound must be positive")
    if a == 0:
        return []
    out = []
    if is_square(a):
        s = O.algebra.scalar(isqrt(a))
        E = O.search_basis
        coords = vecmat(s.coords, inverse([e.coords for e in E]))
        if max(abs(c) for c in coords) <= bound:
            out.append(s)
    for x in pure_elements_of_norm(O, -a, bound, cancel=cancel):
        if _canonical_sign(x):
            out.append(x)
    return out


def find_anticommuting_basis(O: QuatOrder, bound: int = DEFAULT_SEARCH_BOUND,
                             a: Optional[int] = None, b: Optional[int] = None,
                             cancel: Optional[CancelToken] = None):
    """(iota, eta) in O with iota^2 = a, eta^2 = b, iota*eta = -eta*iota, else INCONCLUSIVE.

    a, b default to the parameters of O's algebra.
    """
    a = O.algebra.a if a is None else a
    b = O.algebra.b if b is None else b
    if a == 0 or b == 0 or bound < 1:
        return INCONCLUSIVE
    for iota in pure_elements_of_norm(O, -a, bound, cancel=cancel):
        for eta in pure_elements_of_norm(O, -b, bound, orthogonal_to=[iota], cancel=cancel):
            iota = iota if _canonical_sign(iota) else -iota
            eta = eta if _canonical_sign(eta) else -eta
            if iota * iota == O.algebra.scalar(a) and eta * eta == O.algebra.scalar(b) \
                    and iota * eta == -(eta * iota):
                return iota, eta
            raise AssertionError("search returned a pair violating the defining relations")
    return INCONCLUSIVE


# ---------------------------------------------------------------------------
# Serialization


def order_to_dict(O: QuatOrder) -> dict:
    return {
        "a": O.algebra.a,
        "b": O.algebra.b,
        "basis": [[fmt_rational(c) for c in row] for row in O.basis],
    }


def order_from_dict(d: dict) -> QuatOrder:
    B = QuaternionAlgebra(int(d["a"]), int(d["b"]))
    rows = [[parse_rational(c) for c in row] for row in d["basis"]]
    return QuatOrder(QuatLattice.from_rows(B, rows))


def order_to_json(O: QuatOrder) -> str:
    return json.dumps(order_to_dict(O), sort_keys=True)


def order_from_json(s: str) -> QuatOrder:
    return order_from_dict(json.loads(s))


ORDER_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["a", "b", "basis"],
    "properties": {
        "a": {"type": "integer"},
        "b": {"type": "integer"},
        "basis": {
            "type": "array", "minItems": 4, "maxItems": 4,
            "items": {
                "type": "array", "minItems": 4, "maxItems": 4,
                "items": {"type": "string", "pattern": r"^-?\d+/\d+$"},
            },
        },
    },
}


def local_level(O: QuatOrder, p: int) -> int:
    return valuation(O.eichler_level, p) if O.eichler_level % p == 0 else 0


__all__ = [
    "INCONCLUSIVE", "Inconclusive", "QuatLattice", "QuatOrder", "DistanceIdeal",
    "lattice_from_generators", "is_order", "reduced_discriminant", "standard_order",
    "saturate_to_maximal", "maximal_order", "intersect", "distance_ideal",
    "check_basis_divisibility", "find_anticommuting_basis", "enumerate_sqrt",
    "order_to_json", "order_from_json", "ORDER_SCHEMA", "integer_kernel",
]
