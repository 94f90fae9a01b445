"""Quaternion algebras (a, b / Q): elements, Hilbert symbols, ramification, twisting."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from sympy.ntheory import isprime

from .arith import (
    INFINITY,
    Place,
    Rational,
    divisors,
    factor,
    is_squarefree,
    kronecker,
    prime_divisors,
    squarefree_part,
    valuation,
)


class MixedAlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class QuaternionAlgebra:
    """B = Q + Qi + Qj + Qij with i^2 = a, j^2 = b, ij = -ji.

    Algebras are compared by the pair (a, b); use ``is_isomorphic`` for
    isomorphism.
    """

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("a and b must be integers")
        if self.a == 0 or self.b == 0:
            raise ValueError("a and b must be nonzero")

    @cached_property
    def ramified_places(self) -> frozenset[Place]:
        return frozenset(ramification_set(self))

    @cached_property
    def discriminant(self) -> int:
        return discriminant(self)

    @property
    def is_division(self) -> bool:
        return bool(self.ramified_places)

    @property
    def is_definite(self) -> bool:
        return INFINITY in self.ramified_places

    def element(self, *coords: Rational) -> "QuatElement":
        return QuatElement(self, tuple(Fraction(c) for c in coords))

    def scalar(self, x: Rational) -> "QuatElement":
        return self.element(x, 0, 0, 0)

    @property
    def one(self):
        return self.element(1, 0, 0, 0)

    @property
    def i(self):
        return self.element(0, 1, 0, 0)

    @property
    def j(self):
        return self.element(0, 0, 1, 0)

    @property
    def k(self):
        return self.element(0, 0, 0, 1)

    def basis(self):
        return [self.one, self.i, self.j, self.k]

    def __str__(self):
        return f"({self.a}, {self.b} / Q)"


@dataclass(frozen=True)
class QuatElement:
    algebra: QuaternionAlgebra
    coords: tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        if len(self.coords) != 4:
            raise ValueError("a quaternion has four coordinates")

    def _check(self, other):
        if isinstance(other, QuatElement):
            if other.algebra != self.algebra:
                raise MixedAlgebraError(f"{self.algebra} vs {other.algebra}")
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._check(other)
        return QuatElement(self.algebra, tuple(x + y for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-x for x in self.coords))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, QuatElement):
            c = Fraction(other)
            return QuatElement(self.algebra, tuple(c * x for x in self.coords))
        other = self._check(other)
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords
        y0, y1, y2, y3 = other.coords
        return QuatElement(self.algebra, (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ))

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, QuatElement):
            return self * self._check(other).inverse()
        return self * (1 / Fraction(other))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** -n
        out = self.algebra.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self):
        x0, x1, x2, x3 = self.coords
        return QuatElement(self.algebra, (x0, -x1, -x2, -x3))

    def trace(self) -> Fraction:
        return 2 * self.coords[0]

    def norm(self) -> Fraction:
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero divisor has no inverse")
        return self.conj() * (1 / n)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_scalar(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self):
        return "QuatElement(" + ", ".join(str(c) for c in self.coords) + ")"

    def __str__(self):
        terms = []
        for c, name in zip(self.coords, ("", "i", "j", "ij")):
            if c:
                terms.append(f"{c}{'*' + name if name else ''}")
        return " + ".join(terms) or "0"


def add(x: QuatElement, y: QuatElement) -> QuatElement:
    return x + y


def mul(x: QuatElement, y: QuatElement) -> QuatElement:
    return x * y


def conj(x: QuatElement) -> QuatElement:
    return x.conj()


def trace(x: QuatElement) -> Fraction:
    return x.trace()


def norm(x: QuatElement) -> Fraction:
    return x.norm()


# ---------------------------------------------------------------------------
# Hilbert symbols


def _integral_rep(x: Rational) -> int:
    x = Fraction(x)
    return x.numerator * x.denominator


def hilbert_symbol(a: Rational, b: Rational, v: Place) -> int:
    """(a, b)_v: +1 iff z^2 = a x^2 + b y^2 has a nonzero solution over Q_v."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if v.is_infinite:
        return -1 if a < 0 and b < 0 else 1
    p = v.prime
    # same square classes, integral representatives
    a, b = _integral_rep(a), _integral_rep(b)
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = a // p ** alpha, b // p ** beta
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omg = lambda t: ((t * t - 1) // 8) % 2
        e = eps(u) * eps(w) + alpha * omg(w) + beta * omg(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * kronecker(u, p) ** (beta % 2) * kronecker(w, p) ** (alpha % 2)


def relevant_places(a: Rational, b: Rational) -> list[Place]:
    """Places where (a, b)_v can be -1: infinity and primes dividing 2ab."""
    primes = set(prime_divisors(2 * _integral_rep(a) * _integral_rep(b)))
    return [Place(p) for p in sorted(primes)] + [INFINITY]


def ramification_set(B: QuaternionAlgebra) -> set[Place]:
    return {v for v in relevant_places(B.a, B.b) if hilbert_symbol(B.a, B.b, v) == -1}


def discriminant(B: QuaternionAlgebra) -> int:
    d = 1
    for v in B.ramified_places:
        if not v.is_infinite:
            d *= v.prime
    return d


def is_isomorphic(B1: QuaternionAlgebra, B2: QuaternionAlgebra) -> bool:
    return B1.ramified_places == B2.ramified_places


def splits_over_multiquadratic(B: QuaternionAlgebra, radicands: Sequence[int]) -> bool:
    """Whether B becomes M_2 over Q(sqrt(r) : r in radicands).

    A finite ramified prime p is killed iff the completion has even degree,
    i.e. some product of radicands is a non-square in Q_p; the real place is
    killed iff some radicand is negative.
    """
    classes = _f2_closure(radicands)
    for v in B.ramified_places:
        if v.is_infinite:
            if not any(c < 0 for c in classes):
                return False
        elif all(is_square_in_Qp(c, v.prime) for c in classes):
            return False
    return True


def _f2_closure(radicands: Iterable[int]) -> list[int]:
    span = {1}
    for r in radicands:
        span |= {squarefree_part(s * r) for s in span}
    return sorted(span)


def is_square_in_Qp(x: int, p: int) -> bool:
    """Whether the nonzero integer x is a square in Q_p."""
    v = valuation(x, p)
    if v % 2:
        return False
    u = x // p ** v
    if p == 2:
        return u % 8 == 1
    return kronecker(u, p) == 1


# ---------------------------------------------------------------------------
# Twisting


@dataclass(frozen=True)
class TwistClassification:
    D: int
    is_twisting: bool
    twisting_params: tuple[int, ...]
    residue_params: tuple[int, ...] = field(default=(), compare=False)


def check_totally_indefinite_discriminant(D: int) -> list[int]:
    """Prime factors of D; raises unless D is squarefree with an even number >= 2 of them."""
    if not isinstance(D, int) or D < 2:
        raise ValueError(f"D = {D} is not the discriminant of a division algebra")
    if not is_squarefree(D):
        raise ValueError(f"D = {D} is not squarefree")
    primes = factor(D).primes
    if len(primes) % 2:
        raise ValueError(f"D = {D} has an odd number of prime factors")
    return primes


def residue_criterion(D: int, m: int) -> bool:
    """B_D = (-D, m / Q) via the mod-p test at each odd p | D."""
    for p in prime_divisors(D):
        if p == 2:
            continue
        t = D // m if m % p == 0 else m
        if kronecker(t, p) != -1:
            return False
    return True


def twisting_classification(D: int) -> TwistClassification:
    primes = check_totally_indefinite_discriminant(D)
    target = {Place(p) for p in primes}
    by_hilbert = tuple(m for m in divisors(D) if ramification_set(QuaternionAlgebra(-D, m)) == target)
    by_residue = tuple(m for m in divisors(D) if residue_criterion(D, m))
    if by_hilbert != by_residue:
        raise AssertionError(
            f"twisting tests disagree for D = {D}: Hilbert {by_hilbert}, residue {by_residue}")
    return TwistClassification(D, bool(by_hilbert), by_hilbert, by_residue)


def algebra_with_discriminant(D: int, search_limit: int = 10_000) -> QuaternionAlgebra:
    """A presentation of the indefinite algebra of discriminant D.

    Prefers (-D, m) with m | D (twisting case), then (-D, q) for a prime q.
    """
    primes = check_totally_indefinite_discriminant(D)
    target = {Place(p) for p in primes}
    tc = twisting_classification(D)
    if tc.is_twisting:
        return QuaternionAlgebra(-D, tc.twisting_params[0])
    for q in range(2, search_limit):
        if isprime(q):
            B = QuaternionAlgebra(-D, q)
            if ramification_set(B) == target:
                return B
    raise RuntimeError(f"no presentation (-D, q) found for D = {D} with q < {search_limit}")
