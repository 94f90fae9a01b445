"""Imaginary quadratic fields Q(sqrt(-D)), their orders, and roots of unity."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt

from .arith import Rational, squarefree_part


@dataclass(frozen=True)
class QuadField:
    radicand: int
    fundamental_discriminant: int

    def __post_init__(self):
        if self.radicand in (0, 1) or squarefree_part(self.radicand) != self.radicand:
            raise ValueError(f"radicand {self.radicand} is not a squarefree integer != 0, 1")
        expect = self.radicand if self.radicand % 4 == 1 else 4 * self.radicand
        if self.fundamental_discriminant != expect:
            raise ValueError("fundamental discriminant does not match the radicand")

    @classmethod
    def from_radicand(cls, d: int) -> "QuadField":
        return cls(d, d if d % 4 == 1 else 4 * d)

    @property
    def is_imaginary(self) -> bool:
        return self.radicand < 0

    def element(self, u: Rational, v: Rational) -> "QuadElement":
        return QuadElement(self, Fraction(u), Fraction(v))

    @property
    def one(self):
        return self.element(1, 0)

    @property
    def tau(self) -> "QuadElement":
        """Generator of the maximal order: (1 + sqrt d)/2 or sqrt d."""
        if self.radicand % 4 == 1:
            return self.element(Fraction(1, 2), Fraction(1, 2))
        return self.element(0, 1)

    def __str__(self):
        return f"Q(sqrt({self.radicand}))"


@dataclass(frozen=True)
class QuadElement:
    """u + v*sqrt(d)."""

    field: QuadField
    u: Fraction
    v: Fraction

    def __mul__(self, other):
        if isinstance(other, QuadElement):
            d = self.field.radicand
            return QuadElement(self.field, self.u * other.u + d * self.v * other.v,
                               self.u * other.v + self.v * other.u)
        c = Fraction(other)
        return QuadElement(self.field, c * self.u, c * self.v)

    def __add__(self, other):
        return QuadElement(self.field, self.u + other.u, self.v + other.v)

    def __pow__(self, n: int):
        out = self.field.one
        for _ in range(n):
            out = out * self
        return out

    def norm(self) -> Fraction:
        return self.u * self.u - self.field.radicand * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u

    def __str__(self):
        return f"{self.u} + {self.v}*sqrt({self.field.radicand})"


@dataclass(frozen=True)
class QuadOrder:
    """Z + Z*(conductor * tau) inside ``field``."""

    field: QuadField
    conductor: int = 1

    def __post_init__(self):
        if self.conductor < 1:
            raise ValueError("conductor must be a positive integer")

    @property
    def generator(self) -> QuadElement:
        return self.field.tau * self.conductor

    @property
    def discriminant(self) -> int:
        return self.conductor ** 2 * self.field.fundamental_discriminant

    def element(self, x: Rational, y: Rational) -> QuadElement:
        return self.field.one * x + self.generator * y

    def coordinates(self, z: QuadElement) -> tuple[Fraction, Fraction]:
        g = self.generator
        y = z.v / g.v
        return (z.u - y * g.u, y)

    def contains(self, z: QuadElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(z))

    @classmethod
    def from_discriminant(cls, disc: int) -> "QuadOrder":
        d = squarefree_part(disc)
        K = QuadField.from_radicand(d)
        f2 = Fraction(disc, K.fundamental_discriminant)
        f = isqrt(f2.numerator)
        if f2.denominator != 1 or f * f != f2:
            raise ValueError(f"{disc} is not the discriminant of a quadratic order")
        return cls(K, f)


@dataclass(frozen=True)
class RootsOfUnity:
    omega: int
    omega_odd: int
    generators: tuple[tuple[Fraction, Fraction], ...]
    elements: tuple[tuple[Fraction, Fraction], ...]
    odd_elements: tuple[tuple[Fraction, Fraction], ...]


def make_field(D: int) -> QuadField:
    """Q(sqrt(-D)) for a positive integer D."""
    if D <= 0:
        raise ValueError("D must be positive")
    return QuadField.from_radicand(squarefree_part(-D))


def multiplicative_order(z: QuadElement, limit: int = 12) -> int | None:
    w = z
    for n in range(1, limit + 1):
        if w.u == 1 and w.v == 0:
            return n
        w = w * z
    return None


def roots_of_unity(order: QuadOrder) -> RootsOfUnity:
    if not order.field.is_imaginary:
        raise ValueError("roots_of_unity needs an imaginary quadratic order")
    found = {}
    for x, y in product(range(-2, 3), repeat=2):
        z = order.element(x, y)
        if z.norm() == 1:
            n = multiplicative_order(z)
            if n is None:
                raise AssertionError(f"unit {z} of norm 1 has no finite order")
            found[(Fraction(x), Fraction(y))] = n
    omega = len(found)
    gens = tuple(c for c, n in sorted(found.items()) if n == omega)
    odd = tuple(c for c, n in sorted(found.items()) if n % 2 == 1)
    return RootsOfUnity(omega, len(odd), gens[:1], tuple(sorted(found)), odd)


def sqrt_minus_D(K: QuadField, D: int) -> QuadElement:
    s2 = Fraction(-D, K.radicand)
    s = isqrt(s2.numerator)
    if s2.denominator != 1 or s * s != s2:
        raise ValueError(f"sqrt(-{D}) does not lie in {K}")
    return K.element(0, s)


def u0_generators(D: int, order: QuadOrder) -> list[QuadElement]:
    """sqrt(-D) followed by xi_f^((f+1)/2) for each odd f >= 3 with a primitive xi_f in the order.

    xi_f is taken with positive sqrt coefficient.
    """
    if D <= 0:
        raise ValueError("D must be positive")
    K = order.field
    if make_field(D) != K:
        raise ValueError(f"sqrt(-{D}) does not lie in {K}")
    gens = [sqrt_minus_D(K, D)]
    roots = roots_of_unity(order)
    by_order: dict[int, list[QuadElement]] = {}
    for x, y in roots.elements:
        z = order.element(x, y)
        by_order.setdefault(multiplicative_order(z), []).append(z)
    for f in sorted(by_order):
        if f >= 3 and f % 2:
            xi = max(by_order[f], key=lambda z: z.v)
            gens.append(xi ** ((f + 1) // 2))
    return gens
