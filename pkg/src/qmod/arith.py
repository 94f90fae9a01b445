"""Integer and rational helpers: factorization, residue symbols, valuations.

Factoring and primality are delegated to sympy; everything else here is
small enough to keep local.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Optional, Union

from sympy.ntheory import factorint, isprime
from sympy.ntheory import sqrt_mod as _sympy_sqrt_mod

Rational = Union[int, Fraction]

FACTOR_BOUND = 2 ** 64


class FactorizationBoundError(ValueError):
    """Raised when |n| exceeds the factoring bound and slow factoring was not requested."""


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        for p, e in self.factors:
            if e < 1 or not isprime(p):
                raise ValueError(f"bad prime power {p}^{e}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        n = self.sign
        for p, e in self.factors:
            n *= p ** e
        return n

    def __str__(self):
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)
        return f"{'-' if self.sign < 0 else ''}{body or '1'}"


@dataclass(frozen=True)
class Place:
    """A place of Q: a finite prime, or the archimedean place when ``prime`` is None."""

    prime: Optional[int] = None

    def __post_init__(self):
        if self.prime is not None and not isprime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    def sort_key(self):
        return (self.prime is None, self.prime or 0)

    def __str__(self):
        return "inf" if self.prime is None else str(self.prime)


INFINITY = Place(None)


def factor(n: int, allow_slow: bool = False) -> Factorization:
    if n == 0:
        raise ValueError("cannot factor 0")
    if abs(n) >= FACTOR_BOUND and not allow_slow:
        raise FactorizationBoundError(f"|{n}| exceeds the factoring bound 2^64")
    sign = 1 if n > 0 else -1
    f = factorint(abs(n))
    return Factorization(sign, tuple(sorted(f.items())))


def prime_divisors(n: int) -> list[int]:
    return factor(n).primes if abs(n) > 1 else []


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factor(n).factors)


def squarefree_part(x: Rational) -> int:
    """The squarefree integer in the square class of the nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    n = x.numerator * x.denominator
    f = factor(n, allow_slow=True)
    out = f.sign
    for p, e in f.factors:
        if e % 2:
            out *= p
    return out


def divisors(n: int) -> list[int]:
    """Positive divisors of n, increasing."""
    f = factor(n)
    divs = [1]
    for p, e in f.factors:
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extending Jacobi to every integer n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a: int, p: int) -> Optional[int]:
    """Smallest r in [0, p) with r^2 = a mod p, or None when a is a non-residue."""
    if p <= 2 or not isprime(p):
        raise ValueError(f"{p} is not an odd prime")
    return _sympy_sqrt_mod(a % p, p)


def valuation(x: Rational, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero is undefined")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x: Rational, p: int) -> Fraction:
    x = Fraction(x)
    return x / Fraction(p) ** valuation(x, p)


def is_square(x: Rational) -> bool:
    x = Fraction(x)
    if x < 0:
        return False
    return all(isqrt(t) ** 2 == t for t in (x.numerator, x.denominator))


def lcm(*args: int) -> int:
    return reduce(lambda u, v: u * v // gcd(u, v) if u and v else 0, args, 1)


def fmt_rational(x: Rational) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def f2_span(classes: list[int]) -> list[int]:
    """All squarefree products of subsets of ``classes`` (the subgroup they generate)."""
    span = {1}
    for c in classes:
        span |= {squarefree_part(s * c) for s in span}
    return sorted(span)
