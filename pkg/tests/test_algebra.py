from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import hilbert_oracle, qmul, ramification_oracle, trial_factor
from qmod.algebra import (
    MixedAlgebraError,
    QuaternionAlgebra,
    algebra_with_discriminant,
    hilbert_symbol,
    is_isomorphic,
    ramification_set,
    relevant_places,
    residue_criterion,
    splits_over_multiquadratic,
    twisting_classification,
)
from qmod.arith import INFINITY, Place, divisors

nz = st.integers(-200, 200).filter(bool)
coord = st.fractions(max_denominator=12).map(lambda x: x.limit_denominator(12))


def _places(S):
    return {INFINITY if p is None else Place(p) for p in S}


def test_element_examples():
    B = QuaternionAlgebra(-1, -1)
    assert B.element(1, 1, 1, 1).norm() == 4
    assert QuaternionAlgebra(5, 7).i.trace() == 0
    C = QuaternionAlgebra(-6, 2)
    assert C.k.norm() == -12
    assert C.k * C.k == C.scalar(12)
    assert C.i * C.j == -(C.j * C.i)


def test_mixed_algebras_rejected():
    with pytest.raises(MixedAlgebraError):
        QuaternionAlgebra(-1, -1).i * QuaternionAlgebra(-1, -3).i
    with pytest.raises(ValueError):
        QuaternionAlgebra(0, 1)


@given(nz, nz, st.lists(coord, min_size=4, max_size=4), st.lists(coord, min_size=4, max_size=4))
def test_multiplication_matches_structure_constants(a, b, x, y):
    B = QuaternionAlgebra(a, b)
    X, Y = B.element(*x), B.element(*y)
    assert list((X * Y).coords) == qmul(a, b, x, y)
    assert (X * Y).norm() == X.norm() * Y.norm()
    assert X * X.conj() == B.scalar(X.norm())
    assert X + X.conj() == B.scalar(X.trace())


def test_hilbert_examples():
    assert hilbert_symbol(-1, -1, INFINITY) == -1
    assert hilbert_symbol(-1, -1, Place(2)) == -1 == hilbert_oracle(-1, -1, 2)
    for b in (2, 3, 7, -5):
        for p in (2, 3, 5, 7):
            assert hilbert_symbol(1, b, Place(p)) == 1
    assert hilbert_symbol(Fraction(1, 3), 3, Place(3)) == hilbert_symbol(3, 3, Place(3))


@settings(max_examples=500)
@given(nz, nz)
def test_product_formula(a, b):
    prod = 1
    for v in relevant_places(a, b):
        prod *= hilbert_symbol(a, b, v)
    assert prod == 1
    assert len(ramification_set(QuaternionAlgebra(a, b))) % 2 == 0


@given(nz, nz, st.integers(1, 40))
def test_hilbert_identities(a, b, c):
    for v in relevant_places(a * c, b * c) + [Place(3), Place(5)]:
        assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
        assert hilbert_symbol(a, -a, v) == 1
        assert hilbert_symbol(a, b * b, v) == 1


def test_ramification_examples():
    B = QuaternionAlgebra(-1, -1)
    assert B.ramified_places == {Place(2), INFINITY} == _places(ramification_oracle(-1, -1))
    assert B.discriminant == 2 and B.is_definite and B.is_division
    S = QuaternionAlgebra(1, 1)
    assert S.ramified_places == frozenset() and S.discriminant == 1 and not S.is_division


# (-10, m) ramification for m | 10, frozen from the brute-force oracle
RAMIFIED_MINUS10 = {1: set(), 2: {2, 5}, 5: {2, 5}, 10: set()}


@pytest.mark.parametrize("m", [1, 2, 5, 10])
def test_minus10_fixture(m):
    assert ramification_set(QuaternionAlgebra(-10, m)) == _places(RAMIFIED_MINUS10[m])


def test_isomorphism():
    assert not is_isomorphic(QuaternionAlgebra(-1, -1), QuaternionAlgebra(2, 5))
    assert _places(ramification_oracle(2, 5)) == QuaternionAlgebra(2, 5).ramified_places
    B = QuaternionAlgebra(-6, 2)
    assert is_isomorphic(B, B)
    assert is_isomorphic(QuaternionAlgebra(1, 1), QuaternionAlgebra(1, 7))


def test_twisting_examples():
    # frozen from the brute-force ramification oracle
    assert twisting_classification(6).twisting_params == (2, 3)
    assert twisting_classification(10).twisting_params == (2, 5)
    for D in (1, 7, 12, 30):
        with pytest.raises(ValueError):
            twisting_classification(D)


def _valid_D(limit):
    out = []
    for D in range(2, limit + 1):
        f = trial_factor(D)
        if all(e == 1 for _, e in f) and len(f) % 2 == 0:
            out.append(D)
    return out


def test_residue_criterion_agrees_with_hilbert_up_to_200():
    for D in _valid_D(200):
        primes = {p for p, _ in trial_factor(D)}
        by_hilbert = [m for m in divisors(D)
                      if ramification_set(QuaternionAlgebra(-D, m)) == _places(primes)]
        by_residue = [m for m in divisors(D) if residue_criterion(D, m)]
        assert by_hilbert == by_residue, D
        tc = twisting_classification(D)
        assert tc.is_twisting == bool(tc.twisting_params)
        assert all(D % m == 0 for m in tc.twisting_params)


@pytest.mark.parametrize("D", [6, 10, 14, 15, 21, 33, 210])
def test_algebra_with_discriminant(D):
    B = algebra_with_discriminant(D)
    assert B.discriminant == D and not B.is_definite
    assert B.a == -D


def test_splitting_fields():
    B = QuaternionAlgebra(-10, 2)
    assert splits_over_multiquadratic(B, [-3, -11])
    assert not splits_over_multiquadratic(B, [-1])
    assert not splits_over_multiquadratic(QuaternionAlgebra(-1, -1), [2])
    assert splits_over_multiquadratic(QuaternionAlgebra(-1, -1), [-1])
