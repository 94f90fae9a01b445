import json
import random
from fractions import Fraction
from itertools import product

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from oracles import (
    gram_discriminant,
    in_lattice,
    is_closed_order,
    ramification_oracle,
    same_lattice,
    sublattice_index,
)
from qmod.algebra import MixedAlgebraError, QuaternionAlgebra
from qmod.bttree import endomorphism_order, matrix_to_quat
from qmod.orders import (
    INCONCLUSIVE,
    ORDER_SCHEMA,
    NotAnOrderError,
    NotMaximalError,
    QuatOrder,
    check_basis_divisibility,
    distance_ideal,
    enumerate_sqrt,
    find_anticommuting_basis,
    intersect,
    is_order,
    lattice_from_generators,
    maximal_order,
    order_from_json,
    order_to_json,
    reduced_discriminant,
    saturate_to_maximal,
    standard_order,
)

H = QuaternionAlgebra(-1, -1)
HURWITZ = [H.element(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)), H.i, H.j, H.k]
M2 = QuaternionAlgebra(1, 1)
M2Z = [matrix_to_quat(E) for E in ([[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]])]

nz30 = st.integers(-30, 30).filter(bool)


def _coords(xs):
    return [list(x.coords) for x in xs]


def test_lattice_from_generators():
    L = lattice_from_generators(H, H.basis())
    assert L.basis == tuple(tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4))
    gens = [H.scalar(2), H.i * 2, H.j * 2, H.k * 2, H.one + H.i]
    L = lattice_from_generators(H, gens)
    assert same_lattice(L.basis, [[1, 1, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]])
    assert all(in_lattice(L.basis, g.coords) for g in gens)
    assert lattice_from_generators(H, L.elements) == L
    with pytest.raises(ValueError):
        lattice_from_generators(H, [H.one, H.i, H.one + H.i])


def test_is_order_examples():
    assert is_order(standard_order(QuaternionAlgebra(-6, 2)).lattice)
    half = lattice_from_generators(H, [b * Fraction(1, 2) for b in H.basis()])
    assert not is_order(half)
    assert not is_closed_order(-1, -1, [[Fraction(int(i == j), 2) for j in range(4)] for i in range(4)])
    hur = lattice_from_generators(H, HURWITZ)
    assert is_order(hur) and is_closed_order(-1, -1, hur.basis)
    with pytest.raises(NotAnOrderError):
        QuatOrder(half)


def test_reduced_discriminant_examples():
    assert reduced_discriminant(standard_order(H)) == 4
    hur = QuatOrder(lattice_from_generators(H, HURWITZ))
    assert reduced_discriminant(hur) == 2 == gram_discriminant(-1, -1, _coords(HURWITZ))
    m2z = QuatOrder(lattice_from_generators(M2, M2Z))
    assert reduced_discriminant(m2z) == 1 == gram_discriminant(1, 1, _coords(M2Z))


@pytest.mark.parametrize("a, b, d", [(-1, -1, 4), (-6, 2, 48), (1, 1, 4)])
def test_standard_order_discriminant(a, b, d):
    assert standard_order(QuaternionAlgebra(a, b)).reduced_discriminant == d


@settings(max_examples=60, deadline=None)
@given(st.integers(-10**4, 10**4).filter(bool), st.integers(-10**4, 10**4).filter(bool))
def test_standard_order_discriminant_property(a, b):
    assert standard_order(QuaternionAlgebra(a, b)).reduced_discriminant == abs(4 * a * b)


def test_saturation_examples():
    O = saturate_to_maximal(standard_order(H))
    assert O.reduced_discriminant == 2 and O.lattice.contains_lattice(standard_order(H).lattice)
    assert gram_discriminant(-1, -1, [list(r) for r in O.basis]) == 2
    assert is_closed_order(-1, -1, [list(r) for r in O.basis])
    P = saturate_to_maximal(standard_order(M2))
    assert P.reduced_discriminant == 1
    assert saturate_to_maximal(P) == P


@settings(max_examples=40, deadline=None)
@given(nz30, nz30)
def test_saturation_reaches_discriminant(a, b):
    B = QuaternionAlgebra(a, b)
    O = maximal_order(B)
    expect = 1
    for p in ramification_oracle(a, b):
        if p is not None:
            expect *= p
    assert O.reduced_discriminant == expect == B.discriminant
    assert O.lattice.contains_lattice(standard_order(B).lattice)


def test_distance_examples():
    O = endomorphism_order([[1, 0], [0, 1]])
    O9 = endomorphism_order([[1, 0], [0, 9]])
    assert intersect(O, O) == O and distance_ideal(O, O).generator == 1
    assert distance_ideal(O, O9).generator == 9 == distance_ideal(O9, O).generator
    E = intersect(O, O9)
    assert sublattice_index(O.basis, E.basis) == 9


def test_distance_errors():
    with pytest.raises(NotMaximalError):
        intersect(standard_order(M2), maximal_order(M2))
    with pytest.raises(MixedAlgebraError):
        intersect(maximal_order(H), maximal_order(M2))


def _random_lattice(rng):
    while True:
        G = [[rng.randint(-12, 12) for _ in range(2)] for _ in range(2)]
        if G[0][0] * G[1][1] - G[0][1] * G[1][0]:
            return G


def test_distance_symmetry_and_level_random():
    rng = random.Random(7)
    for _ in range(25):
        O1, O2 = endomorphism_order(_random_lattice(rng)), endomorphism_order(_random_lattice(rng))
        d12 = distance_ideal(O1, O2).generator
        assert d12 == distance_ideal(O2, O1).generator == intersect(O1, O2).eichler_level
        assert distance_ideal(O1, O1).generator == 1


def test_check_basis_divisibility():
    assert check_basis_divisibility(1, -1, -1)
    assert not check_basis_divisibility(3, 1, 1)
    assert check_basis_divisibility(8, -6, 2)
    with pytest.raises(ValueError):
        check_basis_divisibility(0, 1, 1)


def _check_pair(O, pair, a, b):
    iota, eta = pair
    B = O.algebra
    assert iota in O and eta in O
    assert iota * iota == B.scalar(a) and eta * eta == B.scalar(b)
    assert iota * eta == -(eta * iota)


def test_anticommuting_examples():
    m2z = QuatOrder(lattice_from_generators(M2, M2Z))
    # diag(1,-1) and the antidiagonal swap are in M2(Z) and anticommute
    _check_pair(m2z, (matrix_to_quat([[1, 0], [0, -1]]), matrix_to_quat([[0, 1], [1, 0]])), 1, 1)
    _check_pair(m2z, find_anticommuting_basis(m2z), 1, 1)
    hur = maximal_order(H)
    assert find_anticommuting_basis(hur) == (H.i, H.j)
    B = QuaternionAlgebra(-1, -1)
    assert find_anticommuting_basis(maximal_order(B), bound=1, a=-1, b=-9 * 49) is INCONCLUSIVE


@settings(max_examples=15, deadline=None)
@given(st.integers(-12, 12).filter(bool), st.integers(-12, 12).filter(bool))
def test_anticommuting_outputs_satisfy_relations(a, b):
    B = QuaternionAlgebra(a, b)
    O = maximal_order(B)
    res = find_anticommuting_basis(O, bound=6)
    if res is not INCONCLUSIVE:
        _check_pair(O, res, a, b)
        assert check_basis_divisibility(O.eichler_level, a, b)


def _brute_sqrt(O, a, bound):
    E = O.search_basis
    out = set()
    for y in product(range(-bound, bound + 1), repeat=4):
        x = sum((e * c for e, c in zip(E, y) if c), O.algebra.scalar(0))
        if not x.is_zero() and x * x == O.algebra.scalar(a):
            out.add(_canon(x))
    return out


def _canon(x):
    return max(x, -x, key=lambda z: [c for c in z.coords])


def test_enumerate_sqrt_matches_brute_force():
    m2z = QuatOrder(lattice_from_generators(M2, M2Z))
    got = enumerate_sqrt(m2z, 1, bound=1)
    assert {_canon(x) for x in got} == _brute_sqrt(m2z, 1, 1)
    assert len(got) == len({_canon(x) for x in got})
    assert matrix_to_quat([[1, 0], [0, -1]]) in got and matrix_to_quat([[0, 1], [1, 0]]) in got
    assert M2.one in got
    hur = maximal_order(H)
    got = enumerate_sqrt(hur, -1, bound=1)
    assert {_canon(x) for x in got} == _brute_sqrt(hur, -1, 1)
    assert {H.i, H.j, H.k} <= set(got)
    assert enumerate_sqrt(hur, 0, bound=3) == []


def test_json_round_trip():
    O = maximal_order(QuaternionAlgebra(-6, 2))
    s = order_to_json(O)
    jsonschema.validate(json.loads(s), ORDER_SCHEMA)
    O2 = order_from_json(s)
    assert O2 == O and order_to_json(O2) == s


def test_search_basis_is_a_basis():
    O = maximal_order(QuaternionAlgebra(-30, 7))
    L = lattice_from_generators(O.algebra, O.search_basis)
    assert L == O.lattice
