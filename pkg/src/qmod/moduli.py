"""Polarized maximal orders over Q and the groups that bound their fields of moduli.

Classes in the Atkin-Lehner group W = {w_d : d | D} are labelled by the
divisor d; products of classes multiply labels up to squares, so subgroups
are described by sets of squarefree divisors of D.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Optional, Sequence

from .algebra import (
    QuatElement,
    QuaternionAlgebra,
    TwistClassification,
    _f2_closure,
    algebra_with_discriminant,
    check_totally_indefinite_discriminant,
    splits_over_multiquadratic,
    twisting_classification,
)
from .arith import divisors, f2_span, fmt_rational, squarefree_part
from .linalg import det, integer_kernel, saturate, to_integer
from .orders import (
    QuatOrder,
    elements_of_norm,
    maximal_order,
    pure_elements_of_norm,
    reduced_basis,
)
from .quadfield import QuadOrder, RootsOfUnity, roots_of_unity, u0_generators
from .search import INCONCLUSIVE, CancelToken, Inconclusive, SearchCancelled, shell

DEFAULT_BOUND = 50


@dataclass(frozen=True)
class PolarizedOrder:
    order: QuatOrder
    mu: QuatElement

    def __post_init__(self):
        O, mu = self.order, self.mu
        D = O.algebra.discriminant
        if not O.is_maximal:
            raise ValueError("a polarized order needs a maximal order")
        if mu.algebra != O.algebra or mu not in O:
            raise ValueError("mu does not lie in the order")
        if mu * mu != O.algebra.scalar(-D):
            raise ValueError(f"mu^2 != -{D}")

    @property
    def D(self) -> int:
        return self.order.algebra.discriminant


@dataclass(frozen=True)
class GroupDescriptor:
    """An elementary abelian 2-group of Atkin-Lehner classes, by divisor labels."""

    name: str
    order: int
    rank: int
    elements: tuple[int, ...]
    generators: tuple[QuatElement, ...] = ()

    @classmethod
    def from_labels(cls, labels: Sequence[int], generators=()) -> "GroupDescriptor":
        elems = tuple(f2_span(list(labels)))
        rank = len(elems).bit_length() - 1
        return cls(c2_name(rank), len(elems), rank, elems, tuple(generators))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "rank": self.rank,
            "elements": list(self.elements),
            "generators": [element_to_list(g) for g in self.generators],
        }


def c2_name(rank: int) -> str:
    return "1" if rank == 0 else "x".join(["C2"] * rank)


def element_to_list(x: QuatElement) -> list[str]:
    return [fmt_rational(c) for c in x.coords]


@dataclass(frozen=True)
class AtkinLehnerGroup:
    D: int
    representatives: dict
    order: int

    @property
    def complete(self) -> bool:
        return all(v is not INCONCLUSIVE for v in self.representatives.values())

    def to_dict(self) -> dict:
        reps = []
        for d, w in sorted(self.representatives.items()):
            reps.append({"d": d, "omega": "INCONCLUSIVE" if w is INCONCLUSIVE else element_to_list(w)})
        return {"order": self.order, "rank": self.order.bit_length() - 1, "reps": reps}


@dataclass(frozen=True)
class U0Structure:
    descriptor: GroupDescriptor
    r_mu: QuadOrder
    roots: RootsOfUnity


@dataclass(frozen=True)
class TwistReport:
    polarized: PolarizedOrder
    twists: tuple[QuatElement, ...]
    classes: tuple[int, ...]
    v0_order: int
    u0_order: int
    w0_order: int
    search_bound: int
    conclusive: bool

    @property
    def s0(self) -> int:
        return len(self.classes)


class InconclusiveError(RuntimeError):
    pass


# ---------------------------------------------------------------------------


def find_polarization(O: QuatOrder, bound: int = DEFAULT_BOUND,
                      cancel: Optional[CancelToken] = None) -> PolarizedOrder | Inconclusive:
    if not O.is_maximal:
        raise ValueError("find_polarization expects a maximal order")
    if bound < 1:
        return INCONCLUSIVE
    D = O.algebra.discriminant
    for mu in pure_elements_of_norm(O, D, bound, cancel=cancel):
        return PolarizedOrder(O, mu)
    return INCONCLUSIVE


def atkin_lehner_group(O: QuatOrder, bound: int = DEFAULT_BOUND,
                       cancel: Optional[CancelToken] = None) -> AtkinLehnerGroup:
    if not O.is_maximal:
        raise ValueError("atkin_lehner_group expects a maximal order")
    D = O.algebra.discriminant
    if D == 1:
        raise ValueError("the algebra is split; D must exceed 1")
    reps: dict = {}
    for d in divisors(D):
        if d == 1:
            reps[d] = O.algebra.one
            continue
        reps[d] = INCONCLUSIVE
        for w in elements_of_norm(O, d, bound, cancel):
            if O.normalizes(w):
                reps[d] = w
                break
    return AtkinLehnerGroup(D, reps, len(divisors(D)))


def _to_quaternion(z, mu: QuatElement, D: int) -> QuatElement:
    # sqrt(d) in Q(sqrt(-D)) corresponds to mu / s with s^2 = -D / d
    s2 = Fraction(-D, z.field.radicand)
    s = isqrt(s2.numerator)
    return mu.algebra.scalar(z.u) + mu * (z.v / s)


def r_mu(P: PolarizedOrder) -> QuadOrder:
    """(Q + Q mu) intersected with O, as an order of Q(sqrt(-D))."""
    O, mu = P.order, P.mu
    coords = [O.lattice.coordinates(O.algebra.one), O.lattice.coordinates(mu)]
    M, _ = to_integer(coords)
    rows = saturate(M, 4)
    E = O.elements
    w = [sum((e * c for e, c in zip(E, r) if c), O.algebra.scalar(0)) for r in rows]
    disc = det([[(x * y).trace() for y in w] for x in w])
    return QuadOrder.from_discriminant(int(disc))


def u0_structure(P: PolarizedOrder) -> U0Structure:
    R = r_mu(P)
    roots = roots_of_unity(R)
    gens = tuple(_to_quaternion(z, P.mu, P.D) for z in u0_generators(P.D, R))
    if roots.omega_odd != 1:
        raise ValueError(f"R_mu has {roots.omega_odd} odd roots of unity; D = {P.D} is not composite")
    # the single generator sqrt(-D) = mu lies in the class of w_D
    desc = GroupDescriptor("C2", 2, 1, (1, P.D), gens)
    return U0Structure(desc, R, roots)


def twist_plane(P: PolarizedOrder) -> list[QuatElement]:
    """Reduced Z-basis of {x in O : trd(x) = 0, x mu = -mu x}."""
    O, mu = P.order, P.mu
    E = O.elements
    C = [[e.trace() for e in E], [(e * mu.conj()).trace() for e in E]]
    C, _ = to_integer(C)
    K = integer_kernel(C, 4)
    basis = [sum((e * c for e, c in zip(E, r) if c), O.algebra.scalar(0)) for r in K]
    return reduced_basis(basis)


def _square_class_in(n: int, labels: Sequence[int]) -> Optional[int]:
    """The label d with n/d a square, if any."""
    for d in labels:
        r = isqrt(n * d)
        if r * r == n * d:
            return d
    return None


def find_twists(P: PolarizedOrder, bound: int = DEFAULT_BOUND,
                cancel: Optional[CancelToken] = None) -> TwistReport:
    O, mu, D = P.order, P.mu, P.D
    c0, c1 = twist_plane(P)
    # -nrd(x c0 + y c1) = A x^2 + Bxy + C y^2, an integral form
    A, C = int(-c0.norm()), int(-c1.norm())
    Bc = int(-(c0 * c1.conj()).trace())
    # a normalizing element has nrd = d * square with d | D
    labels = [d for d in divisors(D) if d > 1]
    found: dict[int, QuatElement] = {}
    for h in range(1, bound + 1):
        if cancel is not None and cancel.is_set():
            raise SearchCancelled("twist search cancelled")
        for x, y in shell(2, h):
            n = A * x * x + Bc * x * y + C * y * y
            if n <= 0:
                continue
            m = _square_class_in(n, labels)
            if m is None or m in found:
                continue
            chi = c0 * x + c1 * y
            if O.normalizes(chi):
                found[m] = chi
    tc = twisting_classification(D)
    classes = tuple(sorted(found))
    if not tc.is_twisting and classes:
        raise AssertionError(f"twist found for non-twisting D = {D}")
    u0 = u0_structure(P).descriptor
    v0 = f2_span(list(classes)) if classes else [1]
    w0 = f2_span(list(classes) + list(u0.elements))
    if tc.is_twisting:
        conclusive = any(set(classes) == {m, D // m} for m in tc.twisting_params)
    else:
        conclusive = True
    return TwistReport(P, tuple(found[m] for m in classes), classes, len(v0), u0.order, len(w0),
                       bound, conclusive)


def stable_group(P: PolarizedOrder, report: TwistReport) -> GroupDescriptor:
    if report.polarized != P:
        raise ValueError("twist report belongs to another polarized order")
    if not report.conclusive:
        raise InconclusiveError("twist search was inconclusive")
    u0 = u0_structure(P).descriptor
    return GroupDescriptor.from_labels(list(u0.elements) + list(report.classes),
                                       u0.generators + report.twists)


def pic_bar_plus_Q(N: int) -> dict:
    if N < 1:
        raise ValueError("level must be positive")
    return {"level": N, "group": "1", "order": 1, "type_number": 1}


# ---------------------------------------------------------------------------
# Report


def default_polarized_order(D: int) -> PolarizedOrder:
    """Maximal order containing Z<i, j> in the chosen presentation (-D, b), with mu = i."""
    B = algebra_with_discriminant(D)
    O = maximal_order(B)
    return PolarizedOrder(O, B.i)


def _gal_name(k: int) -> str:
    return {0: "1", 1: "C2", 2: "C2xC2"}.get(k, c2_name(k))


def _f2_rank(radicands: Sequence[int]) -> int:
    return len(_f2_closure(radicands)).bit_length() - 1


def extension_section(B: QuaternionAlgebra, K: Optional[Sequence[int]], L: Optional[Sequence[int]]) -> dict:
    out = {
        "galois_LK_options": ["1", "C2", "C2xC2"],
        "compositum": "L = kO.K",
        "splitting": "B tensor L = M2(L)",
    }
    if K is None or L is None:
        return out
    K = [squarefree_part(r) for r in K]
    L = [squarefree_part(r) for r in L]
    rank_L, rank_K = _f2_rank(L), _f2_rank(K)
    if _f2_rank(K + L) != rank_L:
        raise ValueError("K is not contained in L")
    gal = _gal_name(rank_L - rank_K)
    span_L = [c for c in _f2_closure(L)]
    # quadratic and multiquadratic subfields F of L with F.K = L
    candidates = []
    for mask in product((0, 1), repeat=len(span_L)):
        gens = [c for c, bit in zip(span_L, mask) if bit and c != 1]
        F = tuple(c for c in _f2_closure(gens) if c != 1)
        if _f2_rank(list(F) + K) == rank_L and F not in [c["radicands"] for c in candidates]:
            candidates.append({"radicands": F, "has_real_embedding": all(c > 0 for c in F)})
    candidates = [dict(radicands=list(c["radicands"]), has_real_embedding=c["has_real_embedding"])
                  for c in sorted(candidates, key=lambda c: (len(c["radicands"]), c["radicands"]))]
    out.update({
        "K": K,
        "L": L,
        "gal_LK": gal,
        "gal_LK_allowed": gal in out["galois_LK_options"],
        "B_splits_over_L": splits_over_multiquadratic(B, L),
        "kO_candidates": candidates,
    })
    return out


def moduli_bound_report(D: int, polarized: Optional[PolarizedOrder] = None, search_bound: int = DEFAULT_BOUND,
                        K: Optional[Sequence[int]] = None, L: Optional[Sequence[int]] = None,
                        cancel: Optional[CancelToken] = None) -> dict:
    check_totally_indefinite_discriminant(D)
    tc: TwistClassification = twisting_classification(D)
    P = polarized if polarized is not None else default_polarized_order(D)
    if P.D != D:
        raise ValueError(f"polarized order has discriminant {P.D}, not {D}")
    B = P.order.algebra
    W = atkin_lehner_group(P.order, search_bound, cancel)
    u0 = u0_structure(P)
    tw = find_twists(P, search_bound, cancel)
    v0 = GroupDescriptor.from_labels(list(tw.classes), tw.twists)
    w0 = GroupDescriptor.from_labels(list(u0.descriptor.elements) + list(tw.classes))
    omega_odd = u0.roots.omega_odd
    applied = "twisting" if tc.is_twisting else "nontwisting"
    exponent = 2 * omega_odd if tc.is_twisting else omega_odd
    if tc.is_twisting:
        m = min(tw.classes) if tw.conclusive else tc.twisting_params[0]
        quad = {
            "distinguished_radicands": sorted({m, D // m}),
            "kO_equals_kS": "for every real quadratic order S not inside Q(sqrt(m)) or Q(sqrt(D/m))",
            "distinguished_extensions": "k_Z[w_m] and k_Z[w_(D/m)] are at most quadratic over kC",
            "compositum": "kO = k_Z[w_m].k_Z[w_(D/m)]",
            "kO_over_kC": "abelian of degree at most 4",
        }
    else:
        quad = {
            "distinguished_radicands": [],
            "kO_equals_kS": "for every real quadratic order S",
            "kO_over_kC": "degree at most 2",
        }
    report = {
        "D": D,
        "algebra": {"a": B.a, "b": B.b},
        "twisting": {
            "is_twisting": tc.is_twisting,
            "params": list(tc.twisting_params),
            "residue_params": list(tc.residue_params),
        },
        "polarization": {"mu": element_to_list(P.mu)},
        "order_basis": [[fmt_rational(c) for c in row] for row in P.order.basis],
        "W": W.to_dict(),
        "R_mu": {"discriminant": u0.r_mu.discriminant, "conductor": u0.r_mu.conductor,
                 "omega": u0.roots.omega, "omega_odd": omega_odd},
        "U0": u0.descriptor.to_dict(),
        "V0": v0.to_dict(),
        "W0": w0.to_dict(),
        "twists": [{"m": m, "chi": element_to_list(c), "norm": fmt_rational(c.norm())}
                   for m, c in zip(tw.classes, tw.twists)],
        "s0": tw.s0,
        "bounds": {
            "nontwisting_exponent": omega_odd,
            "twisting_exponent": 2 * omega_odd,
            "applied": applied,
            "galois_bound_over_kC": {"name": c2_name(exponent), "exponent": exponent},
        },
        "quadratic_orders": quad,
        "extension": extension_section(B, K, L),
        "pic_bar_plus": pic_bar_plus_Q(1),
        "conclusive": tw.conclusive and W.complete,
        "search_bounds": {"atkin_lehner": search_bound, "twists": search_bound},
        "notes": [
            "omega is reported for completeness; the bounds depend on omega_odd only",
            "s0 counts the twist classes found within the search bound",
            "over Q the positive Atkin-Lehner group equals W and has rank 2r",
        ],
    }
    return report


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["D", "twisting", "W", "U0", "V0", "W0", "bounds", "extension", "conclusive",
                 "search_bounds"],
    "definitions": {
        "group": {
            "type": "object",
            "required": ["name", "order", "rank", "elements", "generators"],
            "properties": {
                "name": {"type": "string"},
                "order": {"type": "integer", "minimum": 1},
                "rank": {"type": "integer", "minimum": 0},
                "elements": {"type": "array", "items": {"type": "integer"}},
                "generators": {"type": "array"},
            },
        },
    },
    "properties": {
        "D": {"type": "integer", "minimum": 2},
        "twisting": {
            "type": "object",
            "required": ["is_twisting", "params"],
            "properties": {"is_twisting": {"type": "boolean"},
                           "params": {"type": "array", "items": {"type": "integer"}}},
        },
        "W": {
            "type": "object",
            "required": ["order", "reps"],
            "properties": {"order": {"type": "integer"}, "reps": {"type": "array"}},
        },
        "U0": {"$ref": "#/definitions/group"},
        "V0": {"$ref": "#/definitions/group"},
        "W0": {"$ref": "#/definitions/group"},
        "bounds": {
            "type": "object",
            "required": ["nontwisting_exponent", "twisting_exponent", "applied"],
            "properties": {
                "nontwisting_exponent": {"type": "integer"},
                "twisting_exponent": {"type": "integer"},
                "applied": {"enum": ["twisting", "nontwisting"]},
            },
        },
        "extension": {
            "type": "object",
            "required": ["galois_LK_options", "compositum"],
            "properties": {
                "galois_LK_options": {"const": ["1", "C2", "C2xC2"]},
                "compositum": {"const": "L = kO.K"},
            },
        },
        "conclusive": {"type": "boolean"},
        "search_bounds": {"type": "object"},
    },
}
