"""Command line front end: ``qmod algebra|bound|order|tree``.

Exit codes: 0 success, 2 invalid input, 3 inconclusive search under --strict.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from sympy import isprime

from .algebra import MixedAlgebraError, QuaternionAlgebra
from .arith import fmt_rational
from .bttree import PlaneLattice, SingularLatticeError, tree_distance
from .cache import Cache
from .moduli import DEFAULT_BOUND, moduli_bound_report
from .orders import (
    DEFAULT_SEARCH_BOUND,
    INCONCLUSIVE,
    NotAnOrderError,
    NotMaximalError,
    QuatOrder,
    distance_ideal,
    find_anticommuting_basis,
    maximal_order,
    order_from_dict,
    order_to_dict,
)

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 2, 3


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _algebra(a: int, b: int) -> QuaternionAlgebra:
    try:
        return QuaternionAlgebra(a, b)
    except (TypeError, ValueError) as e:
        raise InputError(str(e)) from e


def _int_list(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise InputError(f"expected comma separated integers, got {text!r}") from e


# ---------------------------------------------------------------------------


def cmd_algebra(args, out) -> int:
    B = _algebra(args.a, args.b)
    places = sorted(B.ramified_places, key=lambda v: v.sort_key())
    data = {
        "a": B.a,
        "b": B.b,
        "ramified": [str(v) for v in places],
        "discriminant": B.discriminant,
        "division": B.is_division,
        "definite": B.is_definite,
    }
    if args.json:
        print(_dump(data), file=out)
    else:
        print(f"algebra ({B.a}, {B.b} / Q)", file=out)
        print("ramified: {" + ", ".join(data["ramified"]) + "}", file=out)
        print(f"discriminant: {B.discriminant}", file=out)
        print("division algebra" if B.is_division else "split (matrix algebra)", file=out)
    return EXIT_OK


def cmd_bound(args, out, cache: Optional[Cache]) -> int:
    K, L = _int_list(args.K), _int_list(args.L)
    if (K is None) != (L is None):
        raise InputError("--K and --L must be given together")
    if args.search_bound < 0:
        raise InputError("search bound must be nonnegative")
    key = str(args.D)
    if args.search_bound != DEFAULT_BOUND or K is not None:
        key += f";bound={args.search_bound};K={K};L={L}"
    report = cache.get(key) if cache else None
    if report is None:
        try:
            report = moduli_bound_report(args.D, search_bound=args.search_bound, K=K, L=L)
        except ValueError as e:
            raise InputError(str(e)) from e
        if cache:
            cache.put(key, report)
    if args.json:
        print(_dump(report), file=out)
    else:
        tw = report["twisting"]
        b = report["bounds"]
        print(f"D = {report['D']}  presentation ({report['algebra']['a']}, {report['algebra']['b']} / Q)",
              file=out)
        print(f"twisting: {'yes, m in ' + str(tw['params']) if tw['is_twisting'] else 'no'}", file=out)
        print(f"|W| = {report['W']['order']}", file=out)
        for g in ("U0", "V0", "W0"):
            print(f"{g} = {report[g]['name']}  classes {report[g]['elements']}", file=out)
        print(f"Gal(kO/kC) embeds in {b['galois_bound_over_kC']['name']} ({b['applied']} case)", file=out)
        print(f"kO over kC: {report['quadratic_orders']['kO_over_kC']}", file=out)
        ext = report["extension"]
        print(f"Gal(L/K) in {{{', '.join(ext['galois_LK_options'])}}}; {ext['compositum']}", file=out)
        if "gal_LK" in ext:
            print(f"given K, L: Gal(L/K) = {ext['gal_LK']}, B splits over L: {ext['B_splits_over_L']}",
                  file=out)
        print(f"conclusive: {report['conclusive']}", file=out)
    if args.strict and not report["conclusive"]:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _load_order(path: str) -> QuatOrder:
    try:
        with open(path) as fh:
            return order_from_dict(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError, ZeroDivisionError, NotAnOrderError) as e:
        raise InputError(f"cannot read order from {path}: {e}") from e


def _maximal(B: QuaternionAlgebra, cache: Optional[Cache]) -> QuatOrder:
    key = f"{B.a},{B.b}"
    hit = cache.get(key) if cache else None
    if hit is not None:
        return order_from_dict(hit)
    O = maximal_order(B)
    if cache:
        cache.put(key, order_to_dict(O))
    return O


def cmd_order(args, out, cache: Optional[Cache]) -> int:
    if args.order_cmd == "maximal":
        O = _maximal(_algebra(args.a, args.b), cache)
        # the order fields stay at top level so the output can be fed back via --o1/--o2
        data = dict(order_to_dict(O), reduced_discriminant=O.reduced_discriminant)
        if args.json:
            print(_dump(data), file=out)
        else:
            print(f"maximal order in ({O.algebra.a}, {O.algebra.b} / Q)", file=out)
            for row in O.basis:
                print("  " + "  ".join(fmt_rational(c) for c in row), file=out)
            print(f"reduced discriminant: {O.reduced_discriminant}", file=out)
        return EXIT_OK

    if args.order_cmd == "distance":
        O1, O2 = _load_order(args.o1), _load_order(args.o2)
        try:
            rho = distance_ideal(O1, O2)
        except (NotMaximalError, MixedAlgebraError) as e:
            raise InputError(str(e)) from e
        if args.json:
            print(_dump({"distance": rho.generator}), file=out)
        else:
            print(rho.generator, file=out)
        return EXIT_OK

    # basis
    if args.order:
        O = _load_order(args.order)
    elif args.a is not None and args.b is not None:
        O = _maximal(_algebra(args.a, args.b), cache)
    else:
        raise InputError("give --order FILE or -a/-b")
    if args.bound < 1:
        raise InputError("bound must be positive")
    res = find_anticommuting_basis(O, args.bound)
    if res is INCONCLUSIVE:
        data = {"result": "INCONCLUSIVE", "bound": args.bound}
    else:
        data = {"result": "found", "bound": args.bound,
                "iota": [fmt_rational(c) for c in res[0].coords],
                "eta": [fmt_rational(c) for c in res[1].coords]}
    if args.json:
        print(_dump(data), file=out)
    elif res is INCONCLUSIVE:
        print("INCONCLUSIVE", file=out)
    else:
        print(f"iota = {res[0]}", file=out)
        print(f"eta = {res[1]}", file=out)
    if res is INCONCLUSIVE and args.strict:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_tree(args, out) -> int:
    if not isprime(args.p):
        raise InputError(f"{args.p} is not prime")
    try:
        L1 = PlaneLattice.parse(args.l1, args.p)
        L2 = PlaneLattice.parse(args.l2, args.p)
    except (ValueError, ZeroDivisionError, SingularLatticeError) as e:
        raise InputError(f"bad lattice: {e}") from e
    d = tree_distance(L1, L2, args.p)
    print(_dump({"distance": d}) if args.json else d, file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmod", description="Exact invariants of rational quaternion algebras")
    p.add_argument("--cache", help="JSON-lines cache file (default: $QMOD_CACHE)")
    sub = p.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("algebra", help="ramification and discriminant of (a, b / Q)")
    a.add_argument("-a", type=int, required=True)
    a.add_argument("-b", type=int, required=True)
    a.add_argument("--json", action="store_true")

    b = sub.add_parser("bound", help="moduli bound report for discriminant D")
    b.add_argument("-D", type=int, required=True)
    b.add_argument("--search-bound", type=int, default=DEFAULT_BOUND)
    b.add_argument("--K", help="radicands of K, comma separated (use --K=-3)")
    b.add_argument("--L", help="radicands of L, comma separated (use --L=-3,-11)")
    b.add_argument("--json", action="store_true")
    b.add_argument("--strict", action="store_true")

    o = sub.add_parser("order", help="maximal orders, distances, anticommuting bases")
    osub = o.add_subparsers(dest="order_cmd", required=True)
    om = osub.add_parser("maximal")
    om.add_argument("-a", type=int, required=True)
    om.add_argument("-b", type=int, required=True)
    om.add_argument("--json", action="store_true")
    od = osub.add_parser("distance")
    od.add_argument("--o1", required=True)
    od.add_argument("--o2", required=True)
    od.add_argument("--json", action="store_true")
    ob = osub.add_parser("basis")
    ob.add_argument("-a", type=int)
    ob.add_argument("-b", type=int)
    ob.add_argument("--order")
    ob.add_argument("--bound", type=int, default=DEFAULT_SEARCH_BOUND)
    ob.add_argument("--json", action="store_true")
    ob.add_argument("--strict", action="store_true")

    t = sub.add_parser("tree", help="Bruhat-Tits tree distances")
    tsub = t.add_subparsers(dest="tree_cmd", required=True)
    td = tsub.add_parser("distance")
    td.add_argument("-p", type=int, required=True)
    td.add_argument("--l1", required=True, help='rows as "a,b;c,d"')
    td.add_argument("--l2", required=True)
    td.add_argument("--json", action="store_true")
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    cache = Cache.from_env(args.cache)
    try:
        if args.cmd == "algebra":
            return cmd_algebra(args, out)
        if args.cmd == "bound":
            return cmd_bound(args, out, cache)
        if args.cmd == "order":
            return cmd_order(args, out, cache)
        return cmd_tree(args, out)
    except InputError as e:
        print(f"qmod: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
