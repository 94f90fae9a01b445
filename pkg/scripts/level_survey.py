"""Search for anticommuting bases in Eichler orders of level N inside the split algebras (1, b).

For each (b, N) reports whether a pair iota, eta with iota^2 = 1, eta^2 = b was found
within the height bound, next to whether N divides 4b.
"""
import argparse
import time

from qmod.bttree import eichler_order
from qmod.orders import INCONCLUSIVE, find_anticommuting_basis


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--b", type=int, nargs="+", default=[1, 2, 3, -1, 6])
    ap.add_argument("--max-level", type=int, default=12)
    ap.add_argument("--bound", type=int, default=50)
    args = ap.parse_args()
    print(f"{'b':>3} {'N':>3}  {'N | 4b':<7} {'found':<6} {'secs':>6}  witness")
    for b in args.b:
        for N in range(1, args.max_level + 1):
            t0 = time.time()
            res = find_anticommuting_basis(eichler_order(N, b), bound=args.bound)
            found = res is not INCONCLUSIVE
            wit = f"iota={res[0]} eta={res[1]}" if found else ""
            print(f"{b:>3} {N:>3}  {str((4 * b) % N == 0):<7} {str(found):<6} {time.time() - t0:6.2f}  {wit}")


if __name__ == "__main__":
    main()
