"""Print the twisting classification and group orders for valid discriminants up to a limit."""
import argparse

from qmod.arith import is_squarefree, prime_divisors
from qmod.moduli import moduli_bound_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=100)
    ap.add_argument("--search-bound", type=int, default=50)
    args = ap.parse_args()
    print(f"{'D':>5}  {'twisting':<10} {'params':<10} {'|W|':>4} {'|V0|':>5} {'|W0|':>5}  conclusive")
    for D in range(2, args.limit + 1):
        if not is_squarefree(D) or len(prime_divisors(D)) % 2:
            continue
        r = moduli_bound_report(D, search_bound=args.search_bound)
        tw = r["twisting"]
        print(f"{D:>5}  {str(tw['is_twisting']):<10} {str(tw['params']):<10} {r['W']['order']:>4} "
              f"{r['V0']['order']:>5} {r['W0']['order']:>5}  {r['conclusive']}")


if __name__ == "__main__":
    main()
