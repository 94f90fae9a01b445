"""Write moduli bound reports as JSON files, one per discriminant."""
import argparse
import json
from pathlib import Path

from qmod.moduli import moduli_bound_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("D", type=int, nargs="+")
    ap.add_argument("--out", type=Path, default=Path("reports"))
    ap.add_argument("--search-bound", type=int, default=50)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for D in args.D:
        r = moduli_bound_report(D, search_bound=args.search_bound)
        path = args.out / f"bound_D{D}.json"
        path.write_text(json.dumps(r, sort_keys=True, indent=2) + "\n")
        print(f"{path}  twisting={r['twisting']['is_twisting']}  W0={r['W0']['name']}  "
              f"conclusive={r['conclusive']}")


if __name__ == "__main__":
    main()
