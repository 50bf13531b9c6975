"""Index table for every admissible K_{n,m} up to a given n.

    python3 scripts/index_table.py --max-n 13 --grid 1024
"""
import argparse

from lagspec.family import derive_params, enumerate_admissible
from lagspec.spectral import index_report, lambda1_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=13)
    ap.add_argument("--grid", type=int, default=1024)
    args = ap.parse_args()

    header = f"{'(n,m)':>8} {'b':>9} {'Ind0':>5} {'Ind1':>5} {'Ind':>4} {'mult6':>6} " \
             f"{'lambda1':>9} {'bound':>9}"
    print(header)
    print("-" * len(header))
    for n, m in enumerate_admissible(args.max_n):
        P = derive_params(n, m)
        r = index_report(P, args.grid)
        lam = lambda1_bound(P, spectrum=r.spectrum)
        print(f"{f'({n},{m})':>8} {P.b:9.6f} {r.ind0:5d} {r.ind1:5d} {r.ind:4d} "
              f"{r.multSix:6d} {lam.lambda1:9.6f} {lam.bound:9.6f}")


if __name__ == "__main__":
    main()
