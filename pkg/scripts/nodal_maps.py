"""Write PGM sign maps of g_1..g_7 and print their nodal domain counts.

    python3 scripts/nodal_maps.py --n 5 --m 2 --out nodal_maps
"""
import argparse
from pathlib import Path

from lagspec.export import pgm_bytes
from lagspec.family import derive_params
from lagspec.nodal import count_nodal_domains, expected_counts, sample_g, sign_map


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--nx", type=int, default=512)
    ap.add_argument("--ny", type=int, default=512)
    ap.add_argument("--out", default="nodal_maps")
    args = ap.parse_args()

    P = derive_params(args.n, args.m)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, want in enumerate(expected_counts(P), start=1):
        grid = sample_g(P, i, args.nx, args.ny)
        got = count_nodal_domains(grid)
        path = out / f"g{i}_n{P.n}_m{P.m}.pgm"
        path.write_bytes(pgm_bytes(sign_map(grid)))
        print(f"g{i}: {got:3d} domains (expected {want}) -> {path}")
    torus = count_nodal_domains(sample_g(P, 1, args.nx, args.ny), gluing="torus")
    print(f"g1 on the torus gluing: {torus} domains")


if __name__ == "__main__":
    main()
