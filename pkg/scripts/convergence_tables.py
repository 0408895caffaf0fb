"""Density tables along hypercube, projective-plane and configuration-model sequences."""

import argparse
from pathlib import Path

from graphlim.density import convergence_table
from graphlim.graph_core import RandomSource, configuration_model, hypercube, pair, projective_incidence
from graphlim.report import write_text

PATTERNS = ["K2", "P3", "C4", "C6", "K2,3"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/convergence")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-d", type=int, default=10)
    args = ap.parse_args()
    out = Path(args.out)

    cubes = [pair(hypercube(d), d, f"Q{d}") for d in range(3, args.max_d + 1)]
    planes = [projective_incidence(q) for q in (2, 3, 5, 7)]
    rngs = RandomSource(args.seed).fork(4)
    configs = []
    for j, rng in zip(range(7, 11), rngs):
        n = 2**j
        d = round(n ** (1 / 3))
        configs.append(pair(configuration_model(n, d, rng)[1], d, f"CM{n}_{d}"))

    for name, seq in (("hypercube", cubes), ("projective", planes), ("configuration", configs)):
        for kind in ("t", "t_inj"):
            tab = convergence_table(seq, PATTERNS, kind=kind, meta={"family": name, "seed": args.seed})
            write_text(out / f"{name}_{kind}.csv", tab.to_csv())
            print(f"wrote {out / f'{name}_{kind}.csv'}")


if __name__ == "__main__":
    main()
