"""Chromatic value ratios of stars and root measures of small graphs."""

import argparse
from pathlib import Path

from graphlim.graph_core import RandomSource, complete, cycle, hypercube, pair
from graphlim.polynomials.chromatic import chromatic_root_measure, chvalue_identity_check, star_sequence
from graphlim.report import canonical_json, write_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/chromatic")
    ap.add_argument("--xi", type=complex, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    stars = star_sequence([2**j for j in range(2, 9)], args.xi)
    for r in stars:
        print(f"K1,{r['m']}: ratio {r['ratio']:.6f}  limit {r['limit']:.6f}")
    rng = RandomSource(args.seed)
    graphs = []
    for pr in (pair(cycle(9), 2, "C9"), pair(complete(6), 5, "K6"), pair(hypercube(3), 3, "Q3")):
        nu = chromatic_root_measure(pr, rng=rng)
        write_text(out / f"{pr.name}_nu.csv", nu.to_csv())
        graphs.append({"graph": pr.name, "identity_residual": chvalue_identity_check(pr, args.xi, rng=rng),
                       "bound_violations": nu.meta["bound_violations"]})
    write_text(out / "summary.json", canonical_json({"stars": stars, "graphs": graphs}))


if __name__ == "__main__":
    main()
