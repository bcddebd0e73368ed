"""Brute-force and descent minimisers over gap configurations for a grid of (L, s, delta).

    python scripts/periodicity_scan.py --threads 4 > periodicity.csv
"""
import argparse

from twoslope.optimize import DescentOptions, brute_force, minimize_gaps
from twoslope.profile import ProblemParams
from twoslope.serialize import to_csv

GRID_N = {2: 100, 3: 48}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", default="2,3")
    ap.add_argument("--s", default="0.3,0.5,0.7")
    ap.add_argument("--deltas", default="0.2,0.1")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()

    rows = []
    opts = DescentOptions(multistart_count=4, rng_seed=a.seed)
    for L in (int(v) for v in a.L.split(",")):
        for s in (float(v) for v in a.s.split(",")):
            for d in (float(v) for v in a.deltas.split(",")):
                pr = ProblemParams.normalized(s, d, L)
                bf = brute_force(pr, s, GRID_N[L], a.threads)
                gd = minimize_gaps(pr, s, opts, a.threads)
                rows.append((L, s, d, " ".join(f"{g:.6g}" for g in bf.best_gaps.gaps),
                             bf.best_energy.value, gd.periodicity_residual / pr.T, gd.best_energy.value))
    header = ("L", "s", "delta", "brute_gaps", "brute_energy", "descent_residual_over_T", "descent_energy")
    print(to_csv(header, rows), end="")


if __name__ == "__main__":
    main()
