"""Interface energy density against misfit for a symmetric bilayer, with the leading asymptote.

    python scripts/misfit_table.py --G 1 --nu 0.3 --c 1
"""
import argparse
import math

import numpy as np

from twoslope.misfit import MisfitInputs, misfit_solve
from twoslope.serialize import to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--G", type=float, default=1.0)
    ap.add_argument("--nu", type=float, default=0.3)
    ap.add_argument("--c", type=float, default=1.0)
    ap.add_argument("--misfits", default=",".join(f"{m:g}" for m in np.logspace(-1, -6, 11)))
    a = ap.parse_args()

    rows = []
    for m in (float(v) for v in a.misfits.split(",")):
        rep = misfit_solve(MisfitInputs.symmetric(a.G, a.nu, a.c, m))
        asym = rep.prefactor * rep.c * rep.m * math.log(1.0 / rep.m)
        rows.append((m, rep.finite_delta_density, rep.leading_density, asym, rep.finite_delta_density / asym))
    header = ("m", "finite_delta_density", "leading_density", "asymptote", "ratio")
    print(to_csv(header, rows), end="")


if __name__ == "__main__":
    main()
