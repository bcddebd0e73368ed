"""Energy of the canonical profile divided by its growth rate, for several s, as delta shrinks.

    python scripts/ratio_sweep.py --s 0.5,0.6,0.75,0.9 --deltas 1e-1,1e-2,1e-3,1e-4,1e-5,1e-6
"""
import argparse

from twoslope.asymptotics import ratio_sweep
from twoslope.serialize import to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s", default="0.5,0.6,0.75,0.9")
    ap.add_argument("--deltas", default="1e-1,1e-2,1e-3,1e-4,1e-5,1e-6")
    ap.add_argument("--threads", type=int, default=1)
    a = ap.parse_args()

    deltas = [float(v) for v in a.deltas.split(",")]
    rows = []
    for s in (float(v) for v in a.s.split(",")):
        for r in ratio_sweep(s, deltas, threads=a.threads):
            rows.append((s, r.delta, r.sigma, r.energy, r.ratio, r.tail_bound))
    print(to_csv(("s", "delta", "sigma", "energy", "ratio", "tail_bound"), rows), end="")


if __name__ == "__main__":
    main()
