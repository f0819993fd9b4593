"""Flux of every named catalog loop by the period and conormal methods.

    python3 scripts/flux_table.py [--samples 2048]
"""
import argparse

import numpy as np

from minsurf.catalog import make_catenoid, make_critical_catenoid, make_enneper, make_enneper_pair
from minsurf.geometry import flux
from minsurf.paths import PathSpec

ENTRIES = [make_catenoid(1.0), make_catenoid(-2.0), make_critical_catenoid(), make_enneper(1),
           make_enneper(3), make_enneper_pair(2.0), make_enneper_pair(3.0)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=2048)
    args = ap.parse_args()
    print(f"{'surface':20s} {'loop':8s} {'fx':>11s} {'fy':>11s} {'fz':>13s} {'method gap':>11s}")
    for e in ENTRIES:
        for name, loop in e.loops.items():
            f = flux(e.wd, PathSpec.from_json(loop), args.samples)
            v = np.where(np.abs(f.value) < 1e-14, 0.0, f.value)
            print(f"{e.name:20s} {name:8s} {v[0]:11.3e} {v[1]:11.3e} {v[2]:13.10f} {f.agreement:11.2e}")


if __name__ == "__main__":
    main()
