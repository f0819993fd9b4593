"""Rotation-index audits for catalog surfaces and random rational Hopf differentials.

    python3 scripts/index_audits.py [--random 200] [--seed 0]
"""
import argparse
from collections import Counter

import numpy as np

from minsurf.catalog import (
    make_catenoid, make_critical_catenoid, make_enneper, make_enneper_pair, make_perturbed_enneper,
)
from minsurf.hopf import PUNCTURED_CAPILLARY_DISK, Closed, HopfDifferential, hopf_differential, index_audit
from minsurf.ratfun import ComplexPoly as P, rat_reduce


def _random_phi(rng):
    nz, npole = rng.integers(0, 7), rng.integers(0, 7)
    zs = rng.normal(size=nz) + 1j * rng.normal(size=nz)
    ps = rng.normal(size=npole) + 1j * rng.normal(size=npole)
    return rat_reduce(P.from_roots(list(zs)) * P((complex(*rng.normal(size=2)),)),
                      P.from_roots(list(ps)) if npole else P((1,)))


def _where(at):
    return at if isinstance(at, str) else f"{complex(*at):.4g}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--random", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("catalog, Riemann sphere (expected 2):")
    for e in [make_catenoid(1.0), make_enneper(1), make_enneper(2), make_enneper(3),
              make_perturbed_enneper(3, [0, 0, 1]), make_enneper_pair(2.0)]:
        a = index_audit(hopf_differential(e.wd), Closed(0))
        parts = ", ".join(f"{_where(x['at'])}: {x['index']}" for x in a.entries)
        print(f"  {e.name:22s} sum {str(a.index_sum):>4s}  [{parts}]")

    print("punctured capillary disk (expected 1):")
    for e in [make_catenoid(1.0), make_catenoid(-2.0), make_critical_catenoid()]:
        a = index_audit(hopf_differential(e.wd), PUNCTURED_CAPILLARY_DISK)
        print(f"  {e.name:22s} sum {str(a.index_sum):>4s}  status {a.status}  beta_max {a.beta_max:.1e}")

    rng = np.random.default_rng(args.seed)
    sums = Counter(str(index_audit(HopfDifferential(_random_phi(rng)), Closed(0)).index_sum)
                   for _ in range(args.random))
    print(f"{args.random} random rational Phi on the sphere, index sums: {dict(sums)}")


if __name__ == "__main__":
    main()
