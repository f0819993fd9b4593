"""Boundary curvatures of catenoid circles rescaled onto the unit sphere.

Reports the spread of the normal curvature and the gap between the two
geodesic-curvature routes as the circle moves along the catenoid.

    python3 scripts/boundary_curvature_survey.py [--samples 512]
"""
import argparse

import numpy as np

from minsurf.catalog import make_catenoid
from minsurf.geometry import boundary_curvatures
from minsurf.ratfun import RationalFunction as RF
from minsurf.weierstrass import WeierstrassData, immerse


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=512)
    args = ap.parse_args()
    print(f"{'c':>6s} {'rho':>6s} {'kappa_g':>12s} {'max|kn-1|':>10s} {'route gap':>10s} {'max|beta|':>10s}")
    for c in (1.0, -2.0, 0.37):
        base = make_catenoid(c).wd
        for rho in (0.2, 0.5, 0.8, 1.0):
            R = float(np.linalg.norm(immerse(base, rho)))
            wd = WeierstrassData(base.g, base.h * RF.const(1 / R), base.domain, base.basepoint,
                                 tuple(np.asarray(base.base_position) / R))
            rep = boundary_curvatures(wd, rho, args.samples)
            kn, kg, ka = rep.column("kappa_n"), rep.column("kappa_g"), rep.column("kappa_g_alpha")
            print(f"{c:6.2f} {rho:6.2f} {kg.mean():12.8f} {np.max(np.abs(kn - 1)):10.1e} "
                  f"{np.max(np.abs(kg - ka)):10.1e} {np.max(np.abs(rep.column('beta'))):10.1e}")


if __name__ == "__main__":
    main()
