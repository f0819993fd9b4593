"""Total curvature against grid size, with and without Richardson extrapolation.

For g = z^d on an annulus a < |z| < b the exact value is minus the spherical
area of the Gauss image, -4 pi d (b^2d/(1+b^2d) - a^2d/(1+a^2d)); the
"trunc" columns measure the quadrature error against it, the "complete"
column the distance to the complete surface.

    python3 scripts/total_curvature_convergence.py [--grids 32 64 128 256]
"""
import argparse
import math
import time

from minsurf.catalog import make_enneper
from minsurf.ratfun import RationalFunction as RF
from minsurf.weierstrass import AnnulusDomain, WeierstrassData, total_curvature

CASES = {
    "enneper (disk 50)": (make_enneper(1, AnnulusDomain.disk(50.0)).wd, 1, 0.0, 50.0),
    "catenoid [0.02, 50]": (WeierstrassData(RF.z(), RF.monomial(-1), AnnulusDomain(0.02, 50.0)), 1, 0.02, 50.0),
    "g = z^2 (disk 50)": (make_enneper(2, AnnulusDomain.disk(50.0)).wd, 2, 0.0, 50.0),
}


def truncated_exact(d, a, b):
    def cap(r):
        return r ** (2 * d) / (1 + r ** (2 * d))
    return -4 * math.pi * d * (cap(b) - cap(a))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grids", type=int, nargs="+", default=[32, 64, 128, 256])
    args = ap.parse_args()
    print(f"{'surface':22s} {'n':>5s} {'trunc fine':>11s} {'trunc extrap':>13s} {'complete':>9s} {'time s':>7s}")
    for name, (wd, d, a, b) in CASES.items():
        exact, complete = truncated_exact(d, a, b), -4 * math.pi * d
        for n in args.grids:
            t0 = time.perf_counter()
            tc = total_curvature(wd, n_r=n, n_theta=n)
            dt = time.perf_counter() - t0
            print(f"{name:22s} {n:5d} {abs(tc.fine / exact - 1):11.2e} {abs(tc.value / exact - 1):13.2e} "
                  f"{abs(tc.value / complete - 1):9.2e} {dt:7.2f}")


if __name__ == "__main__":
    main()
