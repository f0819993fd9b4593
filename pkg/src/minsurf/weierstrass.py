"""Weierstrass data on annular domains and the geometry it generates.

Conventions
-----------
* ``X = base_position + Re int_{basepoint}^{z} (phi1, phi2, phi3) dz`` with
  ``phi = (1/2 (1/g - g), i/2 (1/g + g), 1) h`` and ``dh = h dz``.
* Unit normal ``N = (2 Re g, 2 Im g, |g|^2 - 1) / (|g|^2 + 1)``, so g = 0 is
  the south pole. With this orientation and ``L = -<N_u, X_u>`` the second
  fundamental form is ``b(v, v) = -Re(Phi dz(v)^2)`` with
  ``Phi = (g'/g) h``; hence ``L = -Re Phi``, ``M = Im Phi``, ``N = Re Phi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import (
    IntegrationError, InvalidInputError, NormalizationError, NotInvertibleError,
    SingularPointError,
)
from .paths import PathSpec, Segment, Arc, contour_integral
from .ratfun import (
    POLE, PowerSeries, RationalFunction, order_at, rat_eval, rational_taylor,
    residue_at, series_compose, series_invert, substitute_reciprocal,
)

PERIOD_TOL = 1e-10
QUAD_EPSABS = 1e-11


@dataclass(frozen=True)
class AnnulusDomain:
    """``r_inner < |z| < r_outer`` (a disk when r_inner = 0)."""

    r_inner: float = 0.0
    r_outer: float = 1.0
    puncture_at_zero: bool = False
    boundary_circle: Optional[float] = None

    def __post_init__(self):
        if not (0 <= self.r_inner < self.r_outer):
            raise InvalidInputError("need 0 <= r_inner < r_outer")
        if self.puncture_at_zero and self.r_inner != 0:
            raise InvalidInputError("a punctured domain must have r_inner = 0")

    @classmethod
    def punctured_disk(cls, r: float = 1.0, boundary: Optional[float] = None) -> "AnnulusDomain":
        return cls(0.0, r, True, r if boundary is None else boundary)

    @classmethod
    def disk(cls, r: float = 1.0) -> "AnnulusDomain":
        return cls(0.0, r, False, None)

    @property
    def multiply_connected(self) -> bool:
        return self.puncture_at_zero or self.r_inner > 0

    def contains(self, z, closed: bool = False):
        r = np.abs(z)
        if closed:
            inner = (r > 0) if self.puncture_at_zero else (r >= self.r_inner)
            return inner & (r <= self.r_outer)
        inner = (r > 0) if self.puncture_at_zero else (r > self.r_inner) | ((self.r_inner == 0) & (r == 0))
        return inner & (r < self.r_outer)

    def to_json(self) -> dict:
        out = {"r_inner": self.r_inner, "r_outer": self.r_outer, "puncture": self.puncture_at_zero}
        if self.boundary_circle is not None:
            out["boundary"] = self.boundary_circle
        return out

    @classmethod
    def from_json(cls, d: dict) -> "AnnulusDomain":
        return cls(float(d.get("r_inner", 0.0)), float(d.get("r_outer", 1.0)),
                   bool(d.get("puncture", False)),
                   None if d.get("boundary") is None else float(d["boundary"]))


@dataclass(frozen=True)
class WeierstrassData:
    """Gauss map ``g`` and height form ``dh = h dz`` on ``domain``."""

    g: RationalFunction
    h: RationalFunction
    domain: AnnulusDomain = field(default_factory=AnnulusDomain)
    basepoint: Optional[complex] = None
    base_position: tuple = (0.0, 0.0, 0.0)

    @property
    def p0(self) -> complex:
        return complex(self.domain.r_outer if self.basepoint is None else self.basepoint)

    @cached_property
    def phi(self) -> tuple[RationalFunction, RationalFunction, RationalFunction]:
        g, h = self.g, self.h
        one = RationalFunction.const(1)
        return ((one - g * g) * h / (2 * g), (one + g * g) * h * (0.5j) / g, h)

    @cached_property
    def gh(self) -> RationalFunction:
        return self.g * self.h

    @cached_property
    def h_over_g(self) -> RationalFunction:
        return self.h / self.g

    @cached_property
    def inv_g(self) -> RationalFunction:
        return RationalFunction.const(1) / self.g

    @cached_property
    def hopf(self) -> RationalFunction:
        """``Phi = (g'/g) h``."""
        return self.g.derivative() / self.g * self.h

    def phi_values(self, z) -> np.ndarray:
        return np.array([f(z) for f in self.phi])

    def to_json(self) -> dict:
        out = {"g": self.g.to_json(), "h": self.h.to_json(), "domain": self.domain.to_json(),
               "basepoint": [self.p0.real, self.p0.imag]}
        if any(self.base_position):
            out["base_position"] = list(map(float, self.base_position))
        return out

    @classmethod
    def from_json(cls, d: dict) -> "WeierstrassData":
        bp = d.get("basepoint")
        return cls(RationalFunction.from_json(d["g"]), RationalFunction.from_json(d["h"]),
                   AnnulusDomain.from_json(d.get("domain", {})),
                   None if bp is None else complex(*bp),
                   tuple(map(float, d.get("base_position", (0.0, 0.0, 0.0)))))


# ---------------------------------------------------------------------------
# Immersion
# ---------------------------------------------------------------------------

def default_path(wd: WeierstrassData, base: complex, target: complex) -> PathSpec:
    """Arc on |z| = |base| to arg(target), then radially to target."""
    base, target = complex(base), complex(target)
    if base == target:
        return PathSpec((Segment(base, target),))
    r0 = abs(base)
    pieces = []
    if r0 > 0 and target != 0:
        t0 = math.atan2(base.imag, base.real)
        dt = math.remainder(math.atan2(target.imag, target.real) - t0, 2 * math.pi)
        if dt:
            pieces.append(Arc(0j, r0, t0, t0 + dt))
        mid = r0 * np.exp(1j * (t0 + dt))
    else:
        mid = base
    if abs(mid - target) > 0:
        pieces.append(Segment(complex(mid), target))
    if not pieces:
        pieces.append(Segment(base, target))
    return PathSpec(tuple(pieces))


def immerse(wd: WeierstrassData, target: complex, base: Optional[complex] = None,
            path: Optional[PathSpec] = None, epsabs: float = QUAD_EPSABS) -> np.ndarray:
    """Position ``X(target)`` by adaptive quadrature of the Weierstrass integrand.

    ``base`` defaults to the data's basepoint, where X equals ``base_position``.
    """
    base = wd.p0 if base is None else complex(base)
    target = complex(target)
    origin = np.asarray(wd.base_position, dtype=float)
    if base == target and path is None:
        return origin.copy()
    path = default_path(wd, base, target) if path is None else path
    if abs(path.start - base) > 1e-12 * max(1, abs(base)) or abs(path.end - target) > 1e-12 * max(1, abs(target)):
        raise InvalidInputError("path endpoints do not match base/target")
    val = contour_integral(wd.phi_values, path, epsabs=epsabs)
    return origin + np.real(val)


def immerse_grid(wd: WeierstrassData, radii: np.ndarray, thetas: np.ndarray,
                 order: int = 24) -> np.ndarray:
    """Positions on a polar grid, shape (len(radii), len(thetas), 3).

    Integrates piece by piece: along the circle ``|z| = radii[0]`` starting at
    the basepoint's ray, then along each ray. Each short piece uses an
    ``order``-point Gauss-Legendre rule, so the whole grid costs a few numpy
    passes instead of one adaptive quadrature per vertex.
    """
    radii = np.asarray(radii, dtype=float)
    thetas = np.asarray(thetas, dtype=float)
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = 0.5 * (x + 1), 0.5 * w
    r0 = radii[0]
    start = immerse(wd, r0 * np.exp(1j * thetas[0]))
    # along the first circle, parametrised by theta
    ta, tb = thetas[:-1], thetas[1:]
    tt = ta[:, None] + (tb - ta)[:, None] * x[None, :]
    zz = r0 * np.exp(1j * tt)
    dz = 1j * zz * (tb - ta)[:, None]
    incr = np.real(np.einsum("kij,ij,j->ik", wd.phi_values(zz), dz, w))
    ring = np.vstack([start, start + np.cumsum(incr, axis=0)])
    # along rays, parametrised by log r
    sa, sb = np.log(radii[:-1]), np.log(radii[1:])
    ss = sa[:, None] + (sb - sa)[:, None] * x[None, :]
    out = np.empty((len(radii), len(thetas), 3))
    out[0] = ring
    for j, th in enumerate(thetas):
        zz = np.exp(ss + 1j * th)
        dz = zz * (sb - sa)[:, None]
        incr = np.real(np.einsum("kij,ij,j->ik", wd.phi_values(zz), dz, w))
        out[1:, j] = ring[j] + np.cumsum(incr, axis=0)
    if not np.all(np.isfinite(out)):
        raise IntegrationError("non-finite values while integrating the grid")
    return out


# ---------------------------------------------------------------------------
# Pointwise geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceJet:
    z: complex
    X: Optional[np.ndarray]
    Xu: np.ndarray
    Xv: np.ndarray
    N: np.ndarray
    Lambda: float
    L: float
    M: float
    Nc: float
    K: float
    Phi: complex
    kappa1: float
    kappa2: float
    H_mean: float


def gauss_normal(wd: WeierstrassData, z: complex) -> np.ndarray:
    gz = rat_eval(wd.g, z)
    if gz is not POLE and abs(gz) <= 1:
        a = abs(gz) ** 2
        return np.array([2 * gz.real, 2 * gz.imag, a - 1]) / (a + 1)
    w = rat_eval(wd.inv_g, z)
    a = abs(w) ** 2
    return np.array([2 * w.real, -2 * w.imag, 1 - a]) / (1 + a)


def conformal_factor(wd: WeierstrassData, z) -> float:
    """``1/2 (|g| + 1/|g|) |h|`` evaluated as ``1/2 (|g h| + |h/g|)``."""
    return 0.5 * (np.abs(wd.gh(z)) + np.abs(wd.h_over_g(z)))


def jet(wd: WeierstrassData, z: complex, with_position: bool = True) -> SurfaceJet:
    z = complex(z)
    if wd.domain.puncture_at_zero and z == 0:
        raise SingularPointError("z = 0 is the puncture")
    vals = []
    for f in (*wd.phi, wd.gh, wd.h_over_g, wd.hopf):
        v = rat_eval(f, z)
        if v is POLE:
            raise SingularPointError(f"Weierstrass data not regular at z = {z}")
        vals.append(v)
    p1, p2, p3, gh, hg, Phi = vals
    phi = np.array([p1, p2, p3])
    lam = 0.5 * (abs(gh) + abs(hg))
    if not lam > 0:
        raise SingularPointError(f"metric degenerates at z = {z}")
    Xu, Xv = phi.real, -phi.imag
    N = gauss_normal(wd, z)
    # south-pole orientation: b = -Re(Phi dz^2)
    L, M, Nc = -Phi.real, Phi.imag, Phi.real
    lam2 = lam * lam
    mean = (L + Nc) / (2 * lam2)
    disc = math.hypot(L - Nc, 2 * M) / (2 * lam2)
    k1, k2 = mean + disc, mean - disc
    # K = -(4|dg/g| / ((|g| + 1/|g|)^2 |dh|))^2 = -(|Phi| / Lambda^2)^2
    K = -(abs(Phi) / lam2) ** 2
    X = immerse(wd, z) if with_position else None
    return SurfaceJet(z, X, Xu, Xv, N, lam, L, M, Nc, K, Phi, k1, k2, mean)


# ---------------------------------------------------------------------------
# Periods and validation
# ---------------------------------------------------------------------------

def period_vector(wd: WeierstrassData, loop: PathSpec, epsabs: float = 1e-12) -> np.ndarray:
    """``oint phi dz`` (complex 3-vector)."""
    if not loop.closed:
        raise InvalidInputError("period_vector needs a closed loop")
    return np.asarray(contour_integral(wd.phi_values, loop, epsabs=epsabs))


@dataclass
class LoopPeriodCheck:
    loop: PathSpec
    gauss_mismatch: complex     # conj(oint g dh) - oint dh/g
    real_period: float          # Re oint dh
    passed: bool


@dataclass
class ValidationReport:
    regular: bool
    regularity_issues: list
    loops: list
    passed: bool


def _critical_points(wd: WeierstrassData) -> list[complex]:
    pts = []
    for f in (wd.g, wd.h):
        for poly in (f.num, f.den):
            pts.extend(r for r in poly.roots())
    out = []
    for p in pts:
        if all(abs(p - q) > 1e-9 for q in out):
            out.append(complex(p))
    return out


def generator_loops(wd: WeierstrassData) -> list[PathSpec]:
    """Circle generating H_1 of the domain, kept away from critical points."""
    d = wd.domain
    if not d.multiply_connected:
        return []
    lo = d.r_inner if d.r_inner > 0 else 0.0
    r = 0.5 * d.r_outer if lo == 0 else math.sqrt(lo * d.r_outer)
    radii = [abs(p) for p in _critical_points(wd) if abs(p) > 0]
    span = d.r_outer - lo
    for k in range(50):
        if all(abs(r - q) > 0.02 * span for q in radii):
            break
        r = lo + span * (0.5 + 0.37 * ((k * 0.618) % 1.0 - 0.5))
    return [PathSpec.circle(r)]


def validate(wd: WeierstrassData, loops: Optional[list] = None, tol: float = PERIOD_TOL) -> ValidationReport:
    """Regularity of (g, dh) on the open domain and period conditions on loops."""
    issues = []
    for p in _critical_points(wd):
        if not wd.domain.contains(p):
            continue
        if wd.domain.puncture_at_zero and p == 0:
            continue
        og = order_at(wd.g, p) if not wd.g.is_zero() else 0
        oh = order_at(wd.h, p)
        if oh != abs(og):
            issues.append({"at": p, "order_g": og, "order_h": oh})
    rng = np.random.default_rng(0)
    d = wd.domain
    r = np.sqrt(rng.uniform(max(d.r_inner, 1e-3 * d.r_outer) ** 2, d.r_outer**2, 64))
    zs = r * np.exp(2j * np.pi * rng.uniform(size=64))
    lam = conformal_factor(wd, zs)
    bad = ~(np.isfinite(lam) & (lam > 0))
    for z in zs[bad]:
        issues.append({"at": complex(z), "lambda": float(conformal_factor(wd, z))})
    loops = generator_loops(wd) if loops is None else loops
    checks = []
    for loop in loops:
        vals = contour_integral(lambda z: np.array([wd.gh(z), wd.h_over_g(z), wd.h(z)]), loop, epsabs=1e-13)
        mismatch = complex(np.conj(vals[0]) - vals[1])
        real_period = float(vals[2].real)
        checks.append(LoopPeriodCheck(loop, mismatch, real_period,
                                      abs(mismatch) < tol and abs(real_period) < tol))
    regular = not issues
    return ValidationReport(regular, issues, checks, regular and all(c.passed for c in checks))


# ---------------------------------------------------------------------------
# Total curvature
# ---------------------------------------------------------------------------

@dataclass
class TotalCurvature:
    value: float
    coarse: float
    fine: float
    exact_complete: float   # -4 pi deg(g), the value for the complete surface
    n_r: int
    n_theta: int


def _curvature_grid(wd: WeierstrassData, s0: float, s1: float, n_r: int, n_theta: int) -> float:
    hs = (s1 - s0) / n_r
    s = s0 + hs * (np.arange(n_r) + 0.5)
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    z = np.exp(s[:, None] + 1j * th[None, :])
    lam = conformal_factor(wd, z)
    Phi = wd.hopf(z)
    # K Lambda^2 |z|^2 ds dtheta = -|Phi|^2 / Lambda^2 |z|^2 ds dtheta
    dens = -(np.abs(Phi) ** 2) / lam**2 * np.abs(z) ** 2
    if not np.all(np.isfinite(dens)):
        raise IntegrationError("curvature density not finite on the grid (pole in region?)")
    return float(dens.sum() * hs * 2 * np.pi / n_theta)


def total_curvature(wd: WeierstrassData, region: Optional[AnnulusDomain] = None,
                    n_r: int = 256, n_theta: int = 256) -> TotalCurvature:
    """``int int K dA`` over an annulus on a (log r, theta) grid.

    Midpoint rule in log r at n and n/2 points, Richardson-extrapolated;
    the trapezoid rule in theta is spectrally accurate. A disk (r_inner = 0)
    is cut at 1e-6 r_outer, whose neighbourhood contributes only its tiny
    spherical image.
    """
    region = wd.domain if region is None else region
    r0 = region.r_inner if region.r_inner > 0 else 1e-6 * region.r_outer
    s0, s1 = math.log(r0), math.log(region.r_outer)
    fine = _curvature_grid(wd, s0, s1, n_r, n_theta)
    coarse = _curvature_grid(wd, s0, s1, n_r // 2, n_theta)
    value = (4 * fine - coarse) / 3
    return TotalCurvature(value, coarse, fine, -4 * math.pi * wd.g.degree, n_r, n_theta)


# ---------------------------------------------------------------------------
# Ends
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EndClassification:
    kind: str                   # Planar | Catenoidal | EnneperType | Other
    gauss_zero_order: int
    height_pole_order: int      # pole order of dh/g
    multiplicity: int


def end_chart(wd: WeierstrassData, at: str) -> tuple[RationalFunction, RationalFunction]:
    """(g, h) in a chart centred at the end, normalised so that g(0) = 0.

    ``at="puncture"`` uses z itself and requires g(0) = 0. ``at="infinity"``
    uses zeta = 1/z (dh = -h(1/zeta) dzeta / zeta^2) and, if the limit normal
    there is the north pole, rotates by pi about the x1-axis: (g, h) -> (1/g, -h).
    """
    g, h = wd.g, wd.h
    if at == "puncture":
        if order_at(g, 0) < 1:
            raise NormalizationError("g(0) must be 0 at the puncture; rotate the data first")
        return g, h
    if at != "infinity":
        raise InvalidInputError(f"unknown end location {at!r}")
    g2 = substitute_reciprocal(g)
    h2 = -substitute_reciprocal(h) * RationalFunction.monomial(-2)
    og = order_at(g2, 0)
    if og < 0:
        g2, h2 = RationalFunction.const(1) / g2, -h2
        og = -og
    if og < 1:
        raise NormalizationError("Gauss map at the end is neither 0 nor infinity")
    return g2, h2


def classify_end(wd: WeierstrassData, at: Optional[str] = None) -> EndClassification:
    """Classify the end from the zero order n of g and pole order p of dh/g.

    Catenoidal: n = 1, p = 2. Planar: n > 1, p = 2. Enneper type: p = 2n + 2
    (multiplicity 2n + 1, Hopf pole order n + 3). Multiplicity is p - 1.
    """
    if at is None:
        at = "puncture" if wd.domain.puncture_at_zero else "infinity"
    g, h = end_chart(wd, at)
    n = order_at(g, 0)
    p = -order_at(h / g, 0)
    if p == 2:
        kind = "Catenoidal" if n == 1 else "Planar"
    elif p == 2 * n + 2:
        kind = "EnneperType"
    else:
        kind = "Other"
    return EndClassification(kind, n, p, p - 1)


@dataclass
class LaurentSeries:
    valuation: int
    coeffs: list        # coeffs[j] multiplies w**(valuation + j)

    def coeff(self, k: int):
        j = k - self.valuation
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def as_dict(self) -> dict[int, complex]:
        return {self.valuation + j: complex(c) for j, c in enumerate(self.coeffs)}


@dataclass
class GaussChart:
    """Data in the coordinate w = g(z): Gauss map w, dh/g = sum d_k w^k dw."""

    inverse: PowerSeries            # z = inverse(w)
    gauss_series: PowerSeries       # g(z) through the same order
    height_over_gauss: LaurentSeries
    roundtrip_residual: list        # coefficients of g(inverse(w)) - w

    @property
    def gauss(self) -> PowerSeries:
        return PowerSeries.identity(self.inverse.order)


def reparametrize_by_gauss(wd: WeierstrassData, N: int = 12) -> GaussChart:
    """Re-express the end at z = 0 in the conformal coordinate w = g(z)."""
    if wd.g.is_zero() or order_at(wd.g, 0) != 1:
        raise NotInvertibleError("g must have a simple zero at 0")
    F = wd.h / wd.g
    p = -order_at(F, 0)
    M = N + max(p, 0) + 1
    _, S = rational_taylor(wd.g, M)                   # g = z S(z)
    gser = PowerSeries((0,) + S.coeffs[:M], M)
    t = series_invert(gser, M)                        # z = t(w)
    vF, A = rational_taylor(F, M)                     # F = z^vF A(z)
    T = PowerSeries(t.coeffs[1:], M - 1)              # t = w T(w)
    A = A.truncate(M - 1)
    AoT = series_compose(A, t.truncate(M - 1), M - 1)
    Sw = (T ** vF) * AoT * t.derivative().truncate(M - 1)
    n_keep = N - vF + 1
    d = list(Sw.coeffs[:n_keep])
    comp = series_compose(gser, t, M)
    resid = [comp.coeffs[k] - (1 if k == 1 else 0) for k in range(M + 1)]
    return GaussChart(t, gser, LaurentSeries(vF, d), resid)
