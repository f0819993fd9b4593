"""Named example surfaces, normalised so the Gauss map is 0 at the end."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidInputError
from .ratfun import ComplexPoly, RationalFunction as RF, rat_reduce
from .weierstrass import AnnulusDomain, WeierstrassData


@dataclass(frozen=True)
class PlaneChart:
    """Affine chart ``X(u, v) = offset * normal + u e1 + v e2``."""

    normal: tuple
    offset: float = 0.0

    is_plane = True

    @property
    def frame(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n = np.asarray(self.normal, dtype=float)
        helper = np.array([1.0, 0, 0]) if abs(n[0]) < 0.9 else np.array([0, 1.0, 0])
        e1 = np.cross(n, helper)
        e1 /= np.linalg.norm(e1)
        return n, e1, np.cross(n, e1)

    def point(self, u, v) -> np.ndarray:
        n, e1, e2 = self.frame
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        return self.offset * n + u[..., None] * e1 + v[..., None] * e2


@dataclass
class CatalogEntry:
    name: str
    wd: Optional[WeierstrassData]
    expected: dict = field(default_factory=dict)
    plane: Optional[PlaneChart] = None
    loops: dict = field(default_factory=dict)

    @property
    def surface(self):
        return self.plane if self.wd is None else self.wd


def _real_param(c, what: str) -> float:
    c = complex(c)
    if c.imag != 0 or c.real == 0:
        raise InvalidInputError(f"{what} must be real and nonzero")
    return c.real


def make_catenoid(c: float = 1.0, domain: Optional[AnnulusDomain] = None) -> CatalogEntry:
    """``g = z, dh = c dz / z`` on the punctured unit disk, axis = x3-axis.

    With this basepoint choice the circle |z| = r maps to the horizontal circle
    of radius |c| cosh(log r) at height c log r.
    """
    c = _real_param(c, "catenoid parameter c")
    domain = domain or AnnulusDomain.punctured_disk(1.0)
    s0 = math.log(domain.r_outer)
    wd = WeierstrassData(RF.z(), RF.monomial(-1, c), domain,
                         base_position=(-c * math.cosh(s0), 0.0, c * s0))
    r_loop = 0.5 * domain.r_outer
    return CatalogEntry(
        f"catenoid:{c:g}", wd,
        expected={
            "end_kind": "Catenoidal", "multiplicity": 1,
            "flux": {"neck": [0.0, 0.0, 2 * math.pi * c]},
            "flux_generator": [0.0, 0.0, 2 * math.pi * c],
            "hopf": {"-2": c}, "umbilics": 0, "f_constant": c,
            "total_curvature_complete": -4 * math.pi,
            "total_curvature": {"region": [0.02, 50.0], "value": -4 * math.pi},
        },
        loops={"neck": {"circle": {"r": r_loop}}},
    )


def critical_waist() -> float:
    """Root of ``s tanh s = 1``: where the catenoid normal is orthogonal to X."""
    return brentq(lambda s: s * math.tanh(s) - 1.0, 0.5, 2.0, xtol=1e-16, rtol=1e-15)


def make_critical_catenoid() -> CatalogEntry:
    """Exterior part of the catenoid meeting the unit sphere at a right angle."""
    s = critical_waist()
    c = 1.0 / math.hypot(math.cosh(s), s)
    rho = math.exp(-s)
    entry = make_catenoid(c, AnnulusDomain.punctured_disk(rho))
    entry.name = "critical-catenoid"
    entry.expected["contact_angle"] = math.pi / 2
    entry.expected["sphere"] = {"center": [0.0, 0.0, 0.0], "radius": 1.0}
    return entry


def make_enneper(k: int = 1, domain: Optional[AnnulusDomain] = None) -> CatalogEntry:
    """``g = z^k, dh = z^k dz``; the end sits at z = infinity."""
    if k < 1:
        raise InvalidInputError("Enneper order k must be >= 1")
    wd = WeierstrassData(RF.monomial(k), RF.monomial(k), domain or AnnulusDomain.disk(1.0))
    return CatalogEntry(
        f"enneper:{k}", wd,
        expected={
            "end_kind": "EnneperType", "end_at": "infinity", "multiplicity": 2 * k + 1,
            "hopf_pole_at_end": k + 3, "flux": {"inner": [0.0, 0.0, 0.0], "outer": [0.0, 0.0, 0.0]},
            "flux_generator": [0.0, 0.0, 0.0],
            "total_curvature_complete": -4 * math.pi * k,
            "total_curvature": {"region": [0.0, 50.0], "value": -4 * math.pi * k},
        },
        loops={"inner": {"circle": {"r": 0.5}}, "outer": {"circle": {"r": 0.9}}},
    )


def make_perturbed_enneper(k: int, P: Sequence[complex] | ComplexPoly = (),
                           domain: Optional[AnnulusDomain] = None) -> CatalogEntry:
    """``g = z^k + P(z), dh = g dz`` with deg P <= k - 1 and P(0) = 0."""
    if k < 1:
        raise InvalidInputError("Enneper order k must be >= 1")
    P = P if isinstance(P, ComplexPoly) else ComplexPoly(tuple(P))
    if P.degree > k - 1:
        raise InvalidInputError(f"perturbation degree {P.degree} exceeds k - 1 = {k - 1}")
    if not P.is_zero() and P.coeffs[0] != 0:
        raise InvalidInputError("perturbation must vanish at 0 (keeps g(0) = 0)")
    g = rat_reduce(ComplexPoly.monomial(k) + P, ComplexPoly((1,)))
    entry = make_enneper(k, domain)
    wd = WeierstrassData(g, g, entry.wd.domain)
    name = f"perturbed:{k}:" + ",".join(map(_fmt_coeff, P.coeffs)) if not P.is_zero() else f"enneper:{k}"
    return CatalogEntry(name, wd, dict(entry.expected), loops=entry.loops)


def _fmt_coeff(c) -> str:
    c = complex(c)
    return f"{c.real:g}" if c.imag == 0 else str(c).strip("()")


def enneper_pair_data(R: float) -> tuple[RF, RF]:
    a = 1.0 / (R**2 + R**-2)
    g = rat_reduce(ComplexPoly((0, -R**2, 0, 1)), ComplexPoly((-1, 0, R**2)))
    h = RF.laurent({-1: 1.0, 1: -a, -3: -a})
    return g, h


def make_enneper_pair(R: float = 2.0, domain: Optional[AnnulusDomain] = None) -> CatalogEntry:
    """Two Enneper ends joined by a catenoidal neck (defined on C minus 0)."""
    if not R > 1:
        raise InvalidInputError("neck parameter R must exceed 1")
    g, h = enneper_pair_data(R)
    domain = domain or AnnulusDomain(0.6 / R, 1.6 * R)
    return CatalogEntry(
        f"enneper-pair:{R:g}", WeierstrassData(g, h, domain, basepoint=1.0),
        expected={"flux": {"neck": [0.0, 0.0, 2 * math.pi]},
                  "flux_generator": [0.0, 0.0, 2 * math.pi]},
        loops={"neck": {"circle": {"r": 1.0}}},
    )


def make_plane(orientation: Sequence[float] = (0.0, 0.0, 1.0), offset: float = 0.0) -> CatalogEntry:
    n = np.asarray(orientation, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0 or not np.isfinite(norm):
        raise InvalidInputError("plane orientation must be a nonzero vector")
    if abs(norm - 1) > 1e-12:
        raise InvalidInputError("plane orientation must be a unit vector")
    return CatalogEntry("plane", None, expected={"totally_umbilic": True},
                        plane=PlaneChart(tuple(n), float(offset)))


def broken_period_data() -> WeierstrassData:
    """``g = z, dh = i dz / z``: violates Re oint dh = 0 (real period -2 pi)."""
    return WeierstrassData(RF.z(), RF.monomial(-1, 1j), AnnulusDomain.punctured_disk(1.0))


CATALOG_NAMES = ("catenoid", "critical-catenoid", "enneper:k", "perturbed:k:<coeffs>",
                 "enneper-pair:R", "plane", "broken-period")


def lookup(name: str) -> CatalogEntry:
    """Entry for a CLI-style name such as ``enneper:2`` or ``perturbed:2:0,0.5``."""
    head, _, rest = name.partition(":")
    try:
        if head == "catenoid":
            return make_catenoid(float(rest) if rest else 1.0)
        if head == "critical-catenoid" and not rest:
            return make_critical_catenoid()
        if head == "enneper":
            return make_enneper(int(rest) if rest else 1)
        if head == "perturbed":
            k, _, coeffs = rest.partition(":")
            P = [complex(c.replace(" ", "")) for c in coeffs.split(",")] if coeffs else []
            return make_perturbed_enneper(int(k), P)
        if head == "enneper-pair":
            return make_enneper_pair(float(rest) if rest else 2.0)
        if head == "plane" and not rest:
            return make_plane()
        if head == "broken-period" and not rest:
            wd = broken_period_data()
            return CatalogEntry("broken-period", wd, loops={"neck": {"circle": {"r": 0.5}}})
    except ValueError as exc:
        raise KeyError(f"bad catalog parameters in {name!r}: {exc}") from exc
    raise KeyError(f"unknown catalog surface {name!r}")
