"""Hopf differential, umbilics, rotation indices and index audits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import InvalidInputError, TotallyUmbilicError, UndersamplingError
from .paths import PathSpec
from .ratfun import (
    RationalFunction, order_at, rat_reduce, roots_with_multiplicity,
    substitute_reciprocal,
)
from .weierstrass import AnnulusDomain, WeierstrassData, jet

SNAP_TOL = 0.01
WINDING_SAMPLES = 4096


@dataclass(frozen=True)
class HopfDifferential:
    """``Phi dz^2`` with Phi rational; ``source`` is the generating surface, if any."""

    Phi: RationalFunction
    source: object = None

    @property
    def totally_umbilic(self) -> bool:
        return self.Phi.is_zero()

    @property
    def region(self) -> Optional[AnnulusDomain]:
        return getattr(self.source, "domain", None)


@dataclass(frozen=True)
class UmbilicPoint:
    location: complex
    order: int
    rotation_index: Fraction


@dataclass(frozen=True)
class HopfFFunction:
    f: RationalFunction

    def alpha(self, z):
        return np.real(self.f(z))

    def beta(self, z):
        return np.imag(self.f(z))

    def decay_exponent(self) -> int:
        """``e`` with ``|f(z)|^2 ~ |z|^e`` at the puncture (twice the order of f at 0).

        An embedded end with Gauss zero order n has e = 2n - 2: f is bounded
        at a catenoidal end and vanishes at a planar one, so alpha and beta
        extend across the puncture.
        """
        if self.f.is_zero():
            raise TotallyUmbilicError("f vanishes identically")
        return 2 * order_at(self.f, 0)


def hopf_differential(surface) -> HopfDifferential:
    """``Phi = (g'/g) h`` for Weierstrass data; ``Phi = 0`` for a plane chart."""
    if isinstance(surface, WeierstrassData):
        return HopfDifferential(surface.hopf, surface)
    if getattr(surface, "is_plane", False):
        return HopfDifferential(RationalFunction.const(0), surface)
    raise InvalidInputError(f"no Hopf differential for {type(surface).__name__}")


def hopf_jet_mismatch(hd: HopfDifferential, n: int = 20, seed: int = 0) -> float:
    """Max |(Nc - L)/2 + iM - Phi| over random points, using jets of the source.

    The jet entries come from evaluating g, g', h separately, so this checks
    the reduced rational Phi against the pointwise second fundamental form.
    """
    wd = hd.source
    d = wd.domain
    rng = np.random.default_rng(seed)
    lo = max(d.r_inner, 0.05 * d.r_outer)
    worst = 0.0
    for _ in range(n):
        z = rng.uniform(lo, 0.95 * d.r_outer) * np.exp(2j * np.pi * rng.uniform())
        gz, dgz, hz = wd.g(z), wd.g.derivative()(z), wd.h(z)
        phi_pt = dgz / gz * hz
        L, M, Nc = -phi_pt.real, phi_pt.imag, phi_pt.real
        worst = max(worst, abs((Nc - L) / 2 + 1j * M - hd.Phi(z)))
    return worst


def f_function(hd: HopfDifferential) -> HopfFFunction:
    """``f(z) = z^2 Phi(z) = alpha + i beta``."""
    return HopfFFunction(hd.Phi * RationalFunction.monomial(2))


def find_umbilics(hd: HopfDifferential, region: Optional[AnnulusDomain] = None) -> list[UmbilicPoint]:
    """Zeros of Phi strictly inside ``region`` (default: the source's domain)."""
    if hd.totally_umbilic:
        raise TotallyUmbilicError("Phi vanishes identically")
    region = region or hd.region
    out = []
    for z, m in roots_with_multiplicity(hd.Phi.num):
        if region is None or region.contains(z):
            out.append(UmbilicPoint(z, m, Fraction(-m, 2)))
    return out


def rotation_index_exact(hd: HopfDifferential, z0: complex) -> Fraction:
    """``-order_at(Phi, z0) / 2``: zeros give negative, poles positive index."""
    if hd.totally_umbilic:
        raise TotallyUmbilicError("Phi vanishes identically")
    return Fraction(-order_at(hd.Phi, z0), 2)


@dataclass(frozen=True)
class WindingIndex:
    index: Fraction
    raw: float
    snap_distance: float


def rotation_index_winding(hd: HopfDifferential, loop: PathSpec,
                           n_samples: int = WINDING_SAMPLES) -> WindingIndex:
    """``-(1/4 pi)`` times the continuous change of arg Phi around ``loop``."""
    if hd.totally_umbilic:
        raise TotallyUmbilicError("Phi vanishes identically")
    if not loop.closed:
        raise InvalidInputError("winding number needs a closed loop")
    per_piece = max(2, n_samples // len(loop.pieces))
    z = loop.sample(per_piece)
    vals = hd.Phi(z)
    if np.any(vals == 0) or not np.all(np.isfinite(vals)):
        raise InvalidInputError("loop passes through a zero or pole of Phi")
    ang = np.angle(np.append(vals, vals[0]))
    steps = np.angle(np.exp(1j * np.diff(ang)))
    # wrapped steps near pi leave the unwrap direction ambiguous
    if np.max(np.abs(steps)) > math.pi / 2:
        raise UndersamplingError("phase of Phi jumps by more than pi/2 between samples")
    raw = -float(steps.sum()) / (4 * math.pi)
    snapped = Fraction(round(2 * raw), 2)
    dist = abs(raw - float(snapped))
    if dist >= SNAP_TOL:
        raise UndersamplingError(f"winding residual {dist:.3g} exceeds {SNAP_TOL}")
    return WindingIndex(snapped, raw, dist)


def invert_chart(hd: HopfDifferential) -> HopfDifferential:
    """``Phi~(zeta) = Phi(1/zeta) zeta^-4`` (quadratic differential under z = 1/zeta)."""
    if hd.totally_umbilic:
        return hd
    return HopfDifferential(substitute_reciprocal(hd.Phi) * RationalFunction.monomial(-4), hd.source)


# ---------------------------------------------------------------------------
# Index audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Closed:
    genus: int = 0


CAPILLARY_DISK = "capillary-disk"
PUNCTURED_CAPILLARY_DISK = "punctured-capillary-disk"

Topology = Union[Closed, str]


@dataclass
class IndexAudit:
    entries: list               # dicts: at ([re, im] | "puncture" | "infinity"), order, index
    index_sum: Fraction
    expected: Fraction
    status: str                 # pass | fail | indeterminate
    boundary_umbilics: list = field(default_factory=list)
    beta_max: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def deficit(self) -> Fraction:
        """What the unlisted singularities would have to contribute."""
        return self.expected - self.index_sum

    def to_json(self) -> dict:
        def q(x: Fraction):
            return int(x) if x.denominator == 1 else float(x)

        return {
            "entries": [{"at": e["at"], "order": e["order"], "index": q(e["index"])} for e in self.entries],
            "sum": q(self.index_sum),
            "expected": q(self.expected),
            "pass": self.passed,
            "status": self.status,
            "boundary_umbilics": [[z.real, z.imag] for z in self.boundary_umbilics],
        }


def index_audit(hd: HopfDifferential, topology: Topology, region: Optional[AnnulusDomain] = None,
                check_boundary: bool = True, beta_tol: float = 1e-8,
                n_boundary: int = 512) -> IndexAudit:
    """Sum rotation indices of the Hopf line fields and compare with chi.

    ``Closed(genus)``: Phi is taken on the Riemann sphere (genus 0 only for
    rational data), including the point at infinity via :func:`invert_chart`;
    expected 2 - 2 genus. Capillary disks: interior zeros in ``region`` plus
    the pole at the puncture; expected 1. Zeros of Phi on the boundary circle
    make the audit indeterminate, since boundary indices are not classified
    here.
    """
    if hd.totally_umbilic:
        raise TotallyUmbilicError("Phi vanishes identically")
    entries = []
    if isinstance(topology, Closed):
        if topology.genus != 0:
            raise InvalidInputError("rational Phi lives on the sphere: genus must be 0")
        pts = roots_with_multiplicity(hd.Phi.num) + [(z, -m) for z, m in roots_with_multiplicity(hd.Phi.den)]
        for z, m in sorted(pts, key=lambda t: (t[0].real, t[0].imag)):
            entries.append({"at": [z.real, z.imag], "order": m, "index": Fraction(-m, 2)})
        m_inf = order_at(invert_chart(hd).Phi, 0)
        if m_inf:
            entries.append({"at": "infinity", "order": m_inf, "index": Fraction(-m_inf, 2)})
        total = sum((e["index"] for e in entries), Fraction(0))
        expected = Fraction(2 - 2 * topology.genus)
        return IndexAudit(entries, total, expected, "pass" if total == expected else "fail")

    if topology not in (CAPILLARY_DISK, PUNCTURED_CAPILLARY_DISK):
        raise InvalidInputError(f"unknown topology {topology!r}")
    region = region or hd.region
    if region is None:
        raise InvalidInputError("capillary audit needs a region")
    rb = region.boundary_circle or region.r_outer
    for u in find_umbilics(hd, AnnulusDomain(0.0, rb, topology == PUNCTURED_CAPILLARY_DISK)):
        entries.append({"at": [u.location.real, u.location.imag], "order": u.order,
                        "index": u.rotation_index})
    if topology == PUNCTURED_CAPILLARY_DISK:
        m0 = order_at(hd.Phi, 0)
        entries.append({"at": "puncture", "order": m0, "index": Fraction(-m0, 2)})
    boundary_zeros = [z for z, _ in roots_with_multiplicity(hd.Phi.num)
                      if abs(abs(z) - rb) <= 1e-9 * max(1.0, rb)]
    th = 2 * np.pi * np.arange(n_boundary) / n_boundary
    beta = f_function(hd).beta(rb * np.exp(1j * th))
    beta_max = float(np.max(np.abs(beta)))
    if check_boundary and beta_max > beta_tol:
        raise InvalidInputError(
            f"boundary is not a line of curvature (max |beta| = {beta_max:.3g})")
    total = sum((e["index"] for e in entries), Fraction(0))
    expected = Fraction(1)
    if boundary_zeros:
        status = "indeterminate"
    else:
        status = "pass" if total == expected else "fail"
    return IndexAudit(entries, total, expected, status, boundary_zeros, beta_max)
