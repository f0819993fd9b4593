"""Flux, contact angles against spheres, boundary curvatures, curvature lines."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    GeometryMismatchError, InvalidInputError, StepSizeError,
)
from .hopf import f_function, hopf_differential
from .paths import PathSpec, nodes
from .weierstrass import WeierstrassData, conformal_factor, immerse_grid, period_vector

FLUX_SAMPLES = 2048
BOUNDARY_SAMPLES = 512
SPHERE_TOL = 1e-6
UMBILIC_TOL = 1e-10


def normals(wd: WeierstrassData, z) -> np.ndarray:
    """Unit normals at an array of points, shape (..., 3)."""
    z = np.asarray(z, dtype=complex)
    g = wd.g(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = wd.inv_g(z)
    small = np.abs(g) <= 1
    # |g| > 1: rewrite in terms of w = 1/g to avoid overflow near poles of g
    a = np.where(small, np.abs(g) ** 2, np.abs(w) ** 2)
    n1 = np.where(small, 2 * g.real, 2 * w.real)
    n2 = np.where(small, 2 * g.imag, -2 * w.imag)
    n3 = np.where(small, a - 1, 1 - a)
    return np.stack([n1, n2, n3], axis=-1) / (a + 1)[..., None]


# ---------------------------------------------------------------------------
# Flux
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FluxVector:
    """Flux through ``loop``; ``value`` is Im of the period, ``conormal`` the oracle."""

    value: np.ndarray
    loop: PathSpec
    method: str
    conormal: np.ndarray

    @property
    def agreement(self) -> float:
        return float(np.max(np.abs(self.value - self.conormal)))


def conormal_flux(wd: WeierstrassData, loop: PathSpec, n: int = FLUX_SAMPLES) -> np.ndarray:
    """``sum nu |X_t| dt`` with ``nu = T x N``; ``X_t dt = Re(phi z'(t)) dt``."""
    z, w = nodes(loop, n)
    dX = np.real(np.asarray(wd.phi_values(z)) * w).T
    return np.cross(dX, normals(wd, z)).sum(axis=0)


def flux(wd: WeierstrassData, loop: PathSpec, n_samples: int = FLUX_SAMPLES) -> FluxVector:
    """Flux vector along a closed loop.

    The conormal is ``nu = T x N``: with the loop run counter-clockwise around
    the catenoid puncture this gives ``+2 pi c e3``, i.e. Im of 2 pi i Res.
    """
    if not loop.closed:
        raise InvalidInputError("flux needs a closed loop")
    primary = np.imag(period_vector(wd, loop))
    return FluxVector(primary, loop, "period-imaginary-part", conormal_flux(wd, loop, n_samples))


# ---------------------------------------------------------------------------
# Boundary circles
# ---------------------------------------------------------------------------

def _thetas(n: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n) / n


def boundary_positions(wd: WeierstrassData, radius: float, thetas: np.ndarray) -> np.ndarray:
    """Image of ``radius * exp(i theta)``, shape (n, 3)."""
    return immerse_grid(wd, np.array([radius]), thetas)[0]


@dataclass
class ContactAngleReport:
    samples: list                    # (theta, angle)
    mean: float
    max_deviation: float
    sphere_center: tuple
    sphere_radius: float
    convention: str = "normal"
    sphere_residual: float = 0.0     # max | |X - c| - R |

    @property
    def angles(self) -> np.ndarray:
        return np.array([a for _, a in self.samples])


def _plane_boundary(plane, center: np.ndarray, radius: float, thetas: np.ndarray):
    n, e1, e2 = plane.frame
    delta = float(n @ center) - plane.offset
    if abs(delta) >= radius:
        raise GeometryMismatchError("plane does not cut the sphere in a circle")
    foot = center - delta * n
    rho = math.sqrt(radius**2 - delta**2)
    X = foot + rho * (np.cos(thetas)[:, None] * e1 + np.sin(thetas)[:, None] * e2)
    return X, np.broadcast_to(n, X.shape)


def contact_angle_profile(surface, boundary_radius: Optional[float],
                          sphere_center: Sequence[float] = (0.0, 0.0, 0.0),
                          sphere_radius: float = 1.0, n_samples: int = BOUNDARY_SAMPLES,
                          convention: str = "normal") -> ContactAngleReport:
    """Angle between the surface normal and the outward sphere normal.

    ``convention="supplement"`` reports pi minus that angle. For a plane chart
    the boundary is the plane-sphere circle and ``boundary_radius`` is ignored.
    """
    if convention not in ("normal", "supplement"):
        raise InvalidInputError(f"unknown angle convention {convention!r}")
    if not sphere_radius > 0:
        raise InvalidInputError("sphere radius must be positive")
    c = np.asarray(sphere_center, dtype=float)
    th = _thetas(n_samples)
    if getattr(surface, "is_plane", False):
        X, N = _plane_boundary(surface, c, sphere_radius, th)
    else:
        X = boundary_positions(surface, boundary_radius, th)
        N = normals(surface, boundary_radius * np.exp(1j * th))
    resid = float(np.max(np.abs(np.linalg.norm(X - c, axis=1) - sphere_radius)))
    if resid > SPHERE_TOL:
        raise GeometryMismatchError(f"boundary is {resid:.3g} off the sphere")
    u = (X - c) / np.linalg.norm(X - c, axis=1)[:, None]
    # atan2 keeps full precision near 0 and pi, where arccos does not
    ang = np.arctan2(np.linalg.norm(np.cross(N, u), axis=1), np.einsum("ij,ij->i", N, u))
    if convention == "supplement":
        ang = np.pi - ang
    mean = float(ang.mean())
    return ContactAngleReport([(float(t), float(a)) for t, a in zip(th, ang)], mean,
                              float(np.max(np.abs(ang - mean))), tuple(map(float, c)),
                              float(sphere_radius), convention, resid)


@dataclass(frozen=True)
class BoundaryCurvatureSample:
    theta: float
    kappa_g: float          # Frenet route: <gamma'', N> / |gamma'|^2
    kappa_g_alpha: float    # alpha / (rho^2 Lambda^2)
    kappa_g_sphere: float   # geodesic curvature inside the sphere
    kappa_n: float          # normal curvature of the curve as a curve on the sphere
    alpha: float
    beta: float
    Lambda: float


@dataclass
class BoundaryCurvatureReport:
    samples: list
    boundary_radius: float
    sphere_center: tuple
    sphere_radius: float
    sphere_residual: float

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples])

    CSV_HEADER = ("theta", "kappa_g", "kappa_g_alpha", "kappa_g_sphere", "kappa_n",
                  "alpha", "beta", "Lambda")

    def to_rows(self) -> list[tuple]:
        return [tuple(getattr(s, k) for k in self.CSV_HEADER) for s in self.samples]


_FD_OFFSETS = np.array([-2, -1, 1, 2])


def _arc_increments(wd: WeierstrassData, rho: float, th: np.ndarray, d: np.ndarray,
                    order: int = 24) -> np.ndarray:
    """``X(rho e^{i(th + d)}) - X(rho e^{i th})`` for each theta and offset."""
    x, w = np.polynomial.legendre.leggauss(order)
    x, w = 0.5 * (x + 1), 0.5 * w
    tt = th[:, None, None] + d[None, :, None] * x[None, None, :]
    zz = rho * np.exp(1j * tt)
    dz = 1j * zz * d[None, :, None]
    vals = np.asarray(wd.phi_values(zz))                 # (3, n, k, order)
    return np.real(np.einsum("cnko,nko,o->nkc", vals, dz, w))


def boundary_curvatures(wd: WeierstrassData, boundary_radius: float,
                        n_samples: int = BOUNDARY_SAMPLES,
                        sphere_center: Sequence[float] = (0.0, 0.0, 0.0),
                        sphere_radius: float = 1.0, fd_step: float = 2e-3) -> BoundaryCurvatureReport:
    """Curvatures of the image of ``|z| = boundary_radius``.

    Route (a) uses ``f = z^2 Phi = alpha + i beta``: along the circle
    ``z = rho e^{i theta}`` one has ``b(gamma', gamma') = alpha``, and
    ``|gamma'|^2 = rho^2 Lambda^2``. Route (b) differentiates the immersed
    curve with a 5-point stencil (increments integrated exactly by
    Gauss-Legendre, so only the O(h^4) truncation remains).
    """
    rho = float(boundary_radius)
    th = _thetas(n_samples)
    z = rho * np.exp(1j * th)
    c = np.asarray(sphere_center, dtype=float)

    f = f_function(hopf_differential(wd)).f(z)
    alpha, beta = f.real, f.imag
    lam = conformal_factor(wd, z)
    k_alpha = alpha / (rho**2 * lam**2)

    X = boundary_positions(wd, rho, th)
    dX = _arc_increments(wd, rho, th, fd_step * _FD_OFFSETS)   # offsets -2, -1, 1, 2
    m2, m1, p1, p2 = (dX[:, k] for k in range(4))
    h = fd_step
    d1 = (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h)
    d2 = (-m2 + 16 * m1 + 16 * p1 - p2) / (12 * h * h)
    speed2 = np.einsum("ij,ij->i", d1, d1)
    T = d1 / np.sqrt(speed2)[:, None]
    kvec = (d2 - np.einsum("ij,ij->i", d2, T)[:, None] * T) / speed2[:, None]
    N = normals(wd, z)
    k_frenet = np.einsum("ij,ij->i", kvec, N)
    nu_out = (X - c) / sphere_radius
    k_n = -np.einsum("ij,ij->i", kvec, nu_out)
    k_sphere = np.einsum("ij,ij->i", kvec, np.cross(nu_out, T))
    resid = float(np.max(np.abs(np.linalg.norm(X - c, axis=1) - sphere_radius)))

    samples = [BoundaryCurvatureSample(*map(float, row)) for row in
               zip(th, k_frenet, k_alpha, k_sphere, k_n, alpha, beta, lam)]
    return BoundaryCurvatureReport(samples, rho, tuple(map(float, c)), float(sphere_radius), resid)


# ---------------------------------------------------------------------------
# Lines of curvature
# ---------------------------------------------------------------------------

BRANCHES = ("principal-1", "principal-2")


@dataclass
class CurvatureTrace:
    points: np.ndarray          # complex parameter-plane polyline
    tangents: np.ndarray        # unit parameter-plane direction at each point but the last
    branch: str
    arclength: float
    stop_reason: str            # arclength | boundary | umbilic

    CSV_HEADER = ("s", "re", "im")


def _direction(Phi, z: complex, branch: str) -> complex:
    """Unit tangent of the line field ``Im(Phi dz^2) = 0`` (up to sign)."""
    v = complex(Phi(z))
    if abs(v) < UMBILIC_TOL:
        return 0j
    d = 1 / np.sqrt(v)
    if branch == "principal-2":
        d *= 1j
    return d / abs(d)


def _align(d: complex, ref: complex) -> complex:
    dot = (d * ref.conjugate()).real
    if abs(dot) < 0.5:
        raise StepSizeError("line field turned by more than 60 degrees in one step; reduce the step")
    return d if dot > 0 else -d


def trace_line_of_curvature(wd: WeierstrassData, z0: complex, branch: str = "principal-1",
                            arclength: float = 1.0, step: float = 1e-3) -> CurvatureTrace:
    """RK4 integration of a curvature line in the parameter plane.

    ``principal-1`` follows ``1/sqrt(Phi)``, ``principal-2`` follows
    ``i/sqrt(Phi)``. The square root branch is chosen at each stage by
    continuity with the previous direction.
    """
    if branch not in BRANCHES:
        raise InvalidInputError(f"branch must be one of {BRANCHES}")
    if not (step > 0 and arclength > 0):
        raise InvalidInputError("step and arclength must be positive")
    Phi = hopf_differential(wd).Phi
    if Phi.is_zero():
        raise InvalidInputError("Phi vanishes identically: every direction is principal")
    z = complex(z0)
    dom = wd.domain
    if not dom.contains(z):
        raise InvalidInputError(f"start point {z} is not in the open domain")
    prev = _direction(Phi, z, branch)
    if prev == 0:
        raise InvalidInputError(f"start point {z} is an umbilic")

    def field_at(p: complex, ref: complex) -> complex:
        d = _direction(Phi, p, branch)
        if d == 0:
            raise _Umbilic
        return _align(d, ref)

    pts, tans = [z], []
    s = 0.0
    reason = "arclength"
    while s < arclength - 1e-15:
        h = min(step, arclength - s)
        try:
            k1 = field_at(z, prev)
            k2 = field_at(z + 0.5 * h * k1, k1)
            k3 = field_at(z + 0.5 * h * k2, k1)
            k4 = field_at(z + h * k3, k1)
        except _Umbilic:
            reason = "umbilic"
            break
        z_new = z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not dom.contains(z_new, closed=True):
            reason = "boundary"
            break
        tans.append(k1)
        z, prev, s = z_new, k1, s + h
        pts.append(z)
    return CurvatureTrace(np.array(pts), np.array(tans), branch, s, reason)


class _Umbilic(Exception):
    pass
