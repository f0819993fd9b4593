"""Wavefront OBJ export on a (log r, theta) grid."""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .catalog import PlaneChart
from .errors import InvalidInputError, MeshingError
from .geometry import normals
from .weierstrass import WeierstrassData, immerse_grid

INNER_CUTOFF = 1e-3


def grid_radii(wd: WeierstrassData, n_r: int, r_min: Optional[float] = None,
               r_max: Optional[float] = None) -> np.ndarray:
    """Log-spaced radii; a puncture or disk centre is cut at ``1e-3 r_outer``."""
    d = wd.domain
    lo = r_min if r_min is not None else (d.r_inner if d.r_inner > 0 else INNER_CUTOFF * d.r_outer)
    hi = r_max if r_max is not None else d.r_outer
    return np.exp(np.linspace(math.log(lo), math.log(hi), n_r))


def _phi_poles(wd: WeierstrassData) -> list[complex]:
    out = []
    for f in wd.phi:
        for p, _ in f.poles():
            if all(abs(p - q) > 1e-9 for q in out):
                out.append(complex(p))
    return out


def mesh_grid(surface, n_r: int, n_theta: int, r_min: Optional[float] = None,
              r_max: Optional[float] = None) -> tuple[np.ndarray, np.ndarray]:
    """Vertices and unit normals, each of shape (n_r * n_theta, 3), ring-major."""
    if n_r < 2 or n_theta < 3:
        raise InvalidInputError("need n_r >= 2 and n_theta >= 3")
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    if isinstance(surface, PlaneChart):
        r = np.exp(np.linspace(math.log(r_min or INNER_CUTOFF), math.log(r_max or 1.0), n_r))
        u, v = r[:, None] * np.cos(th), r[:, None] * np.sin(th)
        V = surface.point(u, v).reshape(-1, 3)
        return V, np.broadcast_to(np.asarray(surface.normal, float), V.shape).copy()
    wd = surface
    radii = grid_radii(wd, n_r, r_min, r_max)
    # phi is integrated along the first ring and then along each ray: neither may hit a pole
    rays = np.exp(1j * th)
    for p in _phi_poles(wd):
        rp = abs(p)
        on_ring = abs(rp - radii[0]) < 1e-9 * max(1.0, rp)
        on_ray = rp > 0 and radii[0] <= rp <= radii[-1] and np.min(np.abs(rays - p / rp)) < 1e-9
        if on_ring or on_ray:
            raise MeshingError(f"grid passes through the singular point z = {p:.6g}")
    X = immerse_grid(wd, radii, th)
    if not np.all(np.isfinite(X)):
        raise MeshingError("non-finite vertex positions")
    z = radii[:, None] * np.exp(1j * th)[None, :]
    N = normals(wd, z)
    return X.reshape(-1, 3), N.reshape(-1, 3)


def export_mesh(surface, n_r: int, n_theta: int, r_min: Optional[float] = None,
                r_max: Optional[float] = None) -> str:
    """OBJ text with ``n_r * n_theta`` vertices, vertex normals and quad faces.

    The theta seam is closed by index: the last column of quads refers back
    to the first column of vertices instead of duplicating it.
    """
    V, N = mesh_grid(surface, n_r, n_theta, r_min, r_max)
    lines = [f"# minsurf mesh {n_r} x {n_theta}"]
    lines += [f"v {x:.15g} {y:.15g} {z:.15g}" for x, y, z in V]
    lines += [f"vn {x:.15g} {y:.15g} {z:.15g}" for x, y, z in N]
    for i in range(n_r - 1):
        for j in range(n_theta):
            a = i * n_theta + j + 1
            b = i * n_theta + (j + 1) % n_theta + 1
            c, d = b + n_theta, a + n_theta
            lines.append(f"f {a}//{a} {b}//{b} {c}//{c} {d}//{d}")
    return "\n".join(lines) + "\n"


def parse_obj(text: str) -> tuple[np.ndarray, np.ndarray, list[list[int]]]:
    """Minimal reader for v / vn / f records (used to check exports)."""
    V, N, F = [], [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            V.append([float(x) for x in parts[1:4]])
        elif parts[0] == "vn":
            N.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            F.append([int(p.split("/")[0]) for p in parts[1:]])
        else:
            raise ValueError(f"unexpected OBJ record {parts[0]!r}")
    return np.array(V), np.array(N), F
