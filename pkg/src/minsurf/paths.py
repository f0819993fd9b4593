"""Paths in the parameter plane: circles, arcs, polylines, sampled curves."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad_vec

from .errors import IntegrationError, InvalidInputError

CLOSE_TOL = 1e-12


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, t):
        return self.center + self.radius * np.exp(1j * (self.theta0 + (self.theta1 - self.theta0) * t))

    def deriv(self, t):
        dth = self.theta1 - self.theta0
        return 1j * dth * self.radius * np.exp(1j * (self.theta0 + dth * t))

    @property
    def start(self) -> complex:
        return complex(self.point(0.0))

    @property
    def end(self) -> complex:
        return complex(self.point(1.0))

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.theta1, self.theta0)

    def is_full_circle(self) -> bool:
        return abs(abs(self.theta1 - self.theta0) - 2 * np.pi) < 1e-14


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def point(self, t):
        return self.a + (self.b - self.a) * t

    def deriv(self, t):
        return (self.b - self.a) * np.ones_like(np.asarray(t, dtype=float))

    @property
    def start(self) -> complex:
        return complex(self.a)

    @property
    def end(self) -> complex:
        return complex(self.b)

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def is_full_circle(self) -> bool:
        return False


@dataclass(frozen=True)
class PathSpec:
    """Piecewise-smooth path made of arcs and straight segments."""

    pieces: tuple
    kind: str = "polyline"

    def __post_init__(self):
        if not self.pieces:
            raise InvalidInputError("empty path")
        for a, b in zip(self.pieces[:-1], self.pieces[1:]):
            if abs(a.end - b.start) > 1e-9 * max(1.0, abs(a.end)):
                raise InvalidInputError("path pieces are not contiguous")

    @classmethod
    def circle(cls, radius: float, center: complex = 0j, orientation: int = 1) -> "PathSpec":
        if radius <= 0:
            raise InvalidInputError("circle radius must be positive")
        if orientation not in (1, -1):
            raise InvalidInputError("orientation must be +1 or -1")
        return cls((Arc(complex(center), float(radius), 0.0, orientation * 2 * np.pi),), "circle")

    @classmethod
    def arc(cls, radius: float, theta0: float, theta1: float, center: complex = 0j) -> "PathSpec":
        if radius <= 0:
            raise InvalidInputError("arc radius must be positive")
        return cls((Arc(complex(center), float(radius), float(theta0), float(theta1)),), "circle")

    @classmethod
    def polyline(cls, points: Sequence[complex]) -> "PathSpec":
        pts = [complex(p) for p in points]
        if len(pts) < 2:
            raise InvalidInputError("polyline needs at least two points")
        return cls(tuple(Segment(a, b) for a, b in zip(pts[:-1], pts[1:])), "polyline")

    @classmethod
    def parametric(cls, samples: Sequence[complex]) -> "PathSpec":
        """Piecewise-linear path through dense samples of a curve."""
        p = cls.polyline(samples)
        return cls(p.pieces, "parametric")

    @property
    def start(self) -> complex:
        return self.pieces[0].start

    @property
    def end(self) -> complex:
        return self.pieces[-1].end

    @property
    def closed(self) -> bool:
        return abs(self.end - self.start) <= CLOSE_TOL * max(1.0, abs(self.start))

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(p.reversed() for p in reversed(self.pieces)), self.kind)

    def __add__(self, other: "PathSpec") -> "PathSpec":
        return PathSpec(self.pieces + other.pieces, "composite")

    def sample(self, n: int) -> np.ndarray:
        """Points spread along the path, ``n`` per piece, last endpoint excluded."""
        t = np.arange(n) / n
        return np.concatenate([p.point(t) for p in self.pieces])

    def to_json(self) -> dict:
        if self.kind == "circle" and len(self.pieces) == 1 and self.pieces[0].is_full_circle():
            a = self.pieces[0]
            out = {"r": a.radius}
            if a.center:
                out["center"] = [a.center.real, a.center.imag]
            if a.theta1 < a.theta0:
                out["orientation"] = -1
            return {"circle": out}
        pts = [self.start] + [p.end for p in self.pieces]
        return {"polyline": [[z.real, z.imag] for z in pts]}

    @classmethod
    def from_json(cls, data: dict) -> "PathSpec":
        if "circle" in data:
            c = data["circle"]
            center = c.get("center", [0.0, 0.0])
            return cls.circle(float(c["r"]), complex(*center), int(c.get("orientation", 1)))
        if "polyline" in data:
            return cls.polyline([complex(*p) for p in data["polyline"]])
        raise InvalidInputError("loop must be {'circle': ...} or {'polyline': ...}")


def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1), 0.5 * w


def nodes(path: PathSpec, n: int = 2048) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes and complex weights with sum(w * f(z)) ~ int f dz.

    Full circles use the trapezoid rule (spectral for analytic integrands);
    other pieces use ``n``-point Gauss-Legendre.
    """
    zs, ws = [], []
    for p in path.pieces:
        if p.is_full_circle():
            t = np.arange(n) / n
            zs.append(p.point(t))
            ws.append(p.deriv(t) / n)
        else:
            t, w = _gauss_legendre(min(n, 256))
            zs.append(p.point(t))
            ws.append(p.deriv(t) * w)
    return np.concatenate(zs), np.concatenate(ws)


def contour_integral(f: Callable[[np.ndarray], np.ndarray], path: PathSpec,
                     epsabs: float = 1e-12, max_points: int = 2**17) -> np.ndarray:
    """Adaptive integral of a (vector-valued) holomorphic ``f`` along ``path``.

    ``f`` maps an array of shape (m,) to shape (k, m) or (m,). Full circles
    double the trapezoid count until successive values agree to ``epsabs``;
    other pieces use scipy's adaptive Gauss-Kronrod (``quad_vec``).
    """
    total = None
    for p in path.pieces:
        if p.is_full_circle():
            val = _trapezoid_adaptive(f, p, epsabs, max_points)
        else:
            val = _quad_piece(f, p, epsabs)
        total = val if total is None else total + val
    return total


def _trapezoid_adaptive(f, arc: Arc, epsabs: float, max_points: int):
    n = 128
    prev = None
    while n <= max_points:
        t = np.arange(n) / n
        vals = np.asarray(f(arc.point(t))) * arc.deriv(t)
        cur = vals.mean(axis=-1)
        if not np.all(np.isfinite(cur)):
            raise IntegrationError("non-finite integrand on circle (pole on the path?)")
        if prev is not None and np.max(np.abs(cur - prev)) <= epsabs:
            return cur
        prev = cur
        n *= 2
    raise IntegrationError("trapezoid rule did not converge on circle")


def _quad_piece(f, piece, epsabs):
    def integrand(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.asarray(f(np.atleast_1d(piece.point(t))))[..., 0] * piece.deriv(t)
        v = np.atleast_1d(v)
        return np.concatenate([v.real, v.imag])

    res, err = quad_vec(integrand, 0.0, 1.0, epsabs=epsabs, epsrel=1e-13, limit=2000)
    if not np.all(np.isfinite(res)):
        raise IntegrationError("non-finite integral (pole on the path?)")
    k = res.size // 2
    out = res[:k] + 1j * res[k:]
    return out if k > 1 else out[0]
