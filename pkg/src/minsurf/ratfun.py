"""Complex polynomials, rational functions and truncated power series.

Coefficients are stored as Python complex numbers (index = power). When every
coefficient is a small-denominator Gaussian rational, gcds, root
multiplicities and Laurent coefficients are computed exactly with
:class:`QI`; otherwise a numerical path is used (SVD rank threshold for
gcds, root clustering for multiplicities).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, NotInvertibleError

GCD_RTOL = 1e-10
ROOT_CLUSTER_TOL = 1e-8
_MAX_DENOM = 10**6


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QI:
    """Exact Gaussian rational ``re + i*im``."""

    re: Fraction
    im: Fraction = Fraction(0)

    @staticmethod
    def coerce(x) -> "QI":
        if isinstance(x, QI):
            return x
        if isinstance(x, (int, Fraction)):
            return QI(Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to QI exactly")

    def __add__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) + other
        o = QI.coerce(other)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) * other
        o = QI.coerce(other)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (complex, float)):
            return complex(self) / other
        o = QI.coerce(other)
        n2 = o.re * o.re + o.im * o.im
        if n2 == 0:
            raise ZeroDivisionError("QI division by zero")
        return QI((self.re * o.re + self.im * o.im) / n2,
                  (self.im * o.re - self.re * o.im) / n2)

    def __rtruediv__(self, other):
        return QI.coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, QI):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"QI({self.re}, {self.im})"


def _exact_real(x: float) -> Fraction | None:
    if not np.isfinite(x):
        return None
    r = Fraction(x).limit_denominator(_MAX_DENOM)
    return r if float(r) == x else None


def to_exact(c) -> QI | None:
    """Gaussian-rational value of ``c`` if it has one with small denominators."""
    if isinstance(c, QI):
        return c
    if isinstance(c, (int, Fraction)):
        return QI(Fraction(c))
    c = complex(c)
    re, im = _exact_real(c.real), _exact_real(c.imag)
    if re is None or im is None:
        return None
    return QI(re, im)


def _exact_list(coeffs) -> list[QI] | None:
    out = []
    for c in coeffs:
        q = to_exact(c)
        if q is None:
            return None
        out.append(q)
    return out


# ---------------------------------------------------------------------------
# Coefficient-list helpers (generic over complex / QI)
# ---------------------------------------------------------------------------

def _trim(c: list) -> list:
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return c


def _divmod_list(a: list, b: list) -> tuple[list, list]:
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    q = [0] * (len(a) - len(b) + 1)
    r = list(a)
    lead = b[-1]
    for k in range(len(q) - 1, -1, -1):
        coef = r[k + len(b) - 1] / lead
        q[k] = coef
        for j, bj in enumerate(b):
            r[k + j] = r[k + j] - coef * bj
        r[k + len(b) - 1] = 0 * coef  # exact zero of the right type
    return q, _trim(r[: len(b) - 1])


def _gcd_exact(a: list[QI], b: list[QI]) -> list[QI]:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _divmod_list(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


def _conv(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0 * a[0]] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out


def _taylor_shift(c: list, z0) -> list:
    """Coefficients of p(z0 + t) in powers of t (repeated synthetic division)."""
    c = list(c)
    n = len(c)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            c[k] = c[k] + z0 * c[k + 1]
    return c


def _series_div(a: list, b: list, n: int) -> list:
    """First ``n`` Taylor coefficients of a/b, requires b[0] != 0."""
    a = list(a) + [0] * max(0, n - len(a))
    b = list(b) + [0] * max(0, n - len(b))
    out = []
    for k in range(n):
        s = a[k]
        for j in range(1, k + 1):
            s = s - b[j] * out[k - j]
        out.append(s / b[0])
    return out


# ---------------------------------------------------------------------------
# ComplexPoly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexPoly:
    """Polynomial with complex coefficients, ``coeffs[k]`` multiplies z**k."""

    coeffs: tuple[complex, ...] = ()

    def __post_init__(self):
        c = [complex(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1.0) -> "ComplexPoly":
        c = [complex(lead)]
        for r in roots:
            c = _conv(c, [-complex(r), 1.0])
        return cls(tuple(c))

    @classmethod
    def monomial(cls, k: int, coeff: complex = 1.0) -> "ComplexPoly":
        return cls((0,) * k + (coeff,))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z):
        if not self.coeffs:
            return 0 * np.asarray(z, dtype=complex)
        out = np.full(np.shape(z), self.coeffs[-1], dtype=complex)
        for c in reversed(self.coeffs[:-1]):
            out = out * z + c
        return out[()] if np.ndim(out) == 0 else out

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return ComplexPoly(tuple((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0)
                                 for k in range(n)))

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return self + (-other)

    def __mul__(self, other) -> "ComplexPoly":
        if isinstance(other, Number):
            return ComplexPoly(tuple(c * other for c in self.coeffs))
        return ComplexPoly(tuple(_conv(list(self.coeffs), list(other.coeffs))))

    __rmul__ = __mul__

    def __divmod__(self, other: "ComplexPoly"):
        ea, eb = _exact_list(self.coeffs), _exact_list(other.coeffs)
        if ea is not None and eb is not None:
            q, r = _divmod_list(ea, eb)
            return ComplexPoly(tuple(map(complex, q))), ComplexPoly(tuple(map(complex, r)))
        q, r = _divmod_list(list(self.coeffs), list(other.coeffs))
        return ComplexPoly(tuple(q)), ComplexPoly(tuple(r))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def derivative(self) -> "ComplexPoly":
        return ComplexPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def shift(self, z0: complex) -> "ComplexPoly":
        """Coefficients of p(z0 + t) in t."""
        return ComplexPoly(tuple(_taylor_shift(list(self.coeffs), complex(z0))))

    def reversed(self, degree: int | None = None) -> "ComplexPoly":
        """``z**degree * p(1/z)``, default degree = deg p."""
        d = self.degree if degree is None else degree
        c = list(self.coeffs) + [0] * (d + 1 - len(self.coeffs))
        return ComplexPoly(tuple(reversed(c[: d + 1])))

    def roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(0, dtype=complex)
        return np.roots(self.coeffs[::-1]).astype(complex)

    def to_json(self) -> list[list[float]]:
        return [[c.real, c.imag] for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "ComplexPoly":
        out = []
        for item in data:
            if isinstance(item, (int, float)):
                out.append(complex(item))
            else:
                re, im = item
                out.append(complex(re, im))
        return cls(tuple(out))

    def __repr__(self):
        return f"ComplexPoly({list(self.coeffs)})"


ZERO = ComplexPoly(())
ONE = ComplexPoly((1.0,))


def poly_gcd(a: ComplexPoly, b: ComplexPoly) -> ComplexPoly:
    """Monic gcd; exact when both inputs are Gaussian-rational."""
    ea, eb = _exact_list(a.coeffs), _exact_list(b.coeffs)
    if ea is not None and eb is not None:
        if not ea and not eb:
            return ZERO
        return ComplexPoly(tuple(map(complex, _gcd_exact(ea, eb))))
    p1, q1 = _svd_cofactors(a, b)
    if p1 is None:
        return ONE
    g = a // p1
    return ComplexPoly(tuple(c / g.coeffs[-1] for c in g.coeffs))


def multiplicity(p: ComplexPoly, z0: complex) -> int:
    """Multiplicity of ``z0`` as a root of ``p``."""
    if p.is_zero():
        raise InvalidInputError("multiplicity of a root of the zero polynomial")
    z0 = complex(z0)
    if z0 == 0:
        m = 0
        while p.coeffs[m] == 0:
            m += 1
        return m
    ec, ez = _exact_list(p.coeffs), to_exact(z0)
    if ec is not None and ez is not None:
        m = 0
        c = ec
        while len(c) > 1:
            q, r = _divmod_list(c, [-ez, QI(Fraction(1))])
            if r:
                break
            m += 1
            c = q
        return m
    rad = ROOT_CLUSTER_TOL * max(1.0, abs(z0))
    return int(np.sum(np.abs(p.roots() - z0) <= rad))


def roots_with_multiplicity(p: ComplexPoly) -> list[tuple[complex, int]]:
    """Distinct roots of ``p`` with multiplicities.

    Exact inputs go through a square-free (Yun) decomposition so each factor
    has simple roots; otherwise companion-matrix roots are clustered.
    """
    if p.degree < 1:
        return []
    ec = _exact_list(p.coeffs)
    if ec is not None:
        out: list[tuple[complex, int]] = []
        f = _trim(ec)
        df = _trim([k * c for k, c in enumerate(f) if k])
        a = _gcd_exact(f, df)
        b, _ = _divmod_list(f, a)
        c, _ = _divmod_list(df, a)
        i = 1
        while len(_trim(b)) > 1:
            db = _trim([k * x for k, x in enumerate(b) if k])
            d = [x - y for x, y in _zip_pad(c, db)]
            a = _gcd_exact(b, d) if _trim(d) else b
            if len(a) > 1:
                for r in ComplexPoly(tuple(map(complex, a))).roots():
                    out.append((_snap_root(complex(r), a), i))
            b, _ = _divmod_list(b, a)
            c, _ = _divmod_list(d, a) if _trim(d) else ([], [])
            i += 1
        return sorted(out, key=lambda t: (t[0].real, t[0].imag))
    roots = list(p.roots())
    out = []
    used = [False] * len(roots)
    for i, r in enumerate(roots):
        if used[i]:
            continue
        cluster = [r]
        used[i] = True
        for j in range(i + 1, len(roots)):
            if not used[j] and abs(roots[j] - r) <= ROOT_CLUSTER_TOL * max(1.0, abs(r)):
                used[j] = True
                cluster.append(roots[j])
        out.append((complex(np.mean(cluster)), len(cluster)))
    return sorted(out, key=lambda t: (t[0].real, t[0].imag))


def _snap_root(r: complex, exact_poly: list[QI]) -> complex:
    """Replace a floating root by a nearby Gaussian rational that is an exact root."""
    for dmax in (10**2, 10**4, _MAX_DENOM):
        q = QI(Fraction(r.real).limit_denominator(dmax), Fraction(r.imag).limit_denominator(dmax))
        val = QI(Fraction(0))
        for c in reversed(exact_poly):
            val = val * q + c
        if not val:
            return complex(q)
    return r


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


def _svd_cofactors(a: ComplexPoly, b: ComplexPoly):
    """Numerical cofactors (a/g, b/g) from a Sylvester-type null space.

    Returns (None, None) when a and b are numerically coprime, i.e. the
    Sylvester matrix has no singular value below GCD_RTOL relative.
    """
    n, m = a.degree, b.degree
    if n < 1 or m < 1:
        return None, None
    sa = np.linalg.norm(a.coeffs)
    sb = np.linalg.norm(b.coeffs)
    an = np.array(a.coeffs) / sa
    bn = np.array(b.coeffs) / sb
    s = np.linalg.svd(_sylvester(an, bn, 1), compute_uv=False)
    d = int(np.sum(s <= GCD_RTOL * s[0]))
    if d == 0:
        return None, None
    # an*q1 - bn*p1 = 0, deg q1 = m-d, deg p1 = n-d
    _, _, vh = np.linalg.svd(_sylvester(an, bn, d))
    v = vh[-1].conj()
    q1 = v[: m - d + 1]
    p1 = -v[m - d + 1:]
    return ComplexPoly(tuple(p1 * sa)), ComplexPoly(tuple(q1 * sb))


def _sylvester(a: np.ndarray, b: np.ndarray, d: int) -> np.ndarray:
    """Columns [shifts of a (m-d+1) | shifts of b (n-d+1)]; d=1 is Sylvester."""
    n, m = len(a) - 1, len(b) - 1
    ca, cb = m - d + 1, n - d + 1
    mat = np.zeros((n + m - d + 1, ca + cb), dtype=complex)
    for j in range(ca):
        mat[j: j + n + 1, j] = a
    for j in range(cb):
        mat[j: j + m + 1, ca + j] = b
    return mat


# ---------------------------------------------------------------------------
# RationalFunction
# ---------------------------------------------------------------------------

class _PoleSignal:
    """Typed outcome of evaluating a rational function at a pole."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "POLE"


POLE = _PoleSignal()


@dataclass(frozen=True)
class RationalFunction:
    """Reduced quotient ``num/den`` with monic denominator.

    Build with :func:`rat_reduce` (or the helpers below); the constructor
    assumes its inputs are already reduced and monic.
    """

    num: ComplexPoly
    den: ComplexPoly = ONE

    # -- constructors --------------------------------------------------
    @classmethod
    def const(cls, c: complex) -> "RationalFunction":
        return cls(ComplexPoly((c,)), ONE)

    @classmethod
    def z(cls) -> "RationalFunction":
        return cls(ComplexPoly((0, 1)), ONE)

    @classmethod
    def poly(cls, coeffs: Sequence[complex]) -> "RationalFunction":
        return cls(ComplexPoly(tuple(coeffs)), ONE)

    @classmethod
    def monomial(cls, k: int, coeff: complex = 1.0) -> "RationalFunction":
        """``coeff * z**k`` for any integer k."""
        if coeff == 0:
            return cls(ZERO, ONE)
        if k >= 0:
            return cls(ComplexPoly.monomial(k, coeff), ONE)
        return cls(ComplexPoly((coeff,)), ComplexPoly.monomial(-k))

    @classmethod
    def laurent(cls, coeffs: dict[int, complex]) -> "RationalFunction":
        """Laurent polynomial from ``{power: coeff}``."""
        out = cls.const(0)
        for k, c in coeffs.items():
            out = out + cls.monomial(k, c)
        return out

    # -- algebra -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = _as_rf(other)
        return rat_reduce(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __mul__(self, other):
        other = _as_rf(other)
        return rat_reduce(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return rat_reduce(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rf(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction.const(1) / (self ** (-k))
        out = RationalFunction.const(1)
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "RationalFunction":
        return rat_derivative(self)

    def __call__(self, z):
        """Vectorised evaluation (numpy semantics at poles)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.num(z) / self.den(z)

    @property
    def degree(self) -> int:
        """Degree as a map of the Riemann sphere."""
        return max(self.num.degree, self.den.degree, 0)

    def poles(self) -> list[tuple[complex, int]]:
        return roots_with_multiplicity(self.den)

    def zeros(self) -> list[tuple[complex, int]]:
        return roots_with_multiplicity(self.num)

    def equals(self, other: "RationalFunction", tol: float = 1e-12) -> bool:
        a, b = self.num.coeffs, _as_rf(other).num.coeffs
        c, d = self.den.coeffs, _as_rf(other).den.coeffs
        if len(a) != len(b) or len(c) != len(d):
            return False
        return all(abs(x - y) <= tol for x, y in zip(a + c, b + d))

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunction":
        return rat_reduce(ComplexPoly.from_json(data["num"]), ComplexPoly.from_json(data["den"]))

    def __repr__(self):
        return f"RationalFunction(num={list(self.num.coeffs)}, den={list(self.den.coeffs)})"


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, ComplexPoly):
        return RationalFunction(x, ONE)
    if isinstance(x, Number):
        return RationalFunction.const(complex(x))
    raise TypeError(f"cannot convert {type(x).__name__} to RationalFunction")


def rat_reduce(num: ComplexPoly, den: ComplexPoly) -> RationalFunction:
    """Cancel common factors and make the denominator monic."""
    if den.is_zero():
        raise InvalidInputError("zero denominator")
    if num.is_zero():
        return RationalFunction(ZERO, ONE)
    en, ed = _exact_list(num.coeffs), _exact_list(den.coeffs)
    if en is not None and ed is not None:
        g = _gcd_exact(en, ed)
        p, _ = _divmod_list(en, g)
        q, _ = _divmod_list(ed, g)
        lead = q[-1]
        p = [c / lead for c in p]
        q = [c / lead for c in q]
        return RationalFunction(ComplexPoly(tuple(map(complex, p))),
                                ComplexPoly(tuple(map(complex, q))))
    p1, q1 = _svd_cofactors(num, den)
    if p1 is None:
        p1, q1 = num, den
    lead = q1.coeffs[-1]
    p = ComplexPoly(tuple(c / lead for c in p1.coeffs))
    q = ComplexPoly(tuple(c / lead for c in q1.coeffs))
    return RationalFunction(_chop(p), _chop(q))


def _chop(p: ComplexPoly, rtol: float = 1e-13) -> ComplexPoly:
    if p.is_zero():
        return p
    scale = max(abs(c) for c in p.coeffs)
    return ComplexPoly(tuple(c if abs(c) > rtol * scale else 0 for c in p.coeffs))


def rat_eval(f: RationalFunction, z: complex):
    """``f(z)``, or :data:`POLE` when z is a pole of f."""
    z = complex(z)
    d = complex(f.den(z))
    if d == 0 or (f.den.degree > 0 and multiplicity(f.den, z) > 0):
        return POLE
    return complex(f.num(z)) / d


def rat_derivative(f: RationalFunction) -> RationalFunction:
    num = f.num.derivative() * f.den - f.num * f.den.derivative()
    return rat_reduce(num, f.den * f.den)


def order_at(f: RationalFunction, z0: complex) -> int:
    """Zero order (>0) or minus the pole order (<0) of f at z0."""
    if f.is_zero():
        raise InvalidInputError("order of the zero function is undefined")
    return multiplicity(f.num, z0) - (multiplicity(f.den, z0) if f.den.degree > 0 else 0)


def laurent_coeffs(f: RationalFunction, z0: complex, upto: int) -> tuple[int, list]:
    """Laurent expansion of f at z0 through power ``upto``.

    Returns ``(v, c)`` where ``c[j]`` is the coefficient of (z-z0)**(v+j) and
    ``v = order_at(f, z0)``. Coefficients are exact (QI) when the data allow.
    """
    if f.is_zero():
        return 0, [0] * max(0, upto + 1)
    z0 = complex(z0)
    k = multiplicity(f.num, z0)
    m = multiplicity(f.den, z0) if f.den.degree > 0 else 0
    v = k - m
    n = upto - v + 1
    if n <= 0:
        return v, []
    en, ed, ez = _exact_list(f.num.coeffs), _exact_list(f.den.coeffs), to_exact(z0)
    if en is not None and ed is not None and ez is not None:
        a = _taylor_shift(en, ez)
        b = _taylor_shift(ed, ez)
    else:
        a = _taylor_shift(list(f.num.coeffs), z0)
        b = _taylor_shift(list(f.den.coeffs), z0)
    return v, _series_div(a[k:], b[m:], n)


def residue_at(f: RationalFunction, z0: complex) -> complex:
    """Coefficient of (z-z0)**-1 in the Laurent expansion of f at z0."""
    if f.is_zero():
        return 0j
    v, c = laurent_coeffs(f, z0, -1)
    if v >= 0 or not c:
        return 0j
    return complex(c[-1 - v])


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerSeries:
    """``sum coeffs[k] z**k + O(z**(order+1))``.

    Coefficients may be complex or exact :class:`QI`/int/Fraction; the
    arithmetic is written generically so exact inputs stay exact.
    """

    coeffs: tuple
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise InvalidInputError("truncation order must be >= 0")
        c = list(self.coeffs)[: self.order + 1]
        c += [0] * (self.order + 1 - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def exact(cls, coeffs: Sequence, order: int) -> "PowerSeries":
        """Series with coefficients converted to exact Gaussian rationals."""
        ex = _exact_list(coeffs)
        if ex is None:
            raise InvalidInputError("coefficients are not Gaussian-rational")
        return cls(tuple(ex), order)

    @classmethod
    def identity(cls, order: int) -> "PowerSeries":
        return cls((0, 1), order)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries(tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1)), n)

    def __neg__(self):
        return PowerSeries(tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return PowerSeries(tuple(c * other for c in self.coeffs), self.order)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            s = 0
            for j in range(k + 1):
                s = s + self.coeffs[j] * other.coeffs[k - j]
            out.append(s)
        return PowerSeries(tuple(out), n)

    __rmul__ = __mul__

    def reciprocal(self) -> "PowerSeries":
        if not self.coeffs[0]:
            raise NotInvertibleError("series with zero constant term has no reciprocal")
        return PowerSeries(tuple(_series_div([1], list(self.coeffs), self.order + 1)), self.order)

    def __truediv__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries(tuple(c / other for c in self.coeffs), self.order)
        return self * other.reciprocal()

    def __pow__(self, k: int) -> "PowerSeries":
        if k < 0:
            return self.reciprocal() ** (-k)
        out = PowerSeries((1,), self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self) -> "PowerSeries":
        if self.order == 0:
            return PowerSeries((0,), 0)
        return PowerSeries(tuple(k * self.coeffs[k] for k in range(1, self.order + 1)),
                           self.order - 1)

    def truncate(self, n: int) -> "PowerSeries":
        return PowerSeries(self.coeffs, min(n, self.order))

    def __call__(self, z):
        out = 0
        for c in reversed(self.coeffs):
            out = out * z + complex(c)
        return out

    def as_complex(self) -> list[complex]:
        return [complex(c) for c in self.coeffs]


def series_compose(outer: PowerSeries, inner: PowerSeries, N: int) -> PowerSeries:
    """``outer(inner(w))`` through w**N; inner must have zero constant term."""
    if inner.coeffs[0]:
        raise InvalidInputError("inner series must vanish at 0")
    n = min(N, outer.order, inner.order)
    inner = inner.truncate(n)
    out = PowerSeries((outer.coeffs[n],), n)
    for k in range(n - 1, -1, -1):
        out = out * inner
        out = PowerSeries((out.coeffs[0] + outer.coeffs[k],) + out.coeffs[1:], n)
    return out


def series_invert(s: PowerSeries, N: int) -> PowerSeries:
    """Compositional inverse via Lagrange inversion.

    ``[w^n] t = (1/n) [z^(n-1)] (z/s(z))^n``.
    """
    if s.coeffs[0]:
        raise NotInvertibleError("series must vanish at 0")
    if s.order < 1 or not s.coeffs[1]:
        raise NotInvertibleError("vanishing linear coefficient")
    n_max = min(N, s.order)
    # s(z)/z through order n_max-1
    q = PowerSeries(s.coeffs[1:], max(n_max - 1, 0))
    r = q.reciprocal()
    out = [0 * s.coeffs[1], r.coeffs[0]]
    rk = r
    for n in range(2, n_max + 1):
        rk = rk * r
        out.append(rk.coeffs[n - 1] / n)
    return PowerSeries(tuple(out), n_max)


def series_invert_substitution(s: PowerSeries, N: int) -> PowerSeries:
    """Compositional inverse by coefficient matching in s(t(w)) = w.

    Slower than :func:`series_invert`; kept as an independent route.
    """
    if s.coeffs[0]:
        raise NotInvertibleError("series must vanish at 0")
    if s.order < 1 or not s.coeffs[1]:
        raise NotInvertibleError("vanishing linear coefficient")
    n_max = min(N, s.order)
    s1 = s.coeffs[1]
    t = [0 * s1, 1 / s1]
    for n in range(2, n_max + 1):
        trial = PowerSeries(tuple(t) + (0,), n)
        comp = series_compose(s.truncate(n), trial, n)
        t.append(-comp.coeffs[n] / s1)
    return PowerSeries(tuple(t), n_max)


def rational_taylor(f: RationalFunction, order: int, exact: bool = True) -> tuple[int, PowerSeries]:
    """``f = z**v * S(z)`` at 0 with S a power series through ``order``."""
    v, c = laurent_coeffs(f, 0, order + order_at(f, 0) if not f.is_zero() else order)
    if not exact:
        c = [complex(x) for x in c]
    return v, PowerSeries(tuple(c), order)


def substitute_reciprocal(f: RationalFunction) -> RationalFunction:
    """``f(1/z)`` as a reduced rational function of z."""
    if f.is_zero():
        return f
    shift = f.den.degree - f.num.degree
    num, den = f.num.reversed(), f.den.reversed()
    if shift >= 0:
        num = num * ComplexPoly.monomial(shift)
    else:
        den = den * ComplexPoly.monomial(-shift)
    return rat_reduce(num, den)
