import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minsurf.catalog import make_catenoid, make_enneper, make_enneper_pair, make_perturbed_enneper
from minsurf.errors import (
    IntegrationError, InvalidInputError, NormalizationError, NotInvertibleError, SingularPointError,
)
from minsurf.paths import PathSpec
from minsurf.ratfun import QI, ComplexPoly as P, RationalFunction as RF, rat_reduce
from minsurf.weierstrass import (
    AnnulusDomain, WeierstrassData, classify_end, immerse, immerse_grid, jet,
    period_vector, reparametrize_by_gauss, total_curvature, validate,
)

CAT = WeierstrassData(RF.z(), RF.monomial(-1), AnnulusDomain.punctured_disk(1.0))
ENN = WeierstrassData(RF.z(), RF.z(), AnnulusDomain.disk(1.0), basepoint=0.0)


def catenoid_closed_form(z):
    # X(z) - X(1) for g = z, h = 1/z, from the antiderivative (-(1/z + z)/2, i(z - 1/z)/2, log z)
    def F(w):
        return np.array([-(1 / w + w) / 2, 1j * (w - 1 / w) / 2, np.log(w)])
    return np.real(F(z) - F(1.0))


def test_domain_invariants():
    with pytest.raises(InvalidInputError):
        AnnulusDomain(1.0, 0.5)
    with pytest.raises(InvalidInputError):
        AnnulusDomain(0.1, 1.0, puncture_at_zero=True)
    d = AnnulusDomain.punctured_disk(1.0)
    assert not d.contains(0) and d.contains(0.5) and not d.contains(1.0)
    assert AnnulusDomain.from_json(d.to_json()) == d


def test_immerse_catenoid_half_turn():
    X = immerse(CAT, -1.0, base=1.0, path=PathSpec.arc(1.0, 0.0, math.pi))
    assert np.allclose(X, (2.0, 0.0, 0.0), atol=1e-12)


@pytest.mark.parametrize("z", [0.5, 0.3 + 0.4j, -0.7j, 0.05 + 0.02j])
def test_immerse_catenoid_closed_form(z):
    assert np.allclose(immerse(CAT, z), catenoid_closed_form(z), atol=1e-10)


def test_immerse_trivial_path():
    assert np.allclose(immerse(CAT, 1.0), 0.0)


@pytest.mark.parametrize("t", [0.1, 0.5, 0.9, -0.6])
def test_immerse_enneper_real_axis(t):
    X = immerse(ENN, t, base=0.0)
    assert X[0] == pytest.approx(t / 2 - t**3 / 6, abs=1e-12)
    assert X[2] == pytest.approx(t**2 / 2, abs=1e-12)


def test_immerse_pole_on_path_raises():
    wd = WeierstrassData(RF.z(), RF.monomial(-1), AnnulusDomain(0.0, 2.0))
    with pytest.raises(IntegrationError):
        immerse(wd, -1.0, base=1.0, path=PathSpec.polyline([1.0, -1.0]))


def test_immerse_path_independence():
    z = -0.4 + 0.3j
    a = immerse(CAT, z)
    b = immerse(CAT, z, path=PathSpec.polyline([1.0, 0.6 + 0.6j, z]))
    assert np.allclose(a, b, atol=1e-8)


def test_immerse_grid_matches_pointwise():
    wd = make_enneper_pair(2.0).wd
    radii = np.array([0.5, 0.8, 1.3])
    th = np.linspace(0, 2 * np.pi, 7, endpoint=False)
    G = immerse_grid(wd, radii, th)
    for i, r in enumerate(radii):
        for j, t in enumerate(th):
            assert np.allclose(G[i, j], immerse(wd, r * np.exp(1j * t)), atol=1e-9)


def test_jet_catenoid_at_one():
    j = jet(CAT, 1.0)
    assert j.Lambda == pytest.approx(1.0)
    assert j.K == pytest.approx(-1.0)
    assert np.allclose(j.N, (1, 0, 0))


def test_jet_enneper_at_regular_zero():
    j = jet(ENN, 0.0)
    assert j.Lambda == pytest.approx(0.5)
    assert j.K == pytest.approx(-16.0)            # -16 / (1 + |z|^2)^4 at 0
    z = 0.3 - 0.2j
    assert jet(ENN, z).K == pytest.approx(-16 / (1 + abs(z) ** 2) ** 4)


def test_jet_singular_points():
    with pytest.raises(SingularPointError):
        jet(CAT, 0.0)
    bad = WeierstrassData(RF.z(), RF.const(1), AnnulusDomain.disk(1.0))
    with pytest.raises(SingularPointError):
        jet(bad, 0.0)


SURFACES = {
    "catenoid": make_catenoid(1.0).wd,
    "catenoid-2": make_catenoid(-2.0).wd,
    "enneper": make_enneper(1).wd,
    "enneper-3": make_enneper(3).wd,
    "perturbed": make_perturbed_enneper(2, [0, 0.5]).wd,
    "pair": make_enneper_pair(2.0).wd,
}


def _random_points(wd, n, seed):
    rng = np.random.default_rng(seed)
    d = wd.domain
    lo = max(d.r_inner * 1.05, 0.1 * d.r_outer)
    r = rng.uniform(lo, 0.95 * d.r_outer, n)
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


@pytest.mark.parametrize("name", SURFACES)
def test_jet_invariants(name):
    wd = SURFACES[name]
    for z in _random_points(wd, 100, 1):
        j = jet(wd, z, with_position=False)
        assert abs(np.linalg.norm(j.N) - 1) < 1e-9
        assert abs(j.N @ j.Xu) < 1e-9 * j.Lambda and abs(j.N @ j.Xv) < 1e-9 * j.Lambda
        assert abs(np.linalg.norm(j.Xu) - j.Lambda) < 1e-9 * j.Lambda
        assert abs(j.Xu @ j.Xv) < 1e-9 * j.Lambda**2
        assert abs(j.H_mean) < 1e-9 * max(1, abs(j.kappa1))
        assert abs(j.L + j.Nc) < 1e-9 * max(1, abs(j.L))
        assert j.K <= 0
        assert j.kappa1 == pytest.approx(abs(j.Phi) / j.Lambda**2, rel=1e-9)


@pytest.mark.parametrize("name", ["catenoid", "enneper", "perturbed", "pair"])
def test_finite_difference_oracle(name):
    wd = SURFACES[name]
    h = 1e-4
    for z in _random_points(wd, 4, 2):
        j = jet(wd, z)
        Xp, Xm = immerse(wd, z + h), immerse(wd, z - h)
        Yp, Ym = immerse(wd, z + 1j * h), immerse(wd, z - 1j * h)
        Xu = (Xp - Xm) / (2 * h)
        Xv = (Yp - Ym) / (2 * h)
        assert np.linalg.norm(Xu) == pytest.approx(j.Lambda, rel=1e-5)
        assert np.linalg.norm(Xv) == pytest.approx(j.Lambda, rel=1e-5)
        # second fundamental form from second derivatives: L = <X_uu, N> = -<N_u, X_u>
        Xuu = (Xp - 2 * j.X + Xm) / h**2
        Xvv = (Yp - 2 * j.X + Ym) / h**2
        Nu = (jet(wd, z + h, False).N - jet(wd, z - h, False).N) / (2 * h)
        Nv = (jet(wd, z + 1j * h, False).N - jet(wd, z - 1j * h, False).N) / (2 * h)
        scale = max(abs(j.Phi), 1e-3)
        assert -Nu @ Xu == pytest.approx(j.L, abs=1e-5 * scale)
        assert -Nu @ Xv == pytest.approx(j.M, abs=1e-5 * scale)
        assert -Nv @ Xv == pytest.approx(j.Nc, abs=1e-5 * scale)
        assert Xuu @ j.N == pytest.approx(j.L, abs=1e-4 * scale)
        assert Xvv @ j.N == pytest.approx(j.Nc, abs=1e-4 * scale)


def test_validate_examples():
    assert validate(make_catenoid(1.0).wd).passed
    assert validate(make_enneper(1).wd).passed
    broken = WeierstrassData(RF.z(), RF.monomial(-1, 1j), AnnulusDomain.punctured_disk(1.0))
    rep = validate(broken)
    assert not rep.passed
    assert rep.loops[0].real_period == pytest.approx(-2 * math.pi, abs=1e-10)


def test_validate_flags_irregular_data():
    wd = WeierstrassData(RF.z(), RF.const(1), AnnulusDomain.disk(1.0))
    rep = validate(wd)
    assert not rep.regular and not rep.passed


def test_period_vector_examples():
    pv = period_vector(CAT, PathSpec.circle(0.5))
    assert np.allclose(pv, (0, 0, 2j * math.pi), atol=1e-10)
    assert np.allclose(period_vector(ENN, PathSpec.circle(0.5)), 0, atol=1e-12)
    pv = period_vector(make_enneper_pair(2.0).wd, PathSpec.circle(1.0))
    assert pv[2] == pytest.approx(2j * math.pi, abs=1e-10)
    with pytest.raises(InvalidInputError):
        period_vector(CAT, PathSpec.polyline([0.5, 0.5j]))


def test_period_vector_additive_and_contractible():
    loop = PathSpec.circle(0.5)
    double = loop + loop
    assert np.allclose(period_vector(CAT, double), 2 * period_vector(CAT, loop), atol=1e-10)
    off = PathSpec.circle(0.2, center=0.6)
    assert np.allclose(period_vector(CAT, off), 0, atol=1e-10)
    assert np.allclose(period_vector(CAT, loop.reversed()), -period_vector(CAT, loop), atol=1e-10)


def test_total_curvature_examples():
    enn = WeierstrassData(RF.z(), RF.z(), AnnulusDomain.disk(50.0))
    tc = total_curvature(enn)
    assert tc.value == pytest.approx(-4 * math.pi, rel=0.02)
    cat = WeierstrassData(RF.z(), RF.monomial(-1), AnnulusDomain(0.02, 50.0))
    assert total_curvature(cat).value == pytest.approx(-4 * math.pi, rel=0.02)
    e2 = WeierstrassData(RF.monomial(2), RF.monomial(2), AnnulusDomain.disk(50.0))
    tc2 = total_curvature(e2)
    assert tc2.value == pytest.approx(-8 * math.pi, rel=0.02)
    assert tc2.exact_complete == pytest.approx(-8 * math.pi)


def test_classify_end_examples():
    assert classify_end(CAT).kind == "Catenoidal"
    planar = WeierstrassData(RF.monomial(2), RF.const(1), AnnulusDomain.punctured_disk(1.0))
    assert classify_end(planar).kind == "Planar"
    enn_end = WeierstrassData(RF.z(), RF.monomial(-3), AnnulusDomain.punctured_disk(1.0))
    e = classify_end(enn_end)
    assert (e.kind, e.multiplicity) == ("EnneperType", 3)
    e = classify_end(make_enneper(1).wd)
    assert (e.kind, e.multiplicity) == ("EnneperType", 3)
    with pytest.raises(NormalizationError):
        classify_end(WeierstrassData(RF.poly([1, 1]), RF.monomial(-2), AnnulusDomain.punctured_disk(0.5)))


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 5.0), st.floats(0, 2 * math.pi))
def test_classify_end_invariant_under_rescaling(r, t):
    lam = r * complex(math.cos(t), math.sin(t))
    for wd in (CAT, WeierstrassData(RF.z(), RF.monomial(-3), AnnulusDomain.punctured_disk(1.0))):
        # g(lam z), h(lam z) * lam
        g2 = rat_reduce(P((0, lam)), P((1,)))
        k = -1 if wd is CAT else -3
        h2 = RF.monomial(k, lam ** (k + 1))
        wd2 = WeierstrassData(g2, h2, wd.domain)
        assert classify_end(wd2) == classify_end(wd)


def test_reparametrize_catenoid_exact():
    gc = reparametrize_by_gauss(WeierstrassData(RF.z(), RF.monomial(-1), AnnulusDomain.punctured_disk(1.0)), 12)
    d = gc.height_over_gauss
    assert d.coeff(-2) == QI(1)
    assert all(d.coeff(k) == 0 for k in range(-1, 13))
    assert all(c == 0 for c in gc.roundtrip_residual)


def test_reparametrize_catenoid_float_c():
    c = 0.7318
    gc = reparametrize_by_gauss(make_catenoid(c).wd, 12)
    assert complex(gc.height_over_gauss.coeff(-2)) == pytest.approx(c, abs=1e-12)
    assert all(abs(complex(gc.height_over_gauss.coeff(k))) < 1e-12 for k in range(-1, 13))


def test_reparametrize_perturbed():
    g = RF.poly([0, 1, 1])
    wd = WeierstrassData(g, g * RF.monomial(-2), AnnulusDomain.punctured_disk(0.4))
    gc = reparametrize_by_gauss(wd, 8)
    d = gc.height_over_gauss.as_dict()
    assert d[-2] == pytest.approx(1)
    assert all(c == 0 for c in gc.roundtrip_residual)
    # oracle: dh/g = dz/z^2 with z = t(w); compare t'(w)/t(w)^2 numerically on a small circle
    w = 0.05 * np.exp(2j * np.pi * np.arange(64) / 64)
    t = np.polyval(np.array(gc.inverse.as_complex()[::-1]), w)
    dt = np.polyval(np.array(gc.inverse.derivative().as_complex()[::-1]), w)
    series = sum(c * w**k for k, c in d.items())
    assert np.max(np.abs(dt / t**2 - series)) < 1e-6


def test_reparametrize_needs_simple_zero():
    wd = WeierstrassData(RF.monomial(2), RF.const(1), AnnulusDomain.punctured_disk(1.0))
    with pytest.raises(NotInvertibleError):
        reparametrize_by_gauss(wd)


def test_json_roundtrip():
    wd = make_enneper_pair(2.0).wd
    back = WeierstrassData.from_json(wd.to_json())
    assert back.g == wd.g and back.h == wd.h and back.domain == wd.domain
