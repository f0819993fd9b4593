"""Acceptance criteria 1-13, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` (or ``python3 tests/test_acceptance.py``);
the terminal summary prints one PASS/FAIL line per criterion.
"""
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from minsurf.catalog import (
    lookup, make_catenoid, make_critical_catenoid, make_enneper, make_enneper_pair,
    make_perturbed_enneper, make_plane,
)
from minsurf.geometry import boundary_curvatures, contact_angle_profile, flux, trace_line_of_curvature
from minsurf.hopf import (
    PUNCTURED_CAPILLARY_DISK, Closed, HopfDifferential, f_function, hopf_differential, index_audit,
    invert_chart, rotation_index_exact, rotation_index_winding,
)
from minsurf.paths import PathSpec
from minsurf.ratfun import QI, ComplexPoly as P, RationalFunction as RF, order_at, rat_reduce
from minsurf.scene import load_scene_file, run_verification
from minsurf.weierstrass import (
    AnnulusDomain, WeierstrassData, generator_loops, immerse, jet, period_vector,
    reparametrize_by_gauss, total_curvature, validate,
)

SCENES = Path(__file__).resolve().parents[1] / "scenes"
criterion = pytest.mark.criterion

CATALOG = [make_catenoid(1.0), make_catenoid(-2.0), make_catenoid(0.37), make_critical_catenoid(),
           make_enneper(1), make_enneper(2), make_enneper(3), make_perturbed_enneper(2, [0, 0.5]),
           make_perturbed_enneper(3, [0, 0, 1 - 1j]), make_enneper_pair(2.0), make_enneper_pair(3.0)]
CATENOIDS = [make_catenoid(1.0), make_catenoid(-2.0), make_catenoid(0.37), make_critical_catenoid()]


def _name(e):
    return e.name


def _domain_points(wd, n, seed):
    """Random points well inside the domain (away from puncture and rim)."""
    rng = np.random.default_rng(seed)
    d = wd.domain
    lo = max(d.r_inner * 1.05, 0.05 * d.r_outer)
    r = rng.uniform(lo, 0.95 * d.r_outer, n)
    return r * np.exp(2j * np.pi * rng.uniform(size=n))


def _catenoid_c(entry):
    # c in dh = c dz / z, read off as z h(z) at any point
    return complex(0.5 * entry.wd.h(0.5))


# -- 1 ---------------------------------------------------------------------------

@criterion(1, "catenoid branch: z^2 Phi constant, beta = 0 on the boundary")
@pytest.mark.parametrize("entry", CATENOIDS, ids=_name)
def test_c01_catenoid_f_constant_and_beta_zero(entry):
    wd = entry.wd
    c = _catenoid_c(entry)
    ff = f_function(hopf_differential(wd))
    r = np.linspace(wd.domain.r_outer * 0.05, wd.domain.r_outer, 10)
    th = 2 * np.pi * np.arange(20) / 20
    z = (r[:, None] * np.exp(1j * th)[None, :]).ravel()
    assert z.size == 200
    assert np.max(np.abs(ff.f(z) - c)) < 1e-12
    rho = wd.domain.boundary_circle or wd.domain.r_outer
    beta = ff.beta(rho * np.exp(2j * np.pi * np.arange(512) / 512))
    assert np.max(np.abs(beta)) < 1e-12


# -- 2 ---------------------------------------------------------------------------

_PLANE_CASES = [((0, 0, 1), 0.0, (0, 0, 0), 1.0), ((0, 0, 1), 0.4, (0, 0, 0), 1.0),
                ((1, 2, 2), -0.3, (0.1, -0.2, 0.3), 2.0), ((0.6, 0.0, -0.8), 0.3, (1.0, 1.0, 1.0), 0.9)]


@criterion(2, "planar branch: totally umbilic, constant contact angle")
@pytest.mark.parametrize("normal,offset,center,radius", _PLANE_CASES)
def test_c02_plane_umbilic_and_constant_angle(normal, offset, center, radius):
    n = np.asarray(normal, float) / np.linalg.norm(normal)
    e = make_plane(tuple(n), offset)
    assert hopf_differential(e.surface).totally_umbilic
    rep = contact_angle_profile(e.surface, None, center, radius)
    assert rep.max_deviation < 1e-12
    # oracle: cos(angle) = <n, (X - c)/R> = (offset - <n, c>) / R on the circle
    assert rep.mean == pytest.approx(math.acos((offset - n @ np.asarray(center)) / radius), abs=1e-12)


@criterion(2, "planar branch: totally umbilic, constant contact angle")
def test_c02_plane_random_spheres():
    rng = np.random.default_rng(2)
    for _ in range(50):
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        center, radius = rng.normal(size=3), rng.uniform(0.5, 3.0)
        offset = n @ center + rng.uniform(-0.95, 0.95) * radius
        rep = contact_angle_profile(make_plane(tuple(n), offset).surface, None, center, radius)
        assert rep.max_deviation < 1e-12


# -- 3 ---------------------------------------------------------------------------

@criterion(3, "catenoid curvature lines are circles and rays")
@pytest.mark.parametrize("c", [1.0, -2.0])
@pytest.mark.parametrize("r0", [0.3, 0.5, 0.8])
def test_c03_catenoid_curvature_lines(c, r0):
    wd = make_catenoid(c).wd
    z0 = r0 * np.exp(0.7j)
    seen = set()
    for branch in ("principal-1", "principal-2"):
        t0 = trace_line_of_curvature(wd, z0, branch, 1e-3, 1e-3).tangents[0]
        if abs((t0 * np.conj(z0)).real) < 1e-9 * r0:
            # angular direction: one full revolution
            tr = trace_line_of_curvature(wd, z0, branch, 2 * math.pi * r0, 1e-3)
            assert tr.stop_reason == "arclength"
            assert np.max(np.abs(np.abs(tr.points) - r0)) < 1e-6
            assert abs(tr.points[-1] - z0) < 1e-6
            seen.add("circle")
        else:
            tr = trace_line_of_curvature(wd, z0, branch, 0.8 * min(r0, 1 - r0), 1e-3)
            dev = np.abs(np.angle(tr.points * np.exp(-0.7j))) * np.abs(tr.points)
            assert np.max(dev) < 1e-6
            seen.add("ray")
    assert seen == {"circle", "ray"}


# -- 4 ---------------------------------------------------------------------------

def _random_rational(rng):
    nz, npole = rng.integers(0, 6), rng.integers(0, 6)
    zs = rng.integers(-6, 7, size=nz) / 3 + 1j * rng.integers(-6, 7, size=nz) / 3
    ps = rng.integers(-6, 7, size=npole) / 3 + 1j * rng.integers(-6, 7, size=npole) / 3
    c = complex(rng.integers(1, 5), rng.integers(-4, 5))
    return rat_reduce(P.from_roots(list(zs)) * P((c,)), P.from_roots(list(ps)) if npole else P((1,)))


@criterion(4, "index sums: punctured capillary disk 1, sphere 2")
@pytest.mark.parametrize("entry", CATENOIDS, ids=_name)
def test_c04_catenoid_capillary_audit(entry):
    a = index_audit(hopf_differential(entry.wd), PUNCTURED_CAPILLARY_DISK)
    assert a.index_sum == Fraction(1) and a.passed
    assert [e["at"] for e in a.entries] == ["puncture"]
    assert a.entries[0]["index"] == Fraction(1)


@criterion(4, "index sums: punctured capillary disk 1, sphere 2")
@pytest.mark.parametrize("seed", range(20))
def test_c04_sphere_audit_random_rational(seed):
    Phi = _random_rational(np.random.default_rng(1000 + seed))
    a = index_audit(HopfDifferential(Phi), Closed(0))
    assert a.index_sum == 2 and a.passed
    assert any(e["at"] == "infinity" for e in a.entries) or order_at(invert_chart(HopfDifferential(Phi)).Phi, 0) == 0


# -- 5 ---------------------------------------------------------------------------

@criterion(5, "Enneper end: pole order k+3, index (k+3)/2")
@pytest.mark.parametrize("k,index", [(1, Fraction(2)), (2, Fraction(5, 2)), (3, Fraction(3))])
def test_c05_enneper_end_pole_order(k, index):
    inv = invert_chart(hopf_differential(make_enneper(k).wd))
    assert -order_at(inv.Phi, 0) == k + 3
    assert rotation_index_exact(inv, 0) == index


# -- 6 ---------------------------------------------------------------------------

@criterion(6, "winding index equals exact index for z^m")
@pytest.mark.parametrize("m", range(-4, 4))
def test_c06_winding_vs_exact(m):
    hd = HopfDifferential(RF.monomial(m))
    w = rotation_index_winding(hd, PathSpec.circle(1.0), 4096)
    assert w.index == rotation_index_exact(hd, 0) == Fraction(-m, 2)
    assert w.snap_distance < 0.01


# -- 7 ---------------------------------------------------------------------------

@criterion(7, "flux: catenoid 2 pi c, Enneper 0, Enneper-pair neck 2 pi")
@pytest.mark.parametrize("c", [1.0, -2.0, 0.37])
def test_c07_catenoid_flux(c):
    f = flux(make_catenoid(c).wd, PathSpec.circle(0.5))
    target = np.array([0, 0, 2 * math.pi * c])
    assert np.max(np.abs(f.value - target)) < 1e-8
    assert np.max(np.abs(f.conormal - target)) < 1e-8


@criterion(7, "flux: catenoid 2 pi c, Enneper 0, Enneper-pair neck 2 pi")
@pytest.mark.parametrize("k", [1, 2, 3])
def test_c07_enneper_flux_zero(k):
    wd = make_enneper(k).wd
    for loop in (PathSpec.circle(0.5), PathSpec.circle(0.9), PathSpec.circle(0.2, 0.3 + 0.1j)):
        f = flux(wd, loop)
        assert np.max(np.abs(f.value)) < 1e-10
        assert np.max(np.abs(f.conormal)) < 1e-10


@criterion(7, "flux: catenoid 2 pi c, Enneper 0, Enneper-pair neck 2 pi")
@pytest.mark.parametrize("R", [2.0, 3.0])
def test_c07_enneper_pair_neck(R):
    wd = make_enneper_pair(R).wd
    f = flux(wd, PathSpec.circle(1.0))
    assert abs(f.value[2] - 2 * math.pi) < 1e-7
    assert abs(f.conormal[2] - 2 * math.pi) < 1e-7


@criterion(7, "flux: catenoid 2 pi c, Enneper 0, Enneper-pair neck 2 pi")
def test_c07_homologous_loops_agree():
    cases = [
        (make_catenoid(1.0).wd, PathSpec.circle(0.5),
         PathSpec.polyline([0.7, 0.7j, -0.7, -0.7j, 0.7])),
        (make_catenoid(-2.0).wd, PathSpec.circle(0.3), PathSpec.circle(0.2, 0.05 - 0.02j)),
        (make_enneper_pair(2.0).wd, PathSpec.circle(1.0), PathSpec.circle(0.8)),
        (make_enneper_pair(3.0).wd, PathSpec.circle(1.0),
         PathSpec.polyline([1.5, 1.5j, -1.5, -1.5j, 1.5])),
    ]
    for wd, a, b in cases:
        assert np.max(np.abs(flux(wd, a).value - flux(wd, b).value)) < 1e-8


# -- 8 ---------------------------------------------------------------------------

@criterion(8, "metric and second fundamental form oracles, jet invariants")
@pytest.mark.parametrize("entry", CATALOG, ids=_name)
def test_c08_finite_difference_oracle(entry):
    wd = entry.wd
    h = 1e-4
    for z in _domain_points(wd, 4, 8):
        j = jet(wd, z)
        Xp, Xm = immerse(wd, z + h), immerse(wd, z - h)
        Yp, Ym = immerse(wd, z + 1j * h), immerse(wd, z - 1j * h)
        Xu, Xv = (Xp - Xm) / (2 * h), (Yp - Ym) / (2 * h)
        assert abs(np.linalg.norm(Xu) - j.Lambda) < 1e-5 * j.Lambda
        assert abs(np.linalg.norm(Xv) - j.Lambda) < 1e-5 * j.Lambda
        Nu = (jet(wd, z + h, False).N - jet(wd, z - h, False).N) / (2 * h)
        Nv = (jet(wd, z + 1j * h, False).N - jet(wd, z - 1j * h, False).N) / (2 * h)
        # relative to the size of the form: |II| = sqrt(L^2 + 2M^2 + N^2) = sqrt(2)|Phi|
        size = math.sqrt(2) * abs(j.Phi)
        assert abs(-Nu @ Xu - j.L) < 1e-5 * size
        assert abs(-Nu @ Xv - j.M) < 1e-5 * size
        assert abs(-Nv @ Xu - j.M) < 1e-5 * size
        assert abs(-Nv @ Xv - j.Nc) < 1e-5 * size


@criterion(8, "metric and second fundamental form oracles, jet invariants")
@pytest.mark.parametrize("entry", CATALOG, ids=_name)
def test_c08_jet_invariants(entry):
    wd = entry.wd
    dphi = [f.derivative() for f in wd.phi]
    for z in _domain_points(wd, 500, 80):
        j = jet(wd, z, with_position=False)
        lam, lam2 = j.Lambda, j.Lambda**2
        assert abs(np.linalg.norm(j.N) - 1) < 1e-9
        assert abs(np.linalg.norm(j.Xu) - lam) < 1e-9 * lam
        assert abs(np.linalg.norm(j.Xv) - lam) < 1e-9 * lam
        assert abs(j.Xu @ j.Xv) < 1e-9 * lam2
        assert abs(j.N @ j.Xu) < 1e-9 * lam and abs(j.N @ j.Xv) < 1e-9 * lam
        # second derivatives straight from phi': X_uu = Re phi', X_uv = -Im phi', X_vv = -Re phi'
        d = np.array([f(z) for f in dphi])
        L, M, Nc = d.real @ j.N, -d.imag @ j.N, -d.real @ j.N
        scale = max(abs(j.Phi), 1e-300)
        assert abs(L + Nc) < 1e-9 * scale
        assert abs(L - j.L) < 1e-9 * scale and abs(M - j.M) < 1e-9 * scale and abs(Nc - j.Nc) < 1e-9 * scale
        assert abs(j.H_mean) < 1e-9 * max(abs(j.kappa1), 1e-300)


# -- 9 ---------------------------------------------------------------------------

@criterion(9, "total curvature -4 pi / -8 pi within 2%")
@pytest.mark.parametrize("wd,expected", [
    (make_enneper(1, AnnulusDomain.disk(50.0)).wd, -4 * math.pi),
    (WeierstrassData(RF.z(), RF.monomial(-1), AnnulusDomain(0.02, 50.0)), -4 * math.pi),
    (make_enneper(2, AnnulusDomain.disk(50.0)).wd, -8 * math.pi),
], ids=["enneper", "catenoid", "g=z^2"])
def test_c09_total_curvature(wd, expected):
    t0 = time.perf_counter()
    tc = total_curvature(wd, n_r=256, n_theta=256)
    assert time.perf_counter() - t0 < 60
    assert abs(tc.value - expected) <= 0.02 * abs(expected)


# -- 10 --------------------------------------------------------------------------

@criterion(10, "period conditions on generator loops; broken datum fails")
@pytest.mark.parametrize("entry", CATALOG, ids=_name)
def test_c10_catalog_periods(entry):
    loops = generator_loops(entry.wd) + [PathSpec.from_json(l) for l in entry.loops.values()]
    rep = validate(entry.wd, loops, tol=1e-10)
    assert rep.passed
    for c in rep.loops:
        assert abs(c.gauss_mismatch) < 1e-10 and abs(c.real_period) < 1e-10


@criterion(10, "period conditions on generator loops; broken datum fails")
def test_c10_broken_period_fails():
    wd = lookup("broken-period").wd
    assert wd.g.equals(RF.z()) and wd.h.equals(RF.monomial(-1, 1j))
    assert not validate(wd, tol=1e-10).passed
    re_dh = period_vector(wd, PathSpec.circle(0.5))[2].real
    assert abs(re_dh + 2 * math.pi) < 1e-10


# -- 11 --------------------------------------------------------------------------

@criterion(11, "reparametrisation by the Gauss map")
def test_c11_exact_catenoid():
    gc = reparametrize_by_gauss(make_catenoid(1.0).wd, 12)
    d = gc.height_over_gauss
    assert d.coeff(-2) == QI(1)
    assert all(d.coeff(k) == 0 for k in range(-1, 13))
    assert all(c == 0 for c in gc.roundtrip_residual)


@criterion(11, "reparametrisation by the Gauss map")
@pytest.mark.parametrize("c", [0.7318, -2.0, math.pi])
def test_c11_float_catenoid(c):
    gc = reparametrize_by_gauss(make_catenoid(c).wd, 12)
    d = gc.height_over_gauss
    assert abs(complex(d.coeff(-2)) - c) < 1e-12
    assert all(abs(complex(d.coeff(k))) < 1e-12 for k in range(-1, 13))


# -- 12 --------------------------------------------------------------------------

def _scaled_onto_unit_sphere(wd, rho):
    """Rescale so the circle |z| = rho lands on the unit sphere about the origin."""
    R = float(np.linalg.norm(immerse(wd, rho)))
    return WeierstrassData(wd.g, wd.h * RF.const(1 / R), wd.domain, wd.basepoint,
                           tuple(np.asarray(wd.base_position) / R))


@criterion(12, "boundary curvatures on the unit sphere")
@pytest.mark.parametrize("entry", CATENOIDS, ids=_name)
@pytest.mark.parametrize("frac", [0.5, 1.0])
def test_c12_boundary_curvatures(entry, frac):
    rho = frac * (entry.wd.domain.boundary_circle or entry.wd.domain.r_outer)
    wd = _scaled_onto_unit_sphere(entry.wd, rho)
    rep = boundary_curvatures(wd, rho, 512, (0, 0, 0), 1.0)
    assert rep.sphere_residual < 1e-9
    assert len(rep.samples) == 512
    assert np.max(np.abs(rep.column("kappa_n") - 1)) < 1e-8
    assert np.max(np.abs(rep.column("kappa_g") - rep.column("kappa_g_alpha"))) < 1e-6


# -- 13 --------------------------------------------------------------------------

@criterion(13, "verification scenes: exit codes and deterministic reports")
@pytest.mark.parametrize("scene,code", [("catenoid", 0), ("enneper", 0), ("enneper_pair", 0),
                                        ("broken_period", 1)])
def test_c13_scene_exit_codes(scene, code, tmp_path):
    s = load_scene_file(SCENES / f"{scene}.json")
    _, got = run_verification(s, tmp_path / "a")
    assert got == code
    run_verification(s, tmp_path / "b")
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
