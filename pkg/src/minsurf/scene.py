"""Scene files and the verification suite behind ``minsurf verify``.

Scene schema (JSON)::

    {
      "name": "catenoid",                         # optional label
      "surface": "catenoid" | {"g": RF, "h": RF, "domain": {...},
                               "basepoint": [re, im], "base_position": [x, y, z]},
      "loops":   {"neck": {"circle": {"r": 0.5}} | {"polyline": [[re, im], ...]}},
      "spheres": {"unit": {"center": [x, y, z], "radius": R, "boundary_radius": rho}},
      "checks":  ["flux-table", {"id": "contact-angle", "spheres": ["unit"]}, ...],
      "expected": {"flux": {"neck": [x, y, z]}},  # optional, overrides the catalog
      "output": "out/catenoid"                    # optional
    }

RF is ``{"num": [[re, im], ...], "den": [[re, im], ...]}`` with ascending
coefficients. Every error raised while loading carries a code and a JSON path.
A catalog surface without a "loops" key uses the catalog's named loops, and a
scene without a "checks" key runs DEFAULT_CHECKS.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from . import catalog
from .errors import InvalidInputError, MinsurfError
from .geometry import boundary_curvatures, contact_angle_profile, flux, trace_line_of_curvature
from .hopf import (
    CAPILLARY_DISK, PUNCTURED_CAPILLARY_DISK, Closed, f_function, hopf_differential, index_audit,
)
from .paths import PathSpec, contour_integral
from .ratfun import RationalFunction
from .weierstrass import AnnulusDomain, WeierstrassData, generator_loops, total_curvature, validate

SCHEMA_VERSION = "1"
# run when a scene lists no checks at all
DEFAULT_CHECKS = ("period-conditions", "flux-table", "index-audit")

CHECK_IDS = ("beta-on-boundary", "contact-angle", "curvature-line-closure", "flux-table",
             "index-audit", "period-conditions", "total-curvature")


@dataclass
class VerifyConfig:
    """Every tolerance and sample count used by the checks; echoed into reports."""

    period_tol: float = 1e-10
    flux_tol: float = 1e-8
    flux_method_tol: float = 1e-7
    contact_tol: float = 1e-8
    beta_tol: float = 1e-8
    kappa_tol: float = 1e-8
    total_curvature_rel: float = 0.02
    closure_tol: float = 1e-6
    boundary_samples: int = 512
    flux_samples: int = 2048
    total_curvature_grid: int = 256
    trace_step: float = 1e-3
    angle_convention: str = "normal"

    def with_overrides(self, samples: Optional[int] = None, tol: Optional[float] = None,
                       angle_convention: Optional[str] = None) -> "VerifyConfig":
        """``samples`` sets boundary and flux sample counts; ``tol`` every absolute tolerance."""
        out = dataclasses.replace(self)
        if samples is not None:
            if samples < 8:
                raise SceneError("config", "$.samples", "need at least 8 samples")
            out.boundary_samples = out.flux_samples = int(samples)
        if tol is not None:
            if not tol > 0:
                raise SceneError("config", "$.tol", "tolerance must be positive")
            for name in ("period_tol", "flux_tol", "flux_method_tol", "contact_tol",
                         "beta_tol", "kappa_tol", "closure_tol"):
                setattr(out, name, float(tol))
        if angle_convention is not None:
            if angle_convention not in ("normal", "supplement"):
                raise SceneError("config", "$.angle_convention", f"unknown convention {angle_convention!r}")
            out.angle_convention = angle_convention
        return out


class SceneError(MinsurfError):
    """Scene problem with a stable ``code`` and the JSON ``path`` where it occurred.

    Codes: malformed-json, schema, unknown-surface, dangling-reference,
    unknown-check, config.
    """

    def __init__(self, code: str, path: str, message: str):
        super().__init__(f"[{code}] {path}: {message}")
        self.code, self.path, self.message = code, path, message


@dataclass
class SphereSpec:
    center: tuple
    radius: float
    boundary_radius: Optional[float] = None
    angle: Optional[float] = None


@dataclass
class CheckSpec:
    id: str
    params: dict = field(default_factory=dict)


@dataclass
class Scene:
    name: str
    surface: Any                    # WeierstrassData or PlaneChart
    entry: Optional[catalog.CatalogEntry]
    loops: dict
    spheres: dict
    checks: list
    expected: dict
    output: Optional[str] = None

    @property
    def wd(self) -> Optional[WeierstrassData]:
        return self.surface if isinstance(self.surface, WeierstrassData) else None


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _require(cond: bool, path: str, msg: str):
    if not cond:
        raise SceneError("schema", path, msg)


def _number(x, path: str) -> float:
    _require(isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x),
             path, "expected a finite number")
    return float(x)


def _vector(x, n: int, path: str) -> tuple:
    _require(isinstance(x, list) and len(x) == n, path, f"expected a list of {n} numbers")
    return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(x))


def _coeffs(x, path: str) -> list:
    _require(isinstance(x, list), path, "expected a list of [re, im] pairs")
    _require(len(x) > 0, path, "coefficient list must not be empty")
    return [_vector(c, 2, f"{path}[{i}]") for i, c in enumerate(x)]


def _rational(x, path: str) -> RationalFunction:
    _require(isinstance(x, dict), path, "expected {'num': [...], 'den': [...]}")
    num = _coeffs(x.get("num"), f"{path}.num")
    den = _coeffs(x.get("den"), f"{path}.den")
    _require(any(c != (0.0, 0.0) for c in den), f"{path}.den", "denominator is zero")
    return RationalFunction.from_json({"num": num, "den": den})


def _domain(x, path: str) -> AnnulusDomain:
    _require(isinstance(x, dict), path, "expected a domain object")
    try:
        return AnnulusDomain(_number(x.get("r_inner", 0.0), f"{path}.r_inner"),
                             _number(x.get("r_outer", 1.0), f"{path}.r_outer"),
                             bool(x.get("puncture", False)),
                             None if x.get("boundary") is None else _number(x["boundary"], f"{path}.boundary"))
    except InvalidInputError as exc:
        raise SceneError("schema", path, str(exc)) from exc


def _surface(x, path: str):
    if isinstance(x, str):
        try:
            entry = catalog.lookup(x)
        except (KeyError, InvalidInputError) as exc:
            raise SceneError("unknown-surface", path, str(exc.args[0] if exc.args else exc)) from exc
        return entry.surface, entry
    _require(isinstance(x, dict), path, "expected a catalog name or {'g': ..., 'h': ...}")
    g = _rational(x.get("g"), f"{path}.g")
    h = _rational(x.get("h"), f"{path}.h")
    dom = _domain(x.get("domain", {}), f"{path}.domain")
    bp = x.get("basepoint")
    bp = None if bp is None else complex(*_vector(bp, 2, f"{path}.basepoint"))
    pos = _vector(x.get("base_position", [0.0, 0.0, 0.0]), 3, f"{path}.base_position")
    return WeierstrassData(g, h, dom, bp, pos), None


def _loop(x, path: str) -> PathSpec:
    _require(isinstance(x, dict) and len(x) == 1 and next(iter(x)) in ("circle", "polyline"),
             path, "expected {'circle': {...}} or {'polyline': [...]}")
    if "circle" in x:
        c = x["circle"]
        _require(isinstance(c, dict), f"{path}.circle", "expected an object")
        r = _number(c.get("r"), f"{path}.circle.r")
        _require(r > 0, f"{path}.circle.r", "radius must be positive")
        if "center" in c:
            _vector(c["center"], 2, f"{path}.circle.center")
    else:
        pts = x["polyline"]
        _require(isinstance(pts, list) and len(pts) >= 2, f"{path}.polyline", "need at least two points")
        for i, p in enumerate(pts):
            _vector(p, 2, f"{path}.polyline[{i}]")
    try:
        return PathSpec.from_json(x)
    except InvalidInputError as exc:
        raise SceneError("schema", path, str(exc)) from exc


def _sphere(x, path: str) -> SphereSpec:
    _require(isinstance(x, dict), path, "expected a sphere object")
    r = _number(x.get("radius"), f"{path}.radius")
    _require(r > 0, f"{path}.radius", "radius must be positive")
    br = x.get("boundary_radius")
    ang = x.get("angle")
    return SphereSpec(_vector(x.get("center", [0.0, 0.0, 0.0]), 3, f"{path}.center"), r,
                      None if br is None else _number(br, f"{path}.boundary_radius"),
                      None if ang is None else _number(ang, f"{path}.angle"))


def _check(x, path: str) -> CheckSpec:
    if isinstance(x, str):
        x = {"id": x}
    _require(isinstance(x, dict) and isinstance(x.get("id"), str), path, "expected a check id or {'id': ...}")
    if x["id"] not in CHECK_IDS:
        raise SceneError("unknown-check", f"{path}.id", f"unknown check {x['id']!r}; known: {', '.join(CHECK_IDS)}")
    return CheckSpec(x["id"], {k: v for k, v in x.items() if k != "id"})


def load_scene(text: str) -> Scene:
    """Parse and resolve a scene document (catalog names expanded)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError("malformed-json", "$", f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    _require(isinstance(doc, dict), "$", "scene must be a JSON object")
    _require("surface" in doc, "$.surface", "missing surface")
    surface, entry = _surface(doc["surface"], "$.surface")

    loops_doc = doc.get("loops", {})
    _require(isinstance(loops_doc, dict), "$.loops", "expected an object of named loops")
    loops = {k: _loop(v, f"$.loops.{k}") for k, v in loops_doc.items()}
    if "loops" not in doc and entry is not None:
        # a bare catalog surface brings its own named loops
        loops = {k: PathSpec.from_json(v) for k, v in entry.loops.items()}
    spheres_doc = doc.get("spheres", {})
    _require(isinstance(spheres_doc, dict), "$.spheres", "expected an object of named spheres")
    spheres = {k: _sphere(v, f"$.spheres.{k}") for k, v in spheres_doc.items()}
    default_checks = [] if isinstance(surface, catalog.PlaneChart) else list(DEFAULT_CHECKS)
    checks_doc = doc.get("checks", default_checks)
    _require(isinstance(checks_doc, list), "$.checks", "expected a list")
    checks = [_check(c, f"$.checks[{i}]") for i, c in enumerate(checks_doc)]

    for i, c in enumerate(checks):
        for key, table in (("loops", loops), ("spheres", spheres)):
            names = c.params.get(key)
            if names is None:
                continue
            _require(isinstance(names, list), f"$.checks[{i}].{key}", "expected a list of names")
            for n in names:
                if n not in table:
                    raise SceneError("dangling-reference", f"$.checks[{i}].{key}", f"no {key[:-1]} named {n!r}")
        if c.id == "contact-angle" and not spheres and "spheres" not in c.params:
            raise SceneError("dangling-reference", f"$.checks[{i}]", "contact-angle needs at least one sphere")
    expected = doc.get("expected", {})
    _require(isinstance(expected, dict), "$.expected", "expected an object")
    for k, v in expected.get("flux", {}).items():
        if k not in loops:
            raise SceneError("dangling-reference", f"$.expected.flux.{k}", f"no loop named {k!r}")
        _vector(v, 3, f"$.expected.flux.{k}")
    if isinstance(surface, catalog.PlaneChart):
        for i, c in enumerate(checks):
            if c.id != "contact-angle":
                raise SceneError("schema", f"$.checks[{i}]", f"{c.id} needs Weierstrass data, not a plane chart")
    name = doc.get("name") or (entry.name if entry else "custom")
    return Scene(str(name), surface, entry, loops, spheres, checks, expected, doc.get("output"))


def load_scene_file(path: str | Path) -> Scene:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SceneError("config", "$", f"cannot read scene file: {exc}") from exc
    return load_scene(text)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

@dataclass
class VerificationOutcome:
    check: str
    status: str                 # pass | fail | indeterminate
    measured: dict
    tolerances: dict
    table_header: tuple = ()
    table: list = field(default_factory=list)
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {"check": self.check, "status": self.status,
                "measured": _jsonable(self.measured), "tolerances": _jsonable(self.tolerances)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    return x


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _loops_for(scene: Scene, spec: CheckSpec) -> dict:
    names = spec.params.get("loops")
    if names is not None:
        return {n: scene.loops[n] for n in names}
    if scene.loops:
        return dict(scene.loops)
    return {f"generator-{i}": l for i, l in enumerate(generator_loops(scene.wd))}


def _boundary_radius(scene: Scene, spec: CheckSpec) -> float:
    if "boundary_radius" in spec.params:
        return float(spec.params["boundary_radius"])
    d = scene.wd.domain
    return d.boundary_circle if d.boundary_circle is not None else d.r_outer


def check_period_conditions(scene: Scene, spec: CheckSpec, cfg: VerifyConfig) -> VerificationOutcome:
    loops = _loops_for(scene, spec)
    rep = validate(scene.wd, list(loops.values()), tol=cfg.period_tol)
    rows, per_loop = [], {}
    for name, c in zip(loops, rep.loops):
        per_loop[name] = {"gauss_mismatch": abs(c.gauss_mismatch), "real_period": c.real_period,
                          "pass": c.passed}
        rows.append((name, abs(c.gauss_mismatch), c.real_period, c.passed))
    measured = {"regular": rep.regular, "issues": [str(i) for i in rep.regularity_issues], "loops": per_loop}
    return VerificationOutcome("period-conditions", _status(rep.passed), measured,
                               {"period_tol": cfg.period_tol},
                               ("loop", "gauss_mismatch_abs", "real_period", "pass"), rows)


def _winding_about_origin(loop: PathSpec) -> int:
    w = contour_integral(lambda z: 1 / z, loop, epsabs=1e-10) / (2j * math.pi)
    return int(round(w.real))


def check_flux_table(scene: Scene, spec: CheckSpec, cfg: VerifyConfig) -> VerificationOutcome:
    """Flux by both methods; expected values from the scene, else winding x generator flux."""
    loops = _loops_for(scene, spec)
    given = scene.expected.get("flux", {})
    gen = scene.entry.expected.get("flux_generator") if scene.entry else None
    ok = True
    rows, per_loop = [], {}
    for name, loop in loops.items():
        f = flux(scene.wd, loop, cfg.flux_samples)
        exp = given.get(name)
        if exp is None and gen is not None:
            exp = [_winding_about_origin(loop) * v for v in gen]
        err = None if exp is None else float(np.max(np.abs(f.value - np.asarray(exp))))
        good = f.agreement <= cfg.flux_method_tol and (err is None or err <= cfg.flux_tol)
        ok &= good
        per_loop[name] = {"value": f.value, "conormal": f.conormal, "method_gap": f.agreement,
                          "expected": exp, "error": err, "pass": good}
        rows.append((name, *f.value, *f.conormal, f.agreement, good))
    return VerificationOutcome("flux-table", _status(ok), {"loops": per_loop},
                               {"flux_tol": cfg.flux_tol, "flux_method_tol": cfg.flux_method_tol},
                               ("loop", "fx", "fy", "fz", "cx", "cy", "cz", "method_gap", "pass"), rows)


def check_contact_angle(scene: Scene, spec: CheckSpec, cfg: VerifyConfig) -> VerificationOutcome:
    names = spec.params.get("spheres", list(scene.spheres))
    ok = True
    rows, per = [], {}
    for name in names:
        sp = scene.spheres[name]
        rho = sp.boundary_radius
        if rho is None and scene.wd is not None:
            rho = _boundary_radius(scene, spec)
        rep = contact_angle_profile(scene.surface, rho, sp.center, sp.radius,
                                    cfg.boundary_samples, cfg.angle_convention)
        good = rep.max_deviation <= cfg.contact_tol
        if sp.angle is not None:
            good &= abs(rep.mean - sp.angle) <= cfg.contact_tol
        ok &= good
        per[name] = {"mean": rep.mean, "max_deviation": rep.max_deviation, "expected": sp.angle,
                     "sphere_residual": rep.sphere_residual, "pass": good}
        rows.extend((name, t, a) for t, a in rep.samples)
    return VerificationOutcome("contact-angle", _status(ok), {"spheres": per, "convention": cfg.angle_convention},
                               {"contact_tol": cfg.contact_tol}, ("sphere", "theta", "angle"), rows)


def check_beta_on_boundary(scene: Scene, spec: CheckSpec, cfg: VerifyConfig) -> VerificationOutcome:
    rho = _boundary_radius(scene, spec)
    sph = next(iter(scene.spheres.values()), SphereSpec((0.0, 0.0, 0.0), 1.0))
    rep = boundary_curvatures(scene.wd, rho, cfg.boundary_samples, sph.center, sph.radius)
    beta = float(np.max(np.abs(rep.column("beta"))))
    gap = float(np.max(np.abs(rep.column("kappa_g") - rep.column("kappa_g_alpha"))))
    ok = beta <= cfg.beta_tol
    # f = z^2 Phi on the circle: for a catenoid this is the constant A, reported as computed
    f = f_function(hopf_differential(scene.wd)).f(rho * np.exp(1j * np.asarray(rep.column("theta"))))
    f_mean = complex(np.mean(f))
    return VerificationOutcome(
        "beta-on-boundary", _status(ok),
        {"boundary_radius": rho, "beta_max": beta, "kappa_g_route_gap": gap,
         "f_mean": f_mean, "f_spread": float(np.max(np.abs(f - f_mean))),
         "kappa_n_range": [float(rep.column("kappa_n").min()), float(rep.column("kappa_n").max())]},
        {"beta_tol": cfg.beta_tol}, rep.CSV_HEADER, rep.to_rows())


def check_index_audit(scene: Scene, spec: CheckSpec, cfg: VerifyConfig) -> VerificationOutcome:
    hd = hopf_differential(scene.wd)
    topo = spec.params.get("topology")
    if topo is None:
        topo = PUNCTURED_CAPILLARY_DISK if scene.wd.domain.puncture_at_zero else "sphere"
    if topo == "sphere":
        audit = index_audit(hd, Closed(0))
    elif topo in (CAPILLARY_DISK, PUNCTURED_CAPILLARY_DISK):
        audit = index_audit(hd, topo, check_boundary=False, beta_tol=cfg.beta_tol,
                            n_boundary=cfg.boundary_samples)
        if audit.beta_max is not None and audit.beta_max > cfg.beta_tol and audit.status == "pass":
            audit.status = "indeterminate"
    else:
        raise SceneError("config", "$.checks.index-audit.topology", f"unknown topology {topo!r}")
    measured = audit.to_json()
    measured["topology"] = topo
    rows = [(json.dumps(e["at"]), e["order"], str(e["index"])) for e in audit.entries]
    return VerificationOutcome("index-audit", audit.status, measured, {"exact": True},
                               ("at", "order", "index"), rows)


def check_total_curvature(scene: Scene, spec: CheckSpec, cfg: VerifyConfig) -> VerificationOutcome:
    cat = scene.entry.expected.get("total_curvature", {}) if scene.entry else {}
    region = spec.params.get("region", cat.get("region"))
    expected = spec.params.get("expected", cat.get("value"))
    if region is None or expected is None:
        raise SceneError("config", "$.checks.total-curvature", "needs 'region' and 'expected'")
    dom = AnnulusDomain(float(region[0]), float(region[1]))
    n = cfg.total_curvature_grid
    tc = total_curvature(scene.wd, dom, n, n)
    rel = abs(tc.value - expected) / abs(expected)
    row = (tc.value, tc.coarse, tc.fine, expected, rel)
    return VerificationOutcome(
        "total-curvature", _status(rel <= cfg.total_curvature_rel),
        {"value": tc.value, "coarse": tc.coarse, "fine": tc.fine, "expected": expected,
         "relative_error": rel, "region": list(region), "grid": [n, n]},
        {"total_curvature_rel": cfg.total_curvature_rel},
        ("value", "coarse", "fine", "expected", "relative_error"), [row])


def check_curvature_line_closure(scene: Scene, spec: CheckSpec, cfg: VerifyConfig) -> VerificationOutcome:
    """Trace from ``start`` for one circumference and measure the closing gap.

    With ``branch`` omitted both families are traced and the one that closes
    better is reported.
    """
    d = scene.wd.domain
    start = complex(*spec.params.get("start", [0.5 * d.r_outer, 0.0]))
    length = float(spec.params.get("arclength", 2 * math.pi * abs(start)))
    branches = [spec.params["branch"]] if "branch" in spec.params else ["principal-1", "principal-2"]
    best = None
    for b in branches:
        tr = trace_line_of_curvature(scene.wd, start, b, length, cfg.trace_step)
        gap = abs(tr.points[-1] - start) if tr.stop_reason == "arclength" else math.inf
        if best is None or gap < best[0]:
            best = (gap, tr)
    gap, tr = best
    radial = float(np.max(np.abs(np.abs(tr.points) - abs(start))))
    s = np.arange(len(tr.points)) * cfg.trace_step
    s[-1] = tr.arclength
    rows = [(float(si), float(p.real), float(p.imag)) for si, p in zip(s, tr.points)]
    return VerificationOutcome(
        "curvature-line-closure", _status(gap <= cfg.closure_tol),
        {"start": start, "branch": tr.branch, "arclength": tr.arclength, "closure_gap": gap,
         "max_radial_deviation": radial, "stop_reason": tr.stop_reason},
        {"closure_tol": cfg.closure_tol}, ("s", "re", "im"), rows)


CHECKS: dict[str, Callable[[Scene, CheckSpec, VerifyConfig], VerificationOutcome]] = {
    "beta-on-boundary": check_beta_on_boundary,
    "contact-angle": check_contact_angle,
    "curvature-line-closure": check_curvature_line_closure,
    "flux-table": check_flux_table,
    "index-audit": check_index_audit,
    "period-conditions": check_period_conditions,
    "total-curvature": check_total_curvature,
}


def run_checks(scene: Scene, cfg: Optional[VerifyConfig] = None) -> list[VerificationOutcome]:
    """Run every check of the scene, ordered by check id.

    A numerical failure inside a check (for instance a boundary off its
    sphere) is reported as a failed outcome rather than aborting the suite.
    """
    cfg = cfg or VerifyConfig()
    out = []
    for spec in sorted(scene.checks, key=lambda c: c.id):
        t0 = time.perf_counter()
        try:
            res = CHECKS[spec.id](scene, spec, cfg)
        except SceneError:
            raise
        except MinsurfError as exc:
            res = VerificationOutcome(spec.id, "fail", {"error": f"{type(exc).__name__}: {exc}"}, {})
        res.wall_time = time.perf_counter() - t0
        out.append(res)
    return out


def build_report(scene: Scene, outcomes: list[VerificationOutcome], cfg: VerifyConfig) -> dict:
    counts = {s: sum(o.status == s for o in outcomes) for s in ("pass", "fail", "indeterminate")}
    return {
        "schema": SCHEMA_VERSION,
        "scene": scene.name,
        "surface": scene.wd.to_json() if scene.wd is not None else {"plane": _jsonable(dataclasses.asdict(scene.surface))},
        "config": _jsonable(dataclasses.asdict(cfg)),
        "checks": [o.to_json() for o in outcomes],
        "summary": counts,
    }


def csv_cell(v) -> str:
    """Round-trippable text for a table entry (numpy scalars written as plain numbers)."""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_outputs(out_dir: str | Path, report: dict, outcomes: list[VerificationOutcome]) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    timing = {o.check: round(o.wall_time, 6) for o in outcomes}
    (out / "timing.json").write_text(json.dumps(timing, indent=2, sort_keys=True) + "\n")
    for o in outcomes:
        if not o.table_header:
            continue
        with open(out / f"{o.check}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(o.table_header)
            for row in o.table:
                w.writerow([csv_cell(v) for v in row])


def run_verification(scene: Scene, out_dir: Optional[str | Path] = None,
                     cfg: Optional[VerifyConfig] = None) -> tuple[list[VerificationOutcome], int]:
    """Run the checks, write report.json, timing.json and CSVs; return (outcomes, exit code)."""
    cfg = cfg or VerifyConfig()
    outcomes = run_checks(scene, cfg)
    report = build_report(scene, outcomes, cfg)
    target = out_dir or scene.output
    if target is not None:
        write_outputs(target, report, outcomes)
    code = 1 if any(o.status == "fail" for o in outcomes) else 0
    return outcomes, code
