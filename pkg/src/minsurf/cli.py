"""Command line: ``minsurf {verify, mesh, flux, indices, trace, curvature, catalog list}``.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import catalog
from .errors import MinsurfError
from .geometry import BRANCHES, boundary_curvatures, flux, trace_line_of_curvature
from .mesh import export_mesh
from .scene import (
    CheckSpec, Scene, SceneError, VerifyConfig, check_index_audit, csv_cell, load_scene,
    load_scene_file, run_verification,
)
from .weierstrass import generator_loops

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--scene", help="scene JSON file")
    p.add_argument("--surface", help="catalog name, used when no scene is given")
    p.add_argument("--out", help="output directory")
    p.add_argument("--samples", type=int, help="boundary and flux sample count")
    p.add_argument("--tol", type=float, help="override every absolute tolerance")
    p.add_argument("--angle-convention", choices=("normal", "supplement"))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="minsurf", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser("verify", parents=[common], help="run the scene's checks and write a report")
    m = sub.add_parser("mesh", parents=[common], help="export an OBJ mesh")
    m.add_argument("--nr", type=int, default=16)
    m.add_argument("--ntheta", type=int, default=64)
    m.add_argument("--r-min", type=float)
    m.add_argument("--r-max", type=float)
    f = sub.add_parser("flux", parents=[common], help="flux vector of every scene loop")
    f.add_argument("--loop", action="append", help="restrict to named loops")
    i = sub.add_parser("indices", parents=[common], help="rotation-index audit")
    i.add_argument("--topology", choices=("sphere", "capillary-disk", "punctured-capillary-disk"))
    t = sub.add_parser("trace", parents=[common], help="trace a line of curvature to CSV")
    t.add_argument("--start", required=True, help="start point as re,im")
    t.add_argument("--branch", choices=BRANCHES, default="principal-1")
    t.add_argument("--arclength", type=float, default=1.0)
    t.add_argument("--step", type=float, default=1e-3)
    c = sub.add_parser("curvature", parents=[common], help="boundary curvatures to CSV")
    c.add_argument("--radius", type=float, help="boundary circle |z| (default: domain boundary)")
    c.add_argument("--sphere", default="0,0,0,1", help="cx,cy,cz,R of the reference sphere")
    cat = sub.add_parser("catalog", parents=[common], help="catalog utilities")
    cat.add_argument("action", choices=("list",))
    return parser


def _scene_from_args(args) -> Scene:
    if args.scene:
        return load_scene_file(args.scene)
    if args.surface:
        return load_scene(json.dumps({"surface": args.surface}))
    raise SceneError("config", "$", "give --scene or --surface")


def _config(args) -> VerifyConfig:
    return VerifyConfig().with_overrides(args.samples, args.tol, args.angle_convention)


def _out_dir(args, scene: Scene) -> Path:
    out = Path(args.out or scene.output or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require_wd(scene: Scene):
    if scene.wd is None:
        raise SceneError("config", "$.surface", "this command needs Weierstrass data")
    return scene.wd


def _cmd_verify(args) -> int:
    scene = _scene_from_args(args)
    cfg = _config(args)
    outcomes, code = run_verification(scene, args.out or scene.output or "out", cfg)
    for o in outcomes:
        print(f"{o.check:24s} {o.status}")
    return code


def _cmd_mesh(args) -> int:
    scene = _scene_from_args(args)
    text = export_mesh(scene.surface, args.nr, args.ntheta, args.r_min, args.r_max)
    path = _out_dir(args, scene) / f"{scene.name.replace(':', '_')}.obj"
    path.write_text(text)
    print(path)
    return EXIT_OK


def _cmd_flux(args) -> int:
    scene = _scene_from_args(args)
    wd = _require_wd(scene)
    cfg = _config(args)
    loops = dict(scene.loops) or {f"generator-{i}": l for i, l in enumerate(generator_loops(wd))}
    if args.loop:
        missing = [n for n in args.loop if n not in loops]
        if missing:
            raise SceneError("dangling-reference", "--loop", f"unknown loops {missing}")
        loops = {n: loops[n] for n in args.loop}
    rows = []
    for name, loop in loops.items():
        f = flux(wd, loop, cfg.flux_samples)
        rows.append({"loop": name, "value": f.value.tolist(), "conormal": f.conormal.tolist(),
                     "method_gap": f.agreement})
    print(json.dumps(rows, indent=2))
    return EXIT_OK


def _cmd_indices(args) -> int:
    scene = _scene_from_args(args)
    _require_wd(scene)
    params = {"topology": args.topology} if args.topology else {}
    res = check_index_audit(scene, CheckSpec("index-audit", params), _config(args))
    print(json.dumps(res.measured, indent=2))
    return EXIT_OK if res.status != "fail" else EXIT_FAIL


def _parse_complex(text: str) -> complex:
    try:
        re_, im_ = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise SceneError("config", "--start", "expected re,im") from exc
    return complex(re_, im_)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows([csv_cell(v) for v in row] for row in rows)


def _cmd_trace(args) -> int:
    scene = _scene_from_args(args)
    wd = _require_wd(scene)
    tr = trace_line_of_curvature(wd, _parse_complex(args.start), args.branch, args.arclength, args.step)
    s = np.minimum(np.arange(len(tr.points)) * args.step, tr.arclength)
    path = _out_dir(args, scene) / "trace.csv"
    _write_csv(path, ("s", "re", "im"), [(a, p.real, p.imag) for a, p in zip(s, tr.points)])
    print(f"{path} ({len(tr.points)} points, stop: {tr.stop_reason})")
    return EXIT_OK


def _cmd_curvature(args) -> int:
    scene = _scene_from_args(args)
    wd = _require_wd(scene)
    d = wd.domain
    rho = args.radius or (d.boundary_circle if d.boundary_circle is not None else d.r_outer)
    try:
        cx, cy, cz, R = (float(v) for v in args.sphere.split(","))
    except ValueError as exc:
        raise SceneError("config", "--sphere", "expected cx,cy,cz,R") from exc
    cfg = _config(args)
    rep = boundary_curvatures(wd, rho, cfg.boundary_samples, (cx, cy, cz), R)
    path = _out_dir(args, scene) / "boundary_curvatures.csv"
    _write_csv(path, rep.CSV_HEADER, rep.to_rows())
    kn = rep.column("kappa_n")
    gap = float(np.max(np.abs(rep.column("kappa_g") - rep.column("kappa_g_alpha"))))
    print(f"{path}: kappa_n in [{kn.min():.12g}, {kn.max():.12g}], kappa_g route gap {gap:.3g}")
    return EXIT_OK


def _cmd_catalog(args) -> int:
    for name in catalog.CATALOG_NAMES:
        print(name)
    return EXIT_OK


COMMANDS = {"verify": _cmd_verify, "mesh": _cmd_mesh, "flux": _cmd_flux, "indices": _cmd_indices,
            "trace": _cmd_trace, "curvature": _cmd_curvature, "catalog": _cmd_catalog}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return COMMANDS[args.verb](args)
    except SceneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MinsurfError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
