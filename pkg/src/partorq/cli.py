"""Command-line front end.

Subcommands
-----------
synth    synthesize a torque vector for a scene's task wrench
polygon  emit feasible-force polygons (scaling methods + exact slice)
analyze  decompose a given torque vector (forces, residuals, internal loads)
verify   run the bundled case-study reproduction suite

Exit codes: 0 success, 1 verify-suite failure, 2 bad usage or scene parse
error, 3 kinematic error (unreachable/singular/empty slice), 4 static
determinacy failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import synthesis, verification
from .errors import PartorqError, SceneError
from .grasp import check_manipulating, interaction_residuals
from .rrr import applied_forces, forward_force, inverse_kinematics, static_determinacy_check
from .scenes import Scene, load_scene
from .wrenchspace import (
    TorqueBox,
    feasible_zonotope,
    polygon_scaling_method,
    polygons_to_svg,
    polygon_to_csv,
    polygon_intersections,
    slice_zonotope,
    zonotope_to_off,
)

EXIT_OK = 0
EXIT_SUITE_FAIL = 1
EXIT_USAGE = 2
EXIT_KINEMATIC = 3
EXIT_DETERMINACY = 4

SYNTH_METHODS = (synthesis.MIN_NORM, synthesis.EQUILIBRATING, synthesis.MANIPULATING,
                 synthesis.GENERAL)
POLYGON_METHODS = (synthesis.MIN_NORM, synthesis.EQUILIBRATING, synthesis.MANIPULATING)


def _csv_floats(text: str, count: int, flag: str) -> np.ndarray:
    try:
        vals = np.array([float(t) for t in text.replace(" ", "").split(",") if t != ""])
    except ValueError as exc:
        raise SceneError(f"{flag}: expected comma-separated numbers, got {text!r}") from exc
    if vals.size != count:
        raise SceneError(f"{flag}: expected {count} values, got {vals.size}")
    return vals


def _sig6(value):
    """Round report numbers to 6 significant digits, recursively."""
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.6g}")
    if isinstance(value, (int, np.integer, str, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {k: _sig6(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_sig6(v) for v in np.asarray(value).tolist()] if isinstance(
            value, np.ndarray
        ) else [_sig6(v) for v in value]
    return value


def _emit_report(report: dict, out: str | None) -> None:
    # allow_nan=False: every numeric report field must be finite
    text = json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _gate_determinacy(scene: Scene) -> None:
    check = static_determinacy_check(scene.model, scene.actuated_per_leg)
    if not check:
        raise _DeterminacyFailure(check.message())


class _DeterminacyFailure(PartorqError):
    pass


def _solved_scene(scene: Scene):
    state = inverse_kinematics(scene.model, scene.pose, scene.branches)
    return state


def _result_dict(res: synthesis.SynthesisResult, requested) -> dict:
    return {
        "method": res.method,
        "tau": list(res.tau),
        "wrench_requested": list(np.asarray(requested, dtype=float)),
        "wrench_realized": list(res.wrench),
        "forces_per_leg": [list(f) for f in res.forces.reshape(-1, 2)],
        "diagnostics": {
            "interaction_residual_max": res.interaction_max,
            "constraint_wrench_norm": res.constraint_norm,
        },
    }


def _map_diagnostics(state) -> dict:
    A = state.wrench_map
    sv = np.linalg.svd(A, compute_uv=False)
    return {
        "wrench_map_rank": int(np.sum(sv > 1e-9 * sv[0])),
        "wrench_map_condition": float(sv[0] / sv[-1]),
    }


def cmd_synth(args) -> int:
    scene = load_scene(args.scene)
    _gate_determinacy(scene)
    state = _solved_scene(scene)
    if args.wrench is not None:
        h_o = _csv_floats(args.wrench, 3, "--wrench")
    elif scene.wrench is not None:
        h_o = scene.wrench
    else:
        raise SceneError("no task wrench: give --wrench or a task.wrench block")
    virt = scene.virtual_distribution(state.r)
    if args.method == synthesis.MIN_NORM:
        res = synthesis.min_torque_norm(state, h_o, virt=virt)
    elif args.method == synthesis.EQUILIBRATING:
        res = synthesis.equilibrating_torques(state, h_o, virt=virt)
    elif args.method == synthesis.MANIPULATING:
        res = synthesis.manipulating_torques(state, virt, h_o)
    else:
        z = _csv_floats(args.z, 2 * scene.model.n_legs, "--z") if args.z else None
        res = synthesis.general_resolution(state, h_o, z=z, virt=virt)
    report = {
        "command": "synth",
        "scene": scene.raw,
        "results": _sig6({res.method: _result_dict(res, h_o)}),
        "diagnostics": _sig6(_map_diagnostics(state)),
        "artifacts": [],
    }
    _emit_report(report, args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    scene = load_scene(args.scene)
    _gate_determinacy(scene)
    state = _solved_scene(scene)
    tau = _csv_floats(args.torques, 2 * scene.model.n_legs, "--torques")
    h_o = forward_force(state, tau)
    forces = applied_forces(state, tau)
    system = state.grasp_system()
    virt = scene.virtual_distribution(state.r)
    h_c = check_manipulating(system, virt, forces, h_o)
    residuals = [
        {"pair": [i, j], "residual": r} for (i, j), r in interaction_residuals(forces, system)
    ]
    results = {
        "tau": list(tau),
        "wrench_realized": list(h_o),
        "forces_per_leg": [list(f) for f in forces.reshape(-1, 2)],
        "interaction_residuals": residuals,
        "constraint_wrenches_per_leg": [list(f) for f in h_c.reshape(-1, 2)],
        "constraint_wrench_norm": float(np.linalg.norm(h_c)),
    }
    report = {
        "command": "analyze",
        "scene": scene.raw,
        "results": _sig6(results),
        "diagnostics": _sig6(_map_diagnostics(state)),
        "artifacts": [],
    }
    _emit_report(report, args.out)
    return EXIT_OK


def cmd_polygon(args) -> int:
    scene = load_scene(args.scene)
    _gate_determinacy(scene)
    state = _solved_scene(scene)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in POLYGON_METHODS:
            raise SceneError(f"unknown polygon method {m!r}; choose from {POLYGON_METHODS}")
    formats = {f.strip() for f in args.format.split(",") if f.strip()}
    unknown = formats - {"json", "csv", "svg", "off"}
    if unknown:
        raise SceneError(f"unknown format(s) {sorted(unknown)}")
    mz = args.mz if args.mz is not None else scene.mz
    n_dirs = args.dirs if args.dirs is not None else scene.dirs
    box = TorqueBox(scene.tau_max)
    virt = scene.virtual_distribution(state.r)
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.scene).stem

    layers: dict[str, object] = {}
    for m in methods:
        layers[m] = polygon_scaling_method(
            state, box, mz=mz, n_dirs=n_dirs, inverse_choice=m, virt=virt
        )
    zono = feasible_zonotope(state, box)
    layers["slice"] = slice_zonotope(zono, mz)

    artifacts: list[str] = []
    if "csv" in formats:
        for name, poly in layers.items():
            path = outdir / f"{stem}_{name}.csv"
            path.write_text(polygon_to_csv(poly))
            artifacts.append(str(path))
    if "svg" in formats:
        path = outdir / f"{stem}_polygons.svg"
        path.write_text(polygons_to_svg(layers))
        artifacts.append(str(path))
    if "off" in formats:
        path = outdir / f"{stem}_zonotope.off"
        path.write_text(zonotope_to_off(zono))
        artifacts.append(str(path))

    results = {
        name: {"vertices": len(poly.vertices), "mz": poly.mz} for name, poly in layers.items()
    }
    if len(methods) >= 2:
        inter = polygon_intersections(layers[methods[0]], layers[methods[1]])
        results["intersections"] = {
            "methods": methods[:2],
            "count": len(inter),
            "points": [list(p) for p in inter.points],
            "shared_boundary": inter.shared_boundary,
        }
    report = {
        "command": "polygon",
        "scene": scene.raw,
        "results": _sig6(results),
        "diagnostics": _sig6(_map_diagnostics(state)),
        "artifacts": sorted(artifacts),
    }
    _emit_report(report, None)
    return EXIT_OK


def cmd_verify(args) -> int:
    rows = verification.run_paper_suite()
    for row in rows:
        print(row.line())
    failed = [r for r in rows if not r.passed]
    print(f"{len(rows) - len(failed)}/{len(rows)} criteria passed")
    return EXIT_OK if not failed else EXIT_SUITE_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="partorq",
        description="Torque-distribution synthesis and wrench-capability analysis "
        "for redundantly actuated planar parallel manipulators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="synthesize joint torques for a task wrench")
    synth.add_argument("--scene", required=True, help="scene file (JSON)")
    synth.add_argument("--method", choices=SYNTH_METHODS, default=synthesis.EQUILIBRATING)
    synth.add_argument("--wrench", help="task wrench fx,fy,mz (overrides the scene)")
    synth.add_argument("--z", help="null-space shift for --method general (2n values)")
    synth.add_argument("--out", help="write the JSON report here instead of stdout")
    synth.set_defaults(func=cmd_synth)

    poly = sub.add_parser("polygon", help="feasible-force polygons and zonotope slice")
    poly.add_argument("--scene", required=True)
    poly.add_argument("--methods", default="min-norm,equilibrating",
                      help="comma list of scaling methods")
    poly.add_argument("--mz", type=float, default=None, help="prescribed moment (N*m)")
    poly.add_argument("--dirs", type=int, default=None, help="directions in the sweep")
    poly.add_argument("--format", default="csv", help="comma list of json,csv,svg,off")
    poly.add_argument("--out", help="output directory for artifacts")
    poly.set_defaults(func=cmd_polygon)

    analyze = sub.add_parser("analyze", help="decompose a given torque vector")
    analyze.add_argument("--scene", required=True)
    analyze.add_argument("--torques", required=True, help="joint torques t11,t21,... (N*m)")
    analyze.add_argument("--out", help="write the JSON report here instead of stdout")
    analyze.set_defaults(func=cmd_analyze)

    verify = sub.add_parser("verify", help="run the case-study reproduction suite")
    verify.add_argument("--suite", choices=("paper",), default="paper")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DeterminacyFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DETERMINACY
    except (SceneError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PartorqError as exc:  # unreachable pose, singular leg, empty slice, ...
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_KINEMATIC


if __name__ == "__main__":
    sys.exit(main())
