import json

import numpy as np
import pytest

from partorq import cli, verification

TAU_MIN_TEXT = "2.290,1.895,-4.200,1.747,1.909,-3.641"
TAU_E_TEXT = "3.486,3.954,-3.583,0.246,0.096,-4.200"


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_synth_equilibrating_reproduces_case_study(capsys):
    code, out, _ = run_cli(
        capsys, "synth", "--scene", "nokleby_pose.json", "--method", "equilibrating"
    )
    assert code == 0
    report = json.loads(out)
    tau = np.array(report["results"]["equilibrating"]["tau"])
    assert np.max(np.abs(tau - verification.TAU_E)) <= 1e-3
    diag = report["results"]["equilibrating"]["diagnostics"]
    assert diag["interaction_residual_max"] <= 1e-9


def test_synth_zero_wrench(capsys):
    code, out, _ = run_cli(
        capsys,
        "synth", "--scene", "nokleby_pose.json",
        "--method", "min-norm", "--wrench", "0,0,0",
    )
    assert code == 0
    report = json.loads(out)
    assert np.allclose(report["results"]["min-norm"]["tau"], 0.0)


def test_synth_underactuated_exits_4(capsys):
    code, _, err = run_cli(
        capsys, "synth", "--scene", "underactuated_4rrr.json", "--method", "equilibrating"
    )
    assert code == 4
    assert "under-actuated" in err


def test_synth_unreachable_exits_3(capsys, tmp_path):
    from partorq.scenes import bundled_scene_text

    data = json.loads(bundled_scene_text("nokleby_pose.json"))
    data["pose"]["x"] = 5.0
    path = tmp_path / "far.json"
    path.write_text(json.dumps(data))
    code, _, err = run_cli(capsys, "synth", "--scene", str(path))
    assert code == 3
    assert "leg" in err


def test_synth_bad_scene_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{}")
    code, _, err = run_cli(capsys, "synth", "--scene", str(path))
    assert code == 2
    assert "error:" in err


def test_synth_report_scene_roundtrips(capsys):
    from partorq.scenes import bundled_scene_text, parse_scene

    code, out, _ = run_cli(capsys, "synth", "--scene", "nokleby_pose.json")
    assert code == 0
    report = json.loads(out)
    assert report["scene"] == json.loads(bundled_scene_text("nokleby_pose.json"))
    parse_scene(report["scene"])  # re-parses cleanly


def test_synth_deterministic_output(capsys):
    _, out1, _ = run_cli(capsys, "synth", "--scene", "nokleby_pose.json")
    _, out2, _ = run_cli(capsys, "synth", "--scene", "nokleby_pose.json")
    assert out1 == out2


def test_analyze_min_norm_torques_squeeze(capsys):
    code, out, _ = run_cli(
        capsys, "analyze", "--scene", "nokleby_pose.json", "--torques", TAU_MIN_TEXT
    )
    assert code == 0
    report = json.loads(out)
    residuals = [abs(r["residual"]) for r in report["results"]["interaction_residuals"]]
    assert max(residuals) > 0.1
    assert report["results"]["constraint_wrench_norm"] > 0.1


def test_analyze_equilibrating_torques_clean(capsys):
    code, out, _ = run_cli(
        capsys, "analyze", "--scene", "nokleby_pose.json", "--torques", TAU_E_TEXT
    )
    assert code == 0
    report = json.loads(out)
    residuals = [abs(r["residual"]) for r in report["results"]["interaction_residuals"]]
    # inputs carry 3-decimal print rounding, so the residuals are small, not zero
    assert max(residuals) < 0.01


def test_analyze_zero_torques(capsys):
    code, out, _ = run_cli(
        capsys, "analyze", "--scene", "nokleby_pose.json", "--torques", "0,0,0,0,0,0"
    )
    assert code == 0
    report = json.loads(out)
    assert np.allclose(report["results"]["wrench_realized"], 0.0)
    assert np.allclose(report["results"]["forces_per_leg"], 0.0)


def test_analyze_wrong_torque_count_exits_2(capsys):
    code, _, err = run_cli(
        capsys, "analyze", "--scene", "nokleby_pose.json", "--torques", "1,2,3"
    )
    assert code == 2
    assert "expected 6 values" in err


def test_polygon_artifacts(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys,
        "polygon", "--scene", "nokleby_pose.json",
        "--dirs", "16", "--format", "csv,svg,off", "--out", str(tmp_path),
    )
    assert code == 0
    report = json.loads(out)
    names = {p.split("/")[-1] for p in report["artifacts"]}
    assert names == {
        "nokleby_pose_min-norm.csv",
        "nokleby_pose_equilibrating.csv",
        "nokleby_pose_slice.csv",
        "nokleby_pose_polygons.svg",
        "nokleby_pose_zonotope.off",
    }
    csv = (tmp_path / "nokleby_pose_min-norm.csv").read_text()
    assert csv.splitlines()[0] == "fx,fy"
    assert len(csv.splitlines()) == 17


def test_polygon_four_directions(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys,
        "polygon", "--scene", "nokleby_pose.json",
        "--dirs", "4", "--out", str(tmp_path),
    )
    assert code == 0
    report = json.loads(out)
    assert report["results"]["min-norm"]["vertices"] == 4
    csv = (tmp_path / "nokleby_pose_min-norm.csv").read_text()
    assert len(csv.splitlines()) == 5


def test_polygon_intersection_count_reported(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys,
        "polygon", "--scene", "nokleby_pose.json",
        "--dirs", "720", "--out", str(tmp_path),
    )
    assert code == 0
    report = json.loads(out)
    assert report["results"]["intersections"]["count"] == 12


def test_polygon_moment_out_of_range_exits_3(capsys, tmp_path):
    code, _, err = run_cli(
        capsys,
        "polygon", "--scene", "nokleby_pose.json",
        "--methods", "", "--mz", "1e6", "--out", str(tmp_path),
    )
    assert code == 3
    assert "intersect" in err


def test_polygon_unknown_format_exits_2(capsys, tmp_path):
    code, _, err = run_cli(
        capsys,
        "polygon", "--scene", "nokleby_pose.json",
        "--format", "stl", "--out", str(tmp_path),
    )
    assert code == 2
    assert "format" in err


def test_polygon_deterministic_files(capsys, tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for out in (a, b):
        run_cli(
            capsys,
            "polygon", "--scene", "nokleby_pose.json",
            "--dirs", "16", "--out", str(out),
        )
    for name in ("nokleby_pose_min-norm.csv", "nokleby_pose_slice.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_verify_paper_suite_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "paper")
    assert code == 0
    assert out.count("[PASS]") == 10
    assert "[FAIL]" not in out


def test_verify_unknown_suite_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "--suite", "unknown"])
    assert info.value.code == 2


def test_verify_detects_weighting_mutation(capsys, monkeypatch):
    # substituting the unweighted metric must fail the equilibrating criterion
    from partorq import synthesis

    monkeypatch.setattr(synthesis, "equilibrating_weighting", lambda state: np.eye(6))
    row = verification.criterion_equilibrating()
    assert not row.passed


def test_synth_general_with_null_shift(capsys):
    code, out, _ = run_cli(
        capsys,
        "synth", "--scene", "nokleby_pose.json",
        "--method", "general", "--z", "1,0,0,0,0,0",
    )
    assert code == 0
    report = json.loads(out)
    realized = report["results"]["general"]["wrench_realized"]
    assert np.allclose(realized, verification.H_O, atol=1e-4)


def test_polygon_with_manipulating_method(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys,
        "polygon", "--scene", "modified_ee.json",
        "--methods", "equilibrating,manipulating", "--dirs", "24", "--out", str(tmp_path),
    )
    assert code == 0
    report = json.loads(out)
    assert report["results"]["manipulating"]["vertices"] == 24
    # non-uniform virtual masses: the two scaling polygons genuinely differ
    eq = np.loadtxt(tmp_path / "modified_ee_equilibrating.csv", skiprows=1, delimiter=",")
    ma = np.loadtxt(tmp_path / "modified_ee_manipulating.csv", skiprows=1, delimiter=",")
    assert np.max(np.abs(eq - ma)) > 0.1


def test_rotated_pose_scene(capsys, tmp_path):
    from partorq.scenes import bundled_scene_text

    data = json.loads(bundled_scene_text("nokleby_pose.json"))
    data["pose"]["phi"] = 15.0  # degrees in the scene file
    path = tmp_path / "rotated.json"
    path.write_text(json.dumps(data))
    code, out, _ = run_cli(capsys, "synth", "--scene", str(path), "--method", "equilibrating")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["equilibrating"]["diagnostics"]["interaction_residual_max"] <= 1e-9


def test_inconsistent_virtual_masses_exit_3(capsys, tmp_path):
    from partorq.scenes import bundled_scene_text

    data = json.loads(bundled_scene_text("modified_ee.json"))
    data["virtual_inertia"] = {"masses": [0.5, 0.3, 0.2]}  # CoM equivalence fails
    path = tmp_path / "badmass.json"
    path.write_text(json.dumps(data))
    code, _, err = run_cli(capsys, "synth", "--scene", str(path), "--method", "manipulating")
    assert code == 3
    assert "CoM" in err or "virtual" in err


def test_cross_process_determinism(tmp_path):
    import subprocess
    import sys

    cmd = [sys.executable, "-m", "partorq.cli", "synth", "--scene", "nokleby_pose.json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a  # byte-identical JSON across interpreter runs


def test_out_flag_writes_report(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys, "synth", "--scene", "nokleby_pose.json", "--out", str(out_file)
    )
    assert code == 0
    assert out == ""
    report = json.loads(out_file.read_text())
    assert report["command"] == "synth"
