import json

import numpy as np
import pytest

from partorq.errors import SceneError
from partorq.scenes import (
    BUNDLED_SCENES,
    bundled_scene_text,
    load_bundled_scene,
    load_scene,
    parse_scene,
)


def scene_dict():
    return json.loads(bundled_scene_text("nokleby_pose.json"))


def test_bundled_scenes_parse():
    for name in BUNDLED_SCENES:
        scene = load_bundled_scene(name)
        assert scene.tau_max == 4.2
        assert scene.model.n_legs == len(scene.actuated_per_leg)


def test_pose_angle_converted_to_radians():
    data = scene_dict()
    data["pose"]["phi"] = 90.0
    scene = parse_scene(data)
    assert scene.pose.phi == pytest.approx(np.pi / 2)


def test_missing_geometry_rejected():
    data = scene_dict()
    del data["geometry"]
    with pytest.raises(SceneError):
        parse_scene(data)


def test_malformed_geometry_is_a_parse_error():
    data = scene_dict()
    data["geometry"]["base_points"] = [[0.0, 0.0]]  # too few legs
    with pytest.raises(SceneError):
        parse_scene(data)


def test_wrong_units_rejected():
    data = scene_dict()
    data["units"]["length"] = "mm"
    with pytest.raises(SceneError):
        parse_scene(data)


def test_unknown_schema_version_rejected():
    data = scene_dict()
    data["schema_version"] = 99
    with pytest.raises(SceneError):
        parse_scene(data)


def test_bad_branch_signs_rejected():
    data = scene_dict()
    data["geometry"]["elbow_branches"] = [0, 1, -1]
    with pytest.raises(SceneError):
        parse_scene(data)


def test_explicit_virtual_masses():
    data = scene_dict()
    data["virtual_inertia"] = {"masses": [0.25, 0.25, 0.5]}
    scene = parse_scene(data)
    assert np.allclose(scene.virtual_masses, [0.25, 0.25, 0.5])
    virt = scene.virtual_distribution(np.array([[1.0, 0.0], [-0.5, 0.5], [-0.5, -0.5]]))
    assert virt.total_mass == pytest.approx(1.0)


def test_solve_directive_gives_uniform_masses(nokleby_state):
    scene = load_bundled_scene("nokleby_pose.json")
    virt = scene.virtual_distribution(nokleby_state.r)
    assert np.allclose(virt.masses, 1 / 3, atol=1e-12)


def test_raw_echo_roundtrips():
    data = scene_dict()
    scene = parse_scene(data)
    again = parse_scene(scene.raw)
    assert np.array_equal(again.model.base_points, scene.model.base_points)
    assert np.array_equal(again.model.attachments, scene.model.attachments)
    assert again.pose == scene.pose
    assert again.tau_max == scene.tau_max


def test_load_scene_from_disk(tmp_path):
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(scene_dict()))
    scene = load_scene(path)
    assert scene.model.n_legs == 3


def test_load_scene_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(SceneError):
        load_scene(path)


def test_load_scene_missing_file(tmp_path):
    with pytest.raises(SceneError):
        load_scene(tmp_path / "absent.json")
