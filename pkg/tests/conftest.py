import numpy as np
import pytest

from partorq.rrr import inverse_kinematics
from partorq.scenes import load_bundled_scene


@pytest.fixture(scope="session")
def nokleby_scene():
    return load_bundled_scene("nokleby_pose.json")


@pytest.fixture(scope="session")
def nokleby_state(nokleby_scene):
    return inverse_kinematics(nokleby_scene.model, nokleby_scene.pose, nokleby_scene.branches)


@pytest.fixture(scope="session")
def modified_scene():
    return load_bundled_scene("modified_ee.json")


@pytest.fixture(scope="session")
def modified_state(modified_scene):
    return inverse_kinematics(modified_scene.model, modified_scene.pose, modified_scene.branches)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
