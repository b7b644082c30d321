"""Scene-file ingestion.

Scenes are JSON with a required units header; lengths are metres, angles
degrees (converted to radians on ingestion), forces newtons, torques
newton-metres.  See ``data/`` for the bundled scenes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, SceneError
from .grasp import GraspSystem, VirtualInertiaDistribution, solve_virtual_masses
from .rrr import ManipulatorModel, Pose

SCHEMA_VERSION = 1
REQUIRED_UNITS = {"length": "m", "angle": "deg", "force": "N", "torque": "N*m"}

BUNDLED_SCENES = ("nokleby_pose.json", "modified_ee.json", "underactuated_4rrr.json")


@dataclass(frozen=True)
class Scene:
    """A parsed scene: geometry, pose, actuation, virtual inertia, task."""

    model: ManipulatorModel
    pose: Pose
    branches: tuple[int, ...]
    tau_max: float
    actuated_per_leg: tuple[int, ...]
    virtual_masses: np.ndarray | None  # None means "solve"
    virtual_total_mass: float
    wrench: np.ndarray | None
    mz: float
    dirs: int
    raw: dict = field(repr=False, compare=False, default_factory=dict)

    def virtual_distribution(self, state_r: np.ndarray) -> VirtualInertiaDistribution:
        """Virtual masses for the attachment points in the base frame.

        Uses the explicit masses when the scene gives them, otherwise solves
        the equivalence constraints for the current attachment positions.
        """
        system = GraspSystem(state_r)
        if self.virtual_masses is None:
            return solve_virtual_masses(system, self.virtual_total_mass)
        m = self.virtual_masses
        total = float(np.sum(m))
        J_o = float(np.sum(m * np.einsum("ij,ij->i", state_r, state_r)))
        return VirtualInertiaDistribution(
            masses=m,
            inertias=np.zeros(m.size),
            positions=state_r,
            total_mass=total,
            total_inertia=J_o,
        )


def _require(mapping: dict, key: str, context: str):
    if key not in mapping:
        raise SceneError(f"{context}: missing required field {key!r}")
    return mapping[key]


def parse_scene(data: dict) -> Scene:
    """Validate a scene dictionary and convert it to model objects."""
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    version = _require(data, "schema_version", "scene")
    if version != SCHEMA_VERSION:
        raise SceneError(f"unsupported schema_version {version!r}")
    units = _require(data, "units", "scene")
    for key, expected in REQUIRED_UNITS.items():
        if units.get(key) != expected:
            raise SceneError(f"units.{key} must be {expected!r}, got {units.get(key)!r}")

    geo = _require(data, "geometry", "scene")
    try:
        model = ManipulatorModel(
            base_points=np.asarray(_require(geo, "base_points", "geometry"), dtype=float),
            link_lengths=np.asarray(_require(geo, "link_lengths", "geometry"), dtype=float),
            attachments=np.asarray(_require(geo, "attachments", "geometry"), dtype=float),
        )
    except (ValueError, TypeError, DimensionMismatch) as exc:
        raise SceneError(f"geometry: {exc}") from exc
    branches = tuple(int(b) for b in geo.get("elbow_branches", [-1] * model.n_legs))
    if len(branches) != model.n_legs or any(b not in (-1, 1) for b in branches):
        raise SceneError("geometry.elbow_branches must hold one sign (+1/-1) per leg")

    pose_block = _require(data, "pose", "scene")
    try:
        pose = Pose(
            x=float(_require(pose_block, "x", "pose")),
            y=float(_require(pose_block, "y", "pose")),
            phi=float(np.deg2rad(float(pose_block.get("phi", 0.0)))),
        )
    except (ValueError, TypeError) as exc:
        raise SceneError(f"pose: {exc}") from exc

    act = _require(data, "actuation", "scene")
    tau_max = float(_require(act, "tau_max", "actuation"))
    if tau_max <= 0:
        raise SceneError("actuation.tau_max must be positive")
    counts = tuple(int(c) for c in _require(act, "actuated_per_leg", "actuation"))
    if len(counts) != model.n_legs:
        raise SceneError("actuation.actuated_per_leg must name every leg")

    virt = data.get("virtual_inertia", "solve")
    if virt == "solve":
        masses, total = None, 1.0
    elif isinstance(virt, dict):
        masses = np.asarray(_require(virt, "masses", "virtual_inertia"), dtype=float)
        if masses.size != model.n_legs:
            raise SceneError("virtual_inertia.masses must hold one mass per leg")
        total = float(virt.get("total_mass", float(np.sum(masses))))
    else:
        raise SceneError("virtual_inertia must be \"solve\" or an object with masses")

    task = data.get("task", {})
    wrench = task.get("wrench")
    if wrench is not None:
        wrench = np.asarray(wrench, dtype=float).ravel()
        if wrench.size != 3:
            raise SceneError("task.wrench must be [fx, fy, mz]")
    mz = float(task.get("mz", 0.0))
    dirs = int(task.get("dirs", 720))

    return Scene(
        model=model,
        pose=pose,
        branches=branches,
        tau_max=tau_max,
        actuated_per_leg=counts,
        virtual_masses=masses,
        virtual_total_mass=total,
        wrench=wrench,
        mz=mz,
        dirs=dirs,
        raw=data,
    )


def load_scene(path: str | Path) -> Scene:
    """Load and parse a scene file; bundled scene names resolve to the
    packaged copies when no such file exists on disk."""
    p = Path(path)
    if not p.exists() and p.name in BUNDLED_SCENES and str(p) == p.name:
        return parse_scene(json.loads(bundled_scene_text(p.name)))
    try:
        text = p.read_text()
    except OSError as exc:
        raise SceneError(f"cannot read scene file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene file {path} is not valid JSON: {exc}") from exc
    return parse_scene(data)


def bundled_scene_text(name: str) -> str:
    """Raw JSON text of a scene shipped with the package."""
    if name not in BUNDLED_SCENES:
        raise SceneError(f"unknown bundled scene {name!r}; have {BUNDLED_SCENES}")
    return resources.files("partorq").joinpath("data", name).read_text()


def load_bundled_scene(name: str) -> Scene:
    return parse_scene(json.loads(bundled_scene_text(name)))
