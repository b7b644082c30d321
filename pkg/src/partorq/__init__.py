"""Torque-distribution synthesis and wrench-capability analysis for
redundantly actuated planar parallel manipulators."""

from . import errors
from .grasp import (
    GraspSystem,
    LmieSet,
    RigidBodyInertia,
    VirtualInertiaDistribution,
    build_grasp_matrix,
    check_dynamic_equivalence,
    check_manipulating,
    equilibrating_distribution,
    interaction_residuals,
    kinematic_constraint_system,
    lmie_unconstrained_accelerations,
    manipulating_distribution,
    rigid_body_acceleration,
    solve_virtual_masses,
)
from .linalg import mp_pinv, nullspace_projector, solve_linear, weighted_pinv
from .rrr import (
    ManipulatorModel,
    ManipulatorState,
    Pose,
    applied_forces,
    forward_force,
    inverse_kinematics,
    static_determinacy_check,
    transmission_weight,
)
from .scenes import Scene, load_bundled_scene, load_scene
from .synthesis import (
    SynthesisResult,
    equilibrating_torques,
    general_resolution,
    manipulating_torques,
    min_torque_norm,
)
from .wrenchspace import (
    ForcePolygon,
    TorqueBox,
    WrenchZonotope,
    feasible_zonotope,
    polygon_intersections,
    polygon_scaling_method,
    scaling_factor,
    slice_zonotope,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "GraspSystem",
    "LmieSet",
    "RigidBodyInertia",
    "VirtualInertiaDistribution",
    "build_grasp_matrix",
    "check_dynamic_equivalence",
    "check_manipulating",
    "equilibrating_distribution",
    "interaction_residuals",
    "kinematic_constraint_system",
    "lmie_unconstrained_accelerations",
    "manipulating_distribution",
    "rigid_body_acceleration",
    "solve_virtual_masses",
    "mp_pinv",
    "nullspace_projector",
    "solve_linear",
    "weighted_pinv",
    "ManipulatorModel",
    "ManipulatorState",
    "Pose",
    "applied_forces",
    "forward_force",
    "inverse_kinematics",
    "static_determinacy_check",
    "transmission_weight",
    "Scene",
    "load_bundled_scene",
    "load_scene",
    "SynthesisResult",
    "equilibrating_torques",
    "general_resolution",
    "manipulating_torques",
    "min_torque_norm",
    "ForcePolygon",
    "TorqueBox",
    "WrenchZonotope",
    "feasible_zonotope",
    "polygon_intersections",
    "polygon_scaling_method",
    "scaling_factor",
    "slice_zonotope",
]
