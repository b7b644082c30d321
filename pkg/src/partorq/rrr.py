"""Kinematics and statics of planar RR-actuated parallel manipulators.

A manipulator is a set of legs, each a proximal link ``u_j`` (driven by the
base joint, absolute angle ``theta_1j``) and a distal link ``v_j`` (driven by
the elbow joint, relative angle ``theta_2j``), pinned to a rigid platform at
attachment ``r_j`` relative to the platform CoM.  The solved configuration
carries the two Jacobians of the velocity relation ``J xdot = K thetadot``,
the basis matrix B whose columns are the per-actuator force directions at the
attachment points, and hence the two statics maps

    h_o = J^T K^-T tau        (joint torques -> resultant wrench)
    f   = B  K^-T tau         (joint torques -> per-leg applied forces)

which are consistent through the grasp matrix: G B = J^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, Singular, Unreachable
from .grasp import E2, PURE_FORCE, GraspSystem, RigidBodyInertia

#: |v^T E u| or |sin theta2| below this means the leg transmits no torque.
SINGULARITY_TOL = 1e-12

#: Loop-closure / reachability slack in metres.
REACH_TOL = 1e-12


@dataclass(frozen=True)
class ManipulatorModel:
    """Geometry of an n-leg planar manipulator with RR legs.

    base_points : (n, 2) fixed pivots A_j in the base frame (m)
    link_lengths : (n, 2) proximal and distal lengths per leg (m)
    attachments : (n, 2) platform pins r'_j in the mobile frame (m)
    ee_inertia : optional platform inertia for dynamic analyses
    """

    base_points: np.ndarray
    link_lengths: np.ndarray
    attachments: np.ndarray
    ee_inertia: RigidBodyInertia | None = None

    def __post_init__(self):
        base = np.atleast_2d(np.asarray(self.base_points, dtype=float))
        lengths = np.atleast_2d(np.asarray(self.link_lengths, dtype=float))
        attach = np.atleast_2d(np.asarray(self.attachments, dtype=float))
        n = base.shape[0]
        if base.shape != (n, 2) or attach.shape != (n, 2) or lengths.shape != (n, 2):
            raise DimensionMismatch("base_points, link_lengths, attachments must be (n, 2)")
        if n < 3:
            raise DimensionMismatch("need at least 3 legs")
        if np.any(lengths <= 0):
            raise ValueError("link lengths must be positive")
        spans = base[1:] - base[0]
        cross_z = spans[0, 0] * spans[1:, 1] - spans[0, 1] * spans[1:, 0]
        if np.all(np.abs(cross_z) < 1e-12):
            raise ValueError("base points are collinear")
        object.__setattr__(self, "base_points", base)
        object.__setattr__(self, "link_lengths", lengths)
        object.__setattr__(self, "attachments", attach)

    @property
    def n_legs(self) -> int:
        return self.base_points.shape[0]


@dataclass(frozen=True)
class Pose:
    """Platform pose: CoM position (m) and orientation (rad)."""

    x: float
    y: float
    phi: float = 0.0

    def __post_init__(self):
        if not np.all(np.isfinite([self.x, self.y, self.phi])):
            raise ValueError("pose must be finite")

    @property
    def p(self) -> np.ndarray:
        return np.array([self.x, self.y])

    @property
    def rotation(self) -> np.ndarray:
        c, s = np.cos(self.phi), np.sin(self.phi)
        return np.array([[c, -s], [s, c]])


DEFAULT_BRANCHES = (-1, -1, -1)


@dataclass(frozen=True)
class ManipulatorState:
    """A solved configuration with link vectors and statics maps."""

    model: ManipulatorModel
    pose: Pose
    theta: np.ndarray  # (2n,) alternating (theta_1j, theta_2j)
    u: np.ndarray  # (n, 2) proximal link vectors
    v: np.ndarray  # (n, 2) distal link vectors
    r: np.ndarray  # (n, 2) attachment vectors in the base frame
    J: np.ndarray  # (2n, 3)
    K: np.ndarray  # (2n, 2n) diagonal
    B: np.ndarray  # (2n, 2n)

    @property
    def n_legs(self) -> int:
        return self.u.shape[0]

    @property
    def wrench_map(self) -> np.ndarray:
        """The 3 x 2n statics map J^T K^-T."""
        return self.J.T @ self.k_inv_t

    @property
    def k_inv_t(self) -> np.ndarray:
        return np.diag(1.0 / np.diag(self.K))

    def grasp_system(self) -> GraspSystem:
        return GraspSystem(self.r, PURE_FORCE)


def _solve_leg(base, target, rho_p, rho_d, sign, leg):
    """Two-link IK for one leg; returns (theta1, theta2)."""
    delta = target - base
    d = float(np.hypot(*delta))
    lo, hi = abs(rho_p - rho_d), rho_p + rho_d
    if d > hi + REACH_TOL or d < lo - REACH_TOL:
        raise Unreachable(
            f"leg {leg}: attachment distance {d:.6f} outside [{lo:.6f}, {hi:.6f}]", leg=leg
        )
    cos_rel = (d * d - rho_p * rho_p - rho_d * rho_d) / (2.0 * rho_p * rho_d)
    cos_rel = float(np.clip(cos_rel, -1.0, 1.0))
    rel = float(np.arccos(cos_rel))  # angle between u and v in (0, pi)
    if np.sin(rel) * rho_p * rho_d < SINGULARITY_TOL:
        raise Singular(f"leg {leg}: fully extended or folded", leg=leg)
    cos_open = (d * d + rho_p * rho_p - rho_d * rho_d) / (2.0 * rho_p * d)
    opening = float(np.arccos(np.clip(cos_open, -1.0, 1.0)))
    psi = float(np.arctan2(delta[1], delta[0]))
    return psi - sign * opening, sign * rel


def inverse_kinematics(model: ManipulatorModel, pose: Pose, branches=DEFAULT_BRANCHES) -> ManipulatorState:
    """Solve the joint angles for a platform pose and assemble the state.

    ``branches`` gives one elbow sign per leg selecting between the two
    circle-intersection solutions; the sign equals sign(theta_2j).

    Raises
    ------
    Unreachable
        If the attachment of some leg violates the triangle inequality.
    Singular
        If some leg is fully extended or folded (K not invertible there).
    """
    n = model.n_legs
    branches = tuple(branches)
    if len(branches) != n or any(b not in (-1, 1) for b in branches):
        raise ValueError(f"branches must be {n} signs in {{-1, +1}}")
    R = pose.rotation
    r = model.attachments @ R.T
    theta = np.empty(2 * n)
    u = np.empty((n, 2))
    v = np.empty((n, 2))
    for j in range(n):
        rho_p, rho_d = model.link_lengths[j]
        target = pose.p + r[j]
        t1, t2 = _solve_leg(model.base_points[j], target, rho_p, rho_d, branches[j], j)
        theta[2 * j], theta[2 * j + 1] = t1, t2
        u[j] = rho_p * np.array([np.cos(t1), np.sin(t1)])
        v[j] = rho_d * np.array([np.cos(t1 + t2), np.sin(t1 + t2)])
        residual = pose.p + r[j] - model.base_points[j] - u[j] - v[j]
        if np.max(np.abs(residual)) > 1e-10:
            raise Singular(f"leg {j}: loop-closure residual too large", leg=j)
    J, K = build_jacobians(u, v, r, theta[1::2])
    B = build_basis_matrix(u, v)
    return ManipulatorState(model=model, pose=pose, theta=theta, u=u, v=v, r=r, J=J, K=K, B=B)


def build_jacobians(u, v, r, theta2) -> tuple[np.ndarray, np.ndarray]:
    """Assemble J (2n x 3) and diagonal K (2n x 2n) from the link vectors.

    Rows of J per leg: ``[v^T, v^T E r]`` and ``[(u+v)^T, (u+v)^T E r]``.
    K blocks per leg: ``diag(v^T E u, -|u||v| sin theta_2)``; the signed form
    keeps ``J xdot = K thetadot`` valid on both elbow branches and reduces to
    ``+|u||v| sin(theta'_2)`` on the elbow-down branch used in the case study.

    Raises ``Singular`` if any leg transmits no torque at this configuration.
    """
    u = np.atleast_2d(np.asarray(u, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    r = np.atleast_2d(np.asarray(r, dtype=float))
    theta2 = np.asarray(theta2, dtype=float).ravel()
    n = u.shape[0]
    J = np.zeros((2 * n, 3))
    K = np.zeros((2 * n, 2 * n))
    for j in range(n):
        er = E2 @ r[j]
        uv = u[j] + v[j]
        J[2 * j] = [v[j, 0], v[j, 1], v[j] @ er]
        J[2 * j + 1] = [uv[0], uv[1], uv @ er]
        k1 = float(v[j] @ E2 @ u[j])
        k2 = float(-np.linalg.norm(u[j]) * np.linalg.norm(v[j]) * np.sin(theta2[j]))
        if abs(k1) < SINGULARITY_TOL or abs(k2) < SINGULARITY_TOL:
            raise Singular(f"leg {j}: transmission matrix singular", leg=j)
        K[2 * j, 2 * j] = k1
        K[2 * j + 1, 2 * j + 1] = k2
    return J, K


def build_basis_matrix(u, v) -> np.ndarray:
    """Basis matrix B (2n x 2n): per leg, columns ``v_j`` and ``u_j + v_j``
    placed in that leg's two-row band, zeros elsewhere."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    n = u.shape[0]
    B = np.zeros((2 * n, 2 * n))
    for j in range(n):
        B[2 * j : 2 * j + 2, 2 * j] = v[j]
        B[2 * j : 2 * j + 2, 2 * j + 1] = u[j] + v[j]
    return B


def forward_force(state: ManipulatorState, tau) -> np.ndarray:
    """Resultant wrench ``(fx, fy, mz)`` produced by joint torques ``tau``."""
    tau = np.asarray(tau, dtype=float).ravel()
    if tau.size != 2 * state.n_legs:
        raise DimensionMismatch(f"expected {2 * state.n_legs} torques, got {tau.size}")
    return state.wrench_map @ tau


def applied_forces(state: ManipulatorState, tau) -> np.ndarray:
    """Stacked per-leg forces ``B K^-T tau`` applied to the platform.

    The returned (2n,) vector aggregates back to ``forward_force``: the force
    parts sum to the resultant force and their moments about the CoM sum to
    the resultant moment.
    """
    tau = np.asarray(tau, dtype=float).ravel()
    if tau.size != 2 * state.n_legs:
        raise DimensionMismatch(f"expected {2 * state.n_legs} torques, got {tau.size}")
    return state.B @ state.k_inv_t @ tau


def transmission_weight(u, v, tau: float) -> float:
    """Scalar force intensity ``w = tau / (v^T E u)`` along the distal link.

    ``w * v`` is the force applied at the leg tip by a torque ``tau`` on the
    base joint alone.  Raises ``Singular`` when the force line passes through
    the actuator (``v`` parallel to ``u``).
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    denom = float(v @ E2 @ u)
    if abs(denom) < SINGULARITY_TOL:
        raise Singular("force line passes through the actuated joint")
    return float(tau) / denom


@dataclass(frozen=True)
class DeterminacyReport:
    """Result of the per-leg actuation count check."""

    ok: bool
    deficient_legs: tuple[int, ...]
    required: int

    def __bool__(self) -> bool:
        return self.ok

    def message(self) -> str:
        if self.ok:
            return "all legs statically determined"
        legs = ", ".join(str(j) for j in self.deficient_legs)
        return f"leg(s) {legs} under-actuated: need {self.required} actuators per leg"


def static_determinacy_check(model: ManipulatorModel, actuated_per_leg) -> DeterminacyReport:
    """Check that every leg can apply a force of arbitrary direction.

    A planar leg must carry exactly 2 actuators (a spatial one would need 3);
    legs failing the count are named in the report.
    """
    counts = np.asarray(actuated_per_leg, dtype=int).ravel()
    if counts.size != model.n_legs:
        raise DimensionMismatch(f"expected {model.n_legs} per-leg actuator counts")
    required = 2  # planar
    deficient = tuple(int(j) for j in range(counts.size) if counts[j] != required)
    return DeterminacyReport(ok=not deficient, deficient_legs=deficient, required=required)
