"""Grasp statics of a rigid body loaded at discrete points.

Covers construction of the grasp matrix for planar and spatial point sets,
the geometric interaction-force test, the minimum-norm (equilibrating) force
distribution, and the dynamic route to internal loads: lumped mass-inertia
elements, virtual-inertia distributions, the inertia-weighted (manipulating)
wrench distribution, and the rigid-body kinematic constraint system used to
verify that manipulating wrenches produce constraint-free accelerations.

Conventions: planar positions are 2-vectors and planar wrenches are
``(fx, fy, mz)``; spatial positions are 3-vectors and spatial wrenches are
``(fx, fy, fz, tx, ty, tz)``.  Stacked wrench sets follow the point order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidVirtualDistribution,
    ModelMismatch,
    NoSolution,
    ZeroMassElement,
)
from .linalg import mp_pinv

PURE_FORCE = "pure_force"
RIGID_CONTACT = "rigid_contact"

E2 = np.array([[0.0, -1.0], [1.0, 0.0]])  # quarter-turn: E2 @ r = (-ry, rx)

#: Relative tolerance for the virtual-inertia equivalence checks.
EQUIVALENCE_TOL = 1e-9


def skew(r) -> np.ndarray:
    """Skew-symmetric matrix S(r) with S(r) @ a = r x a."""
    x, y, z = np.asarray(r, dtype=float)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


@dataclass(frozen=True)
class GraspSystem:
    """Force application points on a rigid body, relative to its CoM.

    ``points`` has shape (k, 2) for a planar system or (k, 3) for a spatial
    one; all points share one contact model (``PURE_FORCE`` chains transmit
    forces only, ``RIGID_CONTACT`` chains transmit forces and torques).
    """

    points: np.ndarray
    model: str = PURE_FORCE

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[0] < 1:
            raise DimensionMismatch("a grasp system needs at least 1 point")
        if pts.shape[1] not in (2, 3):
            raise DimensionMismatch("points must be 2-vectors or 3-vectors")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grasp points must be finite")
        if self.model not in (PURE_FORCE, RIGID_CONTACT):
            raise ValueError(f"unknown contact model {self.model!r}")
        object.__setattr__(self, "points", pts)

    @property
    def spatial(self) -> bool:
        return self.points.shape[1] == 3

    @property
    def k(self) -> int:
        return self.points.shape[0]

    @property
    def wrench_dim(self) -> int:
        """Length of one point's wrench block in a stacked wrench set."""
        per = self.points.shape[1]
        if self.model == RIGID_CONTACT:
            per += 3 if self.spatial else 1
        return per

    def split(self, h) -> np.ndarray:
        """Reshape a stacked wrench set to one row per point."""
        h = np.asarray(h, dtype=float).ravel()
        if h.size != self.k * self.wrench_dim:
            raise DimensionMismatch(
                f"wrench set length {h.size}, expected {self.k * self.wrench_dim}"
            )
        return h.reshape(self.k, self.wrench_dim)


@dataclass(frozen=True)
class RigidBodyInertia:
    """Mass and CoM inertia of the handled body (scalar inertia if planar)."""

    mass: float
    inertia: np.ndarray | float
    planar: bool = True

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.planar:
            if float(self.inertia) <= 0:
                raise ValueError("planar inertia must be a positive scalar")
        else:
            J = np.asarray(self.inertia, dtype=float)
            if J.shape != (3, 3) or np.abs(J - J.T).max() > 1e-10 * max(np.abs(J).max(), 1.0):
                raise ValueError("spatial inertia must be a symmetric 3 x 3 tensor")
            if np.any(np.linalg.eigvalsh(J) <= 0):
                raise ValueError("inertia tensor must be positive definite")
            object.__setattr__(self, "inertia", J)


@dataclass(frozen=True)
class LmieSet:
    """Lumped mass-inertia elements rigidly attached at fixed points.

    ``inertias`` holds one scalar per element for a planar set or one 3 x 3
    tensor per element for a spatial set; zero inertia is allowed (point
    masses, the pure-force case).
    """

    masses: np.ndarray
    inertias: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float).ravel()
        pts = np.atleast_2d(np.asarray(self.positions, dtype=float))
        J = np.asarray(self.inertias, dtype=float)
        if pts.shape[0] != m.size:
            raise DimensionMismatch("masses and positions disagree on element count")
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "inertias", J)
        object.__setattr__(self, "positions", pts)

    @property
    def planar(self) -> bool:
        return self.positions.shape[1] == 2


@dataclass(frozen=True)
class VirtualInertiaDistribution:
    """Virtual masses/inertias spanning the manipulating-distribution space.

    ``nonpositive_mass`` flags distributions in which some virtual mass is
    <= 0 (possible when the CoM lies outside the attachment polygon); the
    equivalence constraints impose no sign, so this is a warning, not an
    error, but the inertia weighting is then indefinite.
    """

    masses: np.ndarray
    inertias: np.ndarray
    positions: np.ndarray
    total_mass: float
    total_inertia: np.ndarray | float
    nonpositive_mass: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.total_mass <= 0:
            raise ValueError("total virtual mass must be positive")
        object.__setattr__(self, "masses", np.asarray(self.masses, dtype=float).ravel())
        object.__setattr__(
            self, "positions", np.atleast_2d(np.asarray(self.positions, dtype=float))
        )
        object.__setattr__(
            self, "nonpositive_mass", bool(np.any(np.asarray(self.masses) <= 0.0))
        )

    @property
    def planar(self) -> bool:
        return self.positions.shape[1] == 2


@dataclass(frozen=True)
class EquivalenceReport:
    """Residuals of the three dynamic-equivalence conditions."""

    mass_residual: float
    inertia_residual: np.ndarray | float
    com_residual: np.ndarray


def build_grasp_matrix(system: GraspSystem) -> np.ndarray:
    """Grasp matrix G mapping stacked applied wrenches to the resultant.

    Spatial pure force: 6 x 3k of stacked ``[I3; S(r_i)]`` blocks.  Spatial
    rigid contact: 6 x 6k with torque columns ``[0; I3]``.  Planar pure
    force: 3 x 2k with unit force rows and moment row ``(E r_i)^T``; planar
    rigid contact appends one unit torque column per point.
    """
    k = system.k
    if system.spatial:
        rows, per = 6, system.wrench_dim
        G = np.zeros((rows, per * k))
        for i, r in enumerate(system.points):
            G[:3, per * i : per * i + 3] = np.eye(3)
            G[3:, per * i : per * i + 3] = skew(r)
            if system.model == RIGID_CONTACT:
                G[3:, per * i + 3 : per * i + 6] = np.eye(3)
        return G
    per = system.wrench_dim
    G = np.zeros((3, per * k))
    for i, r in enumerate(system.points):
        G[:2, per * i : per * i + 2] = np.eye(2)
        G[2, per * i : per * i + 2] = E2 @ r
        if system.model == RIGID_CONTACT:
            G[2, per * i + 2] = 1.0
    return G


def interaction_residuals(forces, system: GraspSystem) -> list[tuple[tuple[int, int], float]]:
    """Pairwise interaction residuals ``(f_j - f_i) . (r_j - r_i)``.

    A force set is equilibrating (free of interaction forces) exactly when
    every residual vanishes.  Pairs are reported sorted, i < j.  Only defined
    for pure-force systems.
    """
    if system.model != PURE_FORCE:
        raise ModelMismatch("interaction forces are defined for pure-force contacts only")
    f = system.split(forces)
    out = []
    for i in range(system.k):
        for j in range(i + 1, system.k):
            res = float((f[j] - f[i]) @ (system.points[j] - system.points[i]))
            out.append(((i, j), res))
    return out


def max_interaction_residual(forces, system: GraspSystem, relative: bool = False) -> float:
    """Largest |interaction residual| over all pairs.

    With ``relative=True`` each residual is scaled by the pair's force and
    lever magnitudes ``max(|f_i|, |f_j|) * max(|r_i|, |r_j|)``, so equal
    forces score ~machine epsilon rather than 0/0 noise.
    """
    f = system.split(forces)
    worst = 0.0
    for (i, j), res in interaction_residuals(forces, system):
        if relative:
            scale = max(np.linalg.norm(f[i]), np.linalg.norm(f[j])) * max(
                np.linalg.norm(system.points[i]), np.linalg.norm(system.points[j])
            )
            res = res / scale if scale > 0 else 0.0
        worst = max(worst, abs(res))
    return worst


def equilibrating_distribution(system: GraspSystem, h_o) -> np.ndarray:
    """Minimum-norm force set balancing ``h_o`` with zero interaction forces."""
    if system.model != PURE_FORCE:
        raise ModelMismatch("equilibrating distributions apply pure forces only")
    G = build_grasp_matrix(system)
    return mp_pinv(G) @ np.asarray(h_o, dtype=float)


def solve_virtual_masses(system: GraspSystem, m_star_o: float = 1.0) -> VirtualInertiaDistribution:
    """Solve the virtual-mass equivalence constraints for a planar system.

    Finds masses with ``sum(m_i) = m_star_o`` and ``sum(r_i m_i) = 0`` (the
    CoM sits at the origin of the point coordinates); under pure-force
    contacts the virtual inertias are zero and the aggregate inertia is the
    parallel-axis sum ``sum(m_i |r_i|^2)``.  Three non-collinear points give
    the unique barycentric solution; other configurations are solved in the
    least-norm sense and verified by substitution.

    Raises
    ------
    NoSolution
        If the constraints are inconsistent (e.g. collinear points with the
        CoM off their line) or the system is spatial.
    """
    if system.model != PURE_FORCE:
        raise ModelMismatch("virtual masses are solved for pure-force contacts")
    if system.spatial:
        raise NoSolution(
            "spatial virtual-inertia solving is not supported; supply a distribution"
        )
    if m_star_o <= 0:
        raise ValueError("total virtual mass must be positive")
    pts = system.points
    k = system.k
    A = np.vstack([np.ones(k), pts.T])  # rows: mass sum, CoM x, CoM y
    rhs = np.array([m_star_o, 0.0, 0.0])
    # Least-norm solve covers every case: three non-collinear points give the
    # unique barycentric solution, larger or degenerate sets the minimum-norm
    # one; inconsistency (collinear points, CoM off their line) shows up as a
    # residual and is rejected below.
    masses, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    if np.max(np.abs(A @ masses - rhs)) > EQUIVALENCE_TOL * m_star_o:
        raise NoSolution(
            "virtual-mass constraints are inconsistent (collinear points with "
            "the CoM outside their line)"
        )
    total_inertia = float(np.sum(masses * np.einsum("ij,ij->i", pts, pts)))
    return VirtualInertiaDistribution(
        masses=masses,
        inertias=np.zeros(k),
        positions=pts,
        total_mass=float(m_star_o),
        total_inertia=total_inertia,
    )


def validate_virtual_distribution(virt: VirtualInertiaDistribution) -> None:
    """Check the mass-sum, CoM, inertia equivalence, and (spatial) the
    proportionality of every element inertia to the aggregate tensor."""
    m_sum = float(np.sum(virt.masses))
    if abs(m_sum - virt.total_mass) > EQUIVALENCE_TOL * abs(virt.total_mass):
        raise InvalidVirtualDistribution("virtual masses do not sum to the total mass")
    scale = max(np.abs(virt.positions).max(), 1e-12) * virt.total_mass
    com = virt.positions.T @ virt.masses
    if np.max(np.abs(com)) > EQUIVALENCE_TOL * scale:
        raise InvalidVirtualDistribution("virtual CoM is displaced from the body CoM")
    if virt.planar:
        # scalar inertias are always mutually proportional; only the sum matters
        parallel = float(np.sum(virt.masses * np.einsum("ij,ij->i", virt.positions, virt.positions)))
        own = float(np.sum(np.asarray(virt.inertias, dtype=float)))
        total = float(virt.total_inertia)
        if abs(own + parallel - total) > EQUIVALENCE_TOL * max(abs(total), 1e-12):
            raise InvalidVirtualDistribution("virtual inertia equivalence violated")
        return
    J_o = np.asarray(virt.total_inertia, dtype=float)
    J = sum(
        np.asarray(Ji, dtype=float) + skew(r) * mi @ skew(r).T
        for Ji, mi, r in zip(virt.inertias, virt.masses, virt.positions)
    )
    j_scale = max(np.abs(J_o).max(), 1e-12)
    if np.max(np.abs(J - J_o)) > EQUIVALENCE_TOL * j_scale:
        raise InvalidVirtualDistribution("virtual inertia equivalence violated")
    denom = float(np.sum(J_o * J_o))
    for i, Ji in enumerate(np.asarray(virt.inertias, dtype=float)):
        c = float(np.sum(Ji * J_o)) / denom  # least-squares proportionality factor
        if np.max(np.abs(Ji - c * J_o)) > EQUIVALENCE_TOL * j_scale:
            raise InvalidVirtualDistribution(
                f"element {i} inertia is not proportional to the aggregate tensor"
            )


def inertia_block_matrix(system: GraspSystem, virt: VirtualInertiaDistribution) -> np.ndarray:
    """Block-diagonal inertia matrix matching the system's wrench layout.

    Pure-force elements contribute ``m_i I`` per point; rigid-contact
    elements append their inertia block (scalar if planar), which must be
    invertible for the weighting to exist.
    """
    dim = system.points.shape[1]
    per = system.wrench_dim
    out = np.zeros((per * system.k, per * system.k))
    for i, m in enumerate(virt.masses):
        out[per * i : per * i + dim, per * i : per * i + dim] = m * np.eye(dim)
        if system.model == RIGID_CONTACT:
            Ji = np.asarray(virt.inertias[i], dtype=float)
            if np.max(np.abs(Ji)) == 0.0:
                raise InvalidVirtualDistribution(
                    f"rigid-contact element {i} needs a nonzero inertia"
                )
            out[per * i + dim : per * (i + 1), per * i + dim : per * (i + 1)] = (
                Ji if Ji.ndim == 2 else np.atleast_2d(Ji)
            )
    return out


def manipulating_distribution(system: GraspSystem, virt: VirtualInertiaDistribution, h_o) -> np.ndarray:
    """Inertia-weighted force set balancing ``h_o`` with zero internal loads.

    Minimizes ``h^T M^-1 h`` subject to ``G h = h_o``; the closed form is
    ``M G^T (G M G^T)^-1 h_o``, which coincides with the parametrized
    pseudo-inverse of the grasp matrix applied to ``h_o``.
    """
    if virt.masses.size != system.k:
        raise DimensionMismatch("virtual distribution and grasp system disagree on k")
    validate_virtual_distribution(virt)
    G = build_grasp_matrix(system)
    M = inertia_block_matrix(system, virt)
    MGt = M @ G.T
    return MGt @ np.linalg.solve(G @ MGt, np.asarray(h_o, dtype=float))


def parametrized_pinv(system: GraspSystem, virt: VirtualInertiaDistribution) -> np.ndarray:
    """Explicit block form of the parametrized grasp-matrix pseudo-inverse.

    Spatial block row i: ``[(m_i/m_o) I3, m_i S(r_i)^T Jo^-1]`` for the force
    slots, plus ``[0, J_i Jo^-1]`` torque rows under rigid contact.  Planar
    pure-force reduction: ``[(m_i/m_o) I2 | m_i (E r_i) / J_o]``.
    """
    validate_virtual_distribution(virt)
    k = system.k
    per = system.wrench_dim
    if system.spatial:
        Jo_inv = np.linalg.inv(np.asarray(virt.total_inertia, dtype=float))
        out = np.zeros((per * k, 6))
        for i, r in enumerate(system.points):
            out[per * i : per * i + 3, :3] = (virt.masses[i] / virt.total_mass) * np.eye(3)
            out[per * i : per * i + 3, 3:] = virt.masses[i] * skew(r).T @ Jo_inv
            if system.model == RIGID_CONTACT:
                out[per * i + 3 : per * i + 6, 3:] = np.asarray(virt.inertias[i]) @ Jo_inv
        return out
    J_o = float(virt.total_inertia)
    out = np.zeros((per * k, 3))
    for i, r in enumerate(system.points):
        out[per * i : per * i + 2, :2] = (virt.masses[i] / virt.total_mass) * np.eye(2)
        out[per * i : per * i + 2, 2] = virt.masses[i] * (E2 @ r) / J_o
        if system.model == RIGID_CONTACT:
            out[per * i + 2, 2] = float(virt.inertias[i]) / J_o
    return out


def rigid_body_acceleration(inertia: RigidBodyInertia, h_o) -> np.ndarray:
    """Instantaneous acceleration ``M_o^-1 h_o`` of the free rigid body."""
    h = np.asarray(h_o, dtype=float)
    if inertia.planar:
        return np.concatenate([h[:2] / inertia.mass, [h[2] / float(inertia.inertia)]])
    return np.concatenate(
        [h[:3] / inertia.mass, np.linalg.solve(np.asarray(inertia.inertia), h[3:])]
    )


def lmie_unconstrained_accelerations(elements, h) -> list[np.ndarray]:
    """Per-element unconstrained accelerations ``M_i^-1 h_i``.

    ``elements`` is an ``LmieSet`` or ``VirtualInertiaDistribution``; ``h``
    stacks one wrench per element.  Elements with zero inertia accept force
    blocks only (point masses).
    """
    masses = np.asarray(elements.masses, dtype=float)
    positions = np.atleast_2d(np.asarray(elements.positions, dtype=float))
    dim = positions.shape[1]
    planar = dim == 2
    k = masses.size
    h = np.asarray(h, dtype=float).ravel()
    if np.any(masses == 0.0):
        raise ZeroMassElement("an element has zero mass")
    if h.size == k * dim:  # pure forces on point masses
        f = h.reshape(k, dim)
        return [f[i] / masses[i] for i in range(k)]
    per = 3 if planar else 6
    if h.size != k * per:
        raise DimensionMismatch("wrench set length does not match the element count")
    hs = h.reshape(k, per)
    out = []
    for i in range(k):
        Ji = np.asarray(elements.inertias[i], dtype=float)
        if planar:
            if float(Ji) == 0.0:
                raise ZeroMassElement(f"element {i} has zero inertia but carries a torque slot")
            out.append(np.concatenate([hs[i, :2] / masses[i], [hs[i, 2] / float(Ji)]]))
        else:
            out.append(
                np.concatenate([hs[i, :3] / masses[i], np.linalg.solve(Ji, hs[i, 3:])])
            )
    return out


def kinematic_constraint_system(points, omega) -> tuple[np.ndarray, np.ndarray]:
    """Rigid-body constraint system ``A xddot = b`` over stacked accelerations.

    Each element carries the full acceleration state (planar: ``(px, py, w)``
    per element; spatial: ``(p, w)`` 6-vector).  For every pair (i, 1) the
    rows force the relative acceleration of point i about point 1 to match a
    common angular acceleration, with the centripetal term of the current
    angular velocity ``omega`` on the right-hand side, plus rows equating the
    angular accelerations themselves.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    k, dim = pts.shape
    if k < 2:
        raise DimensionMismatch("need at least two points")
    if dim == 2:
        w = float(omega)
        per, rows_per = 3, 3
        A = np.zeros((rows_per * (k - 1), per * k))
        b = np.zeros(rows_per * (k - 1))
        for idx in range(1, k):
            r = pts[idx] - pts[0]
            row = rows_per * (idx - 1)
            # p_i'' - p_1'' - w1' * E r = -w^2 r
            A[row : row + 2, 0:2] = -np.eye(2)
            A[row : row + 2, 2] = -(E2 @ r)
            A[row : row + 2, per * idx : per * idx + 2] = np.eye(2)
            b[row : row + 2] = -(w**2) * r
            # w_i' - w_1' = 0
            A[row + 2, 2] = -1.0
            A[row + 2, per * idx + 2] = 1.0
        return A, b
    w = np.asarray(omega, dtype=float).ravel()
    per, rows_per = 6, 6
    A = np.zeros((rows_per * (k - 1), per * k))
    b = np.zeros(rows_per * (k - 1))
    Sw2 = skew(w) @ skew(w)
    for idx in range(1, k):
        r = pts[idx] - pts[0]
        row = rows_per * (idx - 1)
        A[row : row + 3, 0:3] = -np.eye(3)
        A[row : row + 3, 3:6] = skew(r)
        A[row : row + 3, per * idx : per * idx + 3] = np.eye(3)
        b[row : row + 3] = Sw2 @ r
        A[row + 3 : row + 6, 3:6] = -np.eye(3)
        A[row + 3 : row + 6, per * idx + 3 : per * idx + 6] = np.eye(3)
    return A, b


def check_manipulating(system: GraspSystem, virt: VirtualInertiaDistribution, h, h_o) -> np.ndarray:
    """Constraint-wrench set ``h_c = h_m - h`` for a feasible applied set.

    ``h`` must already balance ``h_o``; the returned set lies in the null
    space of the grasp matrix and vanishes exactly when ``h`` is the
    manipulating distribution.
    """
    h = np.asarray(h, dtype=float).ravel()
    h_o = np.asarray(h_o, dtype=float)
    G = build_grasp_matrix(system)
    scale = max(np.linalg.norm(h_o), 1.0)
    if np.max(np.abs(G @ h - h_o)) > 1e-9 * scale:
        raise ValueError("applied set does not balance the requested resultant")
    return manipulating_distribution(system, virt, h_o) - h


def check_dynamic_equivalence(elements: LmieSet, body: RigidBodyInertia) -> EquivalenceReport:
    """Residuals of mass, inertia (with parallel-axis terms), and CoM sums."""
    m = elements.masses
    pts = elements.positions
    mass_res = float(np.sum(m) - body.mass)
    com_res = pts.T @ m
    if elements.planar:
        own = float(np.sum(np.asarray(elements.inertias, dtype=float)))
        parallel = float(np.sum(m * np.einsum("ij,ij->i", pts, pts)))
        inertia_res = own + parallel - float(body.inertia)
    else:
        J = np.zeros((3, 3))
        for Ji, mi, r in zip(elements.inertias, m, pts):
            J += np.asarray(Ji, dtype=float) + skew(r) @ (mi * skew(r).T)
        inertia_res = J - np.asarray(body.inertia)
    return EquivalenceReport(mass_res, inertia_res, com_res)
