"""Joint-torque synthesis for a requested platform wrench.

Four resolutions of the redundant statics equation are provided:

* minimum torque norm: the plain pseudo-inverse solution ``min tau^T tau``;
* equilibrating: ``min f^T f`` over the applied forces, i.e. the torque-space
  metric ``W_e = K^-1 B^T B K^-T`` that measures actual force magnitude; the
  resulting force set carries no interaction forces;
* manipulating: ``min h^T M^-1 h`` with the virtual-inertia weighting
  ``W_m = K^-1 B^T M^-1 B K^-T``; the resulting force set carries no internal
  loads (each element's unconstrained acceleration is the rigid-body field);
* general: any chosen inverse plus an arbitrary null-space shift.

All four are linear in the requested wrench and leave it invariant under
null-space shifts.  Functions are pure; many wrenches may be synthesized
concurrently against one shared state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .grasp import (
    VirtualInertiaDistribution,
    check_manipulating,
    inertia_block_matrix,
    max_interaction_residual,
)
from .linalg import mp_pinv, nullspace_projector, weighted_pinv
from .rrr import ManipulatorState, applied_forces, forward_force

MIN_NORM = "min-norm"
EQUILIBRATING = "equilibrating"
MANIPULATING = "manipulating"
GENERAL = "general"

INVERSE_CHOICES = (MIN_NORM, EQUILIBRATING, MANIPULATING)


@dataclass(frozen=True)
class SynthesisResult:
    """A synthesized torque vector with its realized effect and diagnostics."""

    tau: np.ndarray
    method: str
    wrench: np.ndarray  # realized resultant, equals the request to 1e-9
    forces: np.ndarray  # stacked per-leg applied forces
    interaction_max: float
    constraint_norm: float | None = None  # needs a virtual distribution


def equilibrating_weighting(state: ManipulatorState) -> np.ndarray:
    """Metric tensor ``K^-1 B^T B K^-T`` equating torque norm to force norm."""
    kit = state.k_inv_t
    return kit.T @ state.B.T @ state.B @ kit


def manipulating_weighting(state: ManipulatorState, virt: VirtualInertiaDistribution) -> np.ndarray:
    """Inertia metric ``K^-1 B^T M^-1 B K^-T`` from the virtual masses."""
    system = state.grasp_system()
    M = inertia_block_matrix(system, virt)
    kit = state.k_inv_t
    BM = np.linalg.solve(M, state.B)  # M^-1 B, M diagonal
    return kit.T @ state.B.T @ BM @ kit


def _package(state, tau, method, h_o, virt, system) -> SynthesisResult:
    realized = forward_force(state, tau)
    h_o = np.asarray(h_o, dtype=float)
    scale = max(np.linalg.norm(h_o), 1.0)
    if np.max(np.abs(realized - h_o)) > 1e-9 * scale:
        raise ArithmeticError("synthesized torques fail to realize the requested wrench")
    forces = applied_forces(state, tau)
    constraint_norm = None
    if virt is not None:
        constraint_norm = float(np.linalg.norm(check_manipulating(system, virt, forces, h_o)))
    return SynthesisResult(
        tau=tau,
        method=method,
        wrench=realized,
        forces=forces,
        interaction_max=max_interaction_residual(forces, system),
        constraint_norm=constraint_norm,
    )


def min_torque_norm(state: ManipulatorState, h_o, virt=None) -> SynthesisResult:
    """Minimum-Euclidean-norm torque vector realizing ``h_o``."""
    tau = mp_pinv(state.wrench_map) @ np.asarray(h_o, dtype=float)
    return _package(state, tau, MIN_NORM, h_o, virt, state.grasp_system())


def equilibrating_torques(state: ManipulatorState, h_o, virt=None) -> SynthesisResult:
    """Torques whose applied forces balance ``h_o`` with no interaction forces.

    The result reproduces the minimum-norm force distribution of the grasp
    matrix: ``applied_forces(tau_e)`` equals ``equilibrating_distribution``.
    """
    W = equilibrating_weighting(state)
    tau = weighted_pinv(state.wrench_map, W) @ np.asarray(h_o, dtype=float)
    return _package(state, tau, EQUILIBRATING, h_o, virt, state.grasp_system())


def manipulating_torques(state: ManipulatorState, virt: VirtualInertiaDistribution, h_o) -> SynthesisResult:
    """Torques whose applied forces balance ``h_o`` with no internal loads.

    ``applied_forces(tau_m)`` equals the manipulating distribution of the
    grasp matrix under the same virtual masses; the constraint-wrench norm in
    the result is the residual of that identity and vanishes to tolerance.
    The torque vector is invariant to uniform scaling of the virtual masses.
    """
    W = manipulating_weighting(state, virt)
    tau = weighted_pinv(state.wrench_map, W) @ np.asarray(h_o, dtype=float)
    return _package(state, tau, MANIPULATING, h_o, virt, state.grasp_system())


def general_resolution(
    state: ManipulatorState,
    h_o,
    inverse_choice: str = MIN_NORM,
    z=None,
    virt: VirtualInertiaDistribution | None = None,
) -> SynthesisResult:
    """Null-space-parametrized resolution ``tau = A+ h_o + (I - A+ A) z``.

    ``inverse_choice`` selects which generalized inverse supplies the
    particular solution; the realized wrench is independent of ``z``.
    """
    A = state.wrench_map
    if inverse_choice == MIN_NORM:
        inv = mp_pinv(A)
    elif inverse_choice == EQUILIBRATING:
        inv = weighted_pinv(A, equilibrating_weighting(state))
    elif inverse_choice == MANIPULATING:
        if virt is None:
            raise ValueError("the manipulating inverse needs a virtual distribution")
        inv = weighted_pinv(A, manipulating_weighting(state, virt))
    else:
        raise ValueError(f"unknown inverse choice {inverse_choice!r}")
    h_o = np.asarray(h_o, dtype=float)
    tau = inv @ h_o
    if z is not None:
        z = np.asarray(z, dtype=float).ravel()
        if z.size != A.shape[1]:
            raise DimensionMismatch(f"z must have {A.shape[1]} entries")
        tau = tau + nullspace_projector(A, inv) @ z
    return _package(state, tau, GENERAL, h_o, virt, state.grasp_system())
