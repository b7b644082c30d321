"""Dense generalized inverses and weighted least-norm solvers.

All maps handled here are small (at most 6 x 6), so the normal-equation
route ``A W^-1 A^T`` with a Cholesky factorization of the weighting matrix
is numerically safe and is used throughout.  Singularity is detected from
the condition number of the Gram matrix; anything past ``1/RCOND_MIN`` is
treated as rank deficient rather than silently regularized.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import DimensionMismatch, NotPositiveDefinite, RankDeficient, Singular

#: Reciprocal-condition threshold below which a system is declared singular.
RCOND_MIN = 1e-12

#: Relative tolerance for the symmetry check on weighting matrices.
SYMMETRY_TOL = 1e-10


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a 2-D float array with finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"{name} must be a 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def check_weighting(W, name: str = "weighting matrix"):
    """Validate a symmetric positive-definite weighting matrix.

    Returns the Cholesky factorization (as produced by ``cho_factor``) so
    callers can reuse it for solves.  Raises ``NotPositiveDefinite`` if the
    matrix is not symmetric to ``SYMMETRY_TOL`` or the factorization fails.
    """
    W = as_matrix(W, name)
    if W.shape[0] != W.shape[1]:
        raise NotPositiveDefinite(f"{name} must be square, got shape {W.shape}")
    scale = max(np.abs(W).max(), 1.0)
    if np.abs(W - W.T).max() > SYMMETRY_TOL * scale:
        raise NotPositiveDefinite(f"{name} is not symmetric")
    try:
        return cho_factor(W, lower=True)
    except LinAlgError as exc:
        raise NotPositiveDefinite(f"{name} is not positive definite") from exc


def _gram_inverse_apply(gram: np.ndarray, rhs: np.ndarray, context: str) -> np.ndarray:
    """Solve ``gram @ x = rhs`` after a conditioning check."""
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > 1.0 / RCOND_MIN:
        raise RankDeficient(f"{context}: Gram matrix condition {cond:.3e} exceeds 1e12")
    return np.linalg.solve(gram, rhs)


def mp_pinv(A) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a full-row-rank matrix.

    For ``A`` of shape (n, m) with n <= m returns ``A^T (A A^T)^-1``; applied
    to a target vector it yields the minimum Euclidean-norm solution of
    ``A x = h``.

    Raises
    ------
    RankDeficient
        If ``A A^T`` is numerically singular.
    """
    A = as_matrix(A, "A")
    n, m = A.shape
    if n > m:
        raise DimensionMismatch(f"expected a wide matrix (n <= m), got {A.shape}")
    gram = A @ A.T
    return _gram_inverse_apply(gram, A, "mp_pinv").T


def weighted_pinv(A, W) -> np.ndarray:
    """Weighted Moore-Penrose pseudo-inverse ``W^-1 A^T (A W^-1 A^T)^-1``.

    For any target ``h``, ``weighted_pinv(A, W) @ h`` minimizes ``x^T W x``
    subject to ``A x = h``.  ``W`` must be symmetric positive definite; the
    result is invariant to scaling ``W`` by any positive constant.

    Raises
    ------
    RankDeficient
        If the weighted Gram matrix is numerically singular.
    NotPositiveDefinite
        If ``W`` fails the symmetry or Cholesky test.
    """
    A = as_matrix(A, "A")
    n, m = A.shape
    if n > m:
        raise DimensionMismatch(f"expected a wide matrix (n <= m), got {A.shape}")
    W = as_matrix(W, "W")
    if W.shape != (m, m):
        raise DimensionMismatch(f"W must be {m} x {m} for an {n} x {m} map, got {W.shape}")
    factor = check_weighting(W, "W")
    winv_at = cho_solve(factor, A.T)  # W^-1 A^T
    gram = A @ winv_at
    return _gram_inverse_apply(gram, winv_at.T, "weighted_pinv").T


def nullspace_projector(A, inverse) -> np.ndarray:
    """Projector ``I - inverse @ A`` onto the null space of ``A``.

    ``inverse`` may be any generalized inverse of ``A`` (anything with
    ``A @ inverse @ A == A``); the result is idempotent and satisfies
    ``A @ P == 0``.
    """
    A = as_matrix(A, "A")
    inverse = as_matrix(inverse, "inverse")
    n, m = A.shape
    if inverse.shape != (m, n):
        raise DimensionMismatch(
            f"inverse shape {inverse.shape} incompatible with A shape {A.shape}"
        )
    return np.eye(m) - inverse @ A


def solve_linear(A, b) -> np.ndarray:
    """Solve a square, well-conditioned system ``A x = b``.

    Raises
    ------
    Singular
        If ``A`` is not square or its condition number exceeds 1e12.
    """
    A = as_matrix(A, "A")
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"A must be square, got {A.shape}")
    b = np.asarray(b, dtype=float)
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1.0 / RCOND_MIN:
        raise Singular(f"solve_linear: condition {cond:.3e} exceeds 1e12")
    return np.linalg.solve(A, b)
