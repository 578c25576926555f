"""Dense SVD, power iteration for the top singular value, and its gradient."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .core import DegenerateSingularValue, DenseOperator, NoConvergence, NonFiniteWeights, SingularSpectrum


@dataclass(frozen=True)
class SvdResult:
    values: np.ndarray
    U: Optional[np.ndarray] = None
    V: Optional[np.ndarray] = None

    @property
    def has_vectors(self) -> bool:
        return self.U is not None


def _check_finite(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M)
    if not np.all(np.isfinite(M)):
        raise NonFiniteWeights("matrix contains NaN or Inf entries")
    return M


def svd(M, want_vectors: bool = False) -> SvdResult:
    """Thin SVD of a real or complex matrix.

    ``V`` holds the right singular vectors as columns, so that
    ``M = U @ diag(values) @ V.conj().T``.
    """
    M = _check_finite(M)
    if M.size == 0:
        k = min(M.shape)
        return SvdResult(np.zeros(k), np.zeros((M.shape[0], k)) if want_vectors else None,
                         np.zeros((M.shape[1], k)) if want_vectors else None)
    if not want_vectors:
        s = scipy.linalg.svd(M, compute_uv=False, check_finite=False)
        return SvdResult(s)
    try:
        U, s, Vh = scipy.linalg.svd(M, full_matrices=False, check_finite=False)
    except np.linalg.LinAlgError:
        U, s, Vh = scipy.linalg.svd(M, full_matrices=False, check_finite=False, lapack_driver="gesvd")
    return SvdResult(s, U, Vh.conj().T)


def singular_values(M) -> np.ndarray:
    """Values only, nonincreasing."""
    return svd(M).values


def exact_spectrum(op: DenseOperator | np.ndarray) -> SingularSpectrum:
    """Full singular spectrum of a materialized operator."""
    M = op.entries if isinstance(op, DenseOperator) else op
    return SingularSpectrum(svd(M).values, "exact")


def power_sigma_max(M, tol: float = 1e-8, max_iters: int = 10_000) -> float:
    """Largest singular value by power iteration on ``M^H M``.

    Starts from the normalized all-ones vector. Stops once the relative change
    of the estimate falls below ``tol / 100``; raises :class:`NoConvergence`
    after ``max_iters`` steps.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = _check_finite(M)
    if M.size == 0 or not np.any(M):
        return 0.0
    v = np.ones(M.shape[1], dtype=M.dtype) / np.sqrt(M.shape[1])
    Mv = M @ v
    if not np.any(Mv):
        # all-ones start is in the null space: fall back to a fixed nonconstant start
        v = np.cos(np.arange(M.shape[1]) + 1.0).astype(M.dtype)
        v /= np.linalg.norm(v)
        Mv = M @ v
    sigma = np.linalg.norm(Mv)
    for _ in range(max_iters):
        w = M.conj().T @ Mv
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        Mv = M @ v
        new = np.linalg.norm(Mv)
        if abs(new - sigma) <= 1e-2 * tol * new:
            return float(new)
        sigma = new
    raise NoConvergence(f"power iteration did not reach relative tolerance {tol} in {max_iters} iterations")


def sigma_max(M, tol: float = 1e-8, max_iters: int = 2_000) -> float:
    """Power iteration with a dense-SVD fallback when it stalls."""
    try:
        return power_sigma_max(M, tol, max_iters)
    except NoConvergence:
        return float(svd(M).values[0])


def sigma_max_gradient(M, gap_tol: float = 1e-8) -> np.ndarray:
    """Gradient of the spectral norm with respect to ``M``: ``u1 v1^T``.

    Requires a simple, positive top singular value; raises
    :class:`DegenerateSingularValue` otherwise.
    """
    M = np.asarray(_check_finite(M), dtype=np.float64)
    res = svd(M, want_vectors=True)
    s = res.values
    if s.size == 0 or s[0] <= 0:
        raise DegenerateSingularValue("top singular value is zero; spectral norm is not differentiable")
    if s.size > 1 and s[0] - s[1] <= gap_tol * s[0]:
        raise DegenerateSingularValue(
            f"top singular value is not simple (sigma1={s[0]:.6g}, sigma2={s[1]:.6g})"
        )
    return np.outer(res.U[:, 0], res.V[:, 0])


DENSE_NORM_LIMIT = 2048


def spectral_norm(M, tol: float = 1e-8) -> float:
    """Largest singular value, picking the cheaper exact route for the size.

    Dense values-only SVD below ``DENSE_NORM_LIMIT`` on the short side,
    power iteration (with SVD fallback) above it.
    """
    M = _check_finite(M)
    if M.size == 0:
        return 0.0
    if min(M.shape) <= DENSE_NORM_LIMIT:
        return float(svd(M).values[0])
    return sigma_max(M, tol)
