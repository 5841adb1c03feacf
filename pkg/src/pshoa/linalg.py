"""Dense linear algebra for encoding: regularized least squares and the
symmetric tridiagonal eigensolver behind the spheroidal coefficient tables."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, DomainError

RANK_TOL = 1e-12  # relative singular value cutoff for sigma = 0


def tridiag_sym_eig(diag, offdiag):
    """Full spectrum of a real symmetric tridiagonal matrix.

    Parameters
    ----------
    diag : (n,) array_like
    offdiag : (n-1,) array_like

    Returns
    -------
    eigenvalues : (n,) ndarray, ascending
    eigenvectors : (n, n) ndarray, orthonormal columns
    """
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    if offdiag.shape[0] != diag.shape[0] - 1:
        raise DomainError(
            f"offdiagonal length must be diag length - 1, got {offdiag.shape[0]} vs {diag.shape[0]}"
        )
    if diag.shape[0] == 1:
        return diag.copy(), np.ones((1, 1))
    try:
        w, v = scipy.linalg.eigh_tridiagonal(diag, offdiag)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise ConvergenceError(f"tridiagonal eigensolver did not converge: {exc}") from exc
    return w, v


class RlsSolution(NamedTuple):
    x: np.ndarray
    rank: int
    singular_values: np.ndarray


def rls_solve_info(matrix, rhs, sigma: float, rank_tol: float = RANK_TOL) -> RlsSolution:
    """Regularized least squares through the SVD, with rank diagnostics.

    Minimizes ||rhs - M x||^2 + sigma ||x||^2. For sigma = 0 this is the
    minimum-norm least-squares solution with singular values below
    rank_tol * s_max dropped.
    """
    matrix = np.asarray(matrix)
    rhs = np.asarray(rhs)
    if matrix.ndim != 2 or rhs.shape[0] != matrix.shape[0]:
        raise DomainError(
            f"shape mismatch: matrix {matrix.shape} vs rhs {rhs.shape}"
        )
    if sigma < 0:
        raise DomainError(f"regularization parameter must be nonnegative, got {sigma}")
    u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    proj = u.conj().T @ rhs
    if sigma == 0.0:
        keep = s > rank_tol * s[0] if s.size else np.zeros(0, dtype=bool)
        gain = np.zeros_like(s)
        gain[keep] = 1.0 / s[keep]
        rank = int(np.count_nonzero(keep))
    else:
        gain = s / (s * s + sigma)
        rank = int(s.size)
    x = vh.conj().T @ (gain * proj)
    return RlsSolution(x=x, rank=rank, singular_values=s)


def rls_solve(matrix, rhs, sigma: float, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Regularized least-squares solution argmin ||rhs - M x||^2 + sigma ||x||^2."""
    return rls_solve_info(matrix, rhs, sigma, rank_tol).x
