"""Dense linear-algebra helpers shared by the ELM solvers.

Matrices are plain ``numpy.ndarray`` objects of dtype float64. The helpers
here validate shape and finiteness at the boundary so the solvers can assume
well-formed input.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

__all__ = [
    "SolveError",
    "SpectrumBounds",
    "as_dense",
    "gram",
    "spectral_bounds",
    "solve_spd",
    "min_norm_lsq",
]

_SYMMETRY_RTOL = 1e-9


class SolveError(np.linalg.LinAlgError):
    """Cholesky factorization failed; ``pivot`` is the 0-based failing index."""

    def __init__(self, pivot: int, message: str | None = None):
        self.pivot = pivot
        super().__init__(message or f"matrix is not positive definite (pivot {pivot})")


@dataclass(frozen=True)
class SpectrumBounds:
    """Estimates of the extreme eigenvalues of a PSD Gram matrix.

    ``kappa0`` is a lower estimate of the smallest eigenvalue, ``kappa`` an
    estimate of the largest. ``iterations_used`` counts power-iteration
    sweeps over both phases.
    """

    kappa0: float
    kappa: float
    iterations_used: int

    def __post_init__(self):
        if not (0.0 <= self.kappa0 <= self.kappa):
            raise ValueError(f"need 0 <= kappa0 <= kappa, got {self.kappa0}, {self.kappa}")


def as_dense(a, name: str = "matrix", ndim: int = 2) -> np.ndarray:
    """Return ``a`` as a finite float64 array with ``ndim`` dimensions."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def _check_symmetric(A: np.ndarray, name: str) -> None:
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got {A.shape}")
    scale = np.max(np.abs(A)) if A.size else 0.0
    if scale > 0 and np.max(np.abs(A - A.T)) > _SYMMETRY_RTOL * scale:
        raise ValueError(f"{name} is not symmetric")


def gram(H) -> np.ndarray:
    """Return ``H.T @ H`` with both triangles bit-identical."""
    H = as_dense(H, "H")
    G = H.T @ H
    upper = np.triu(G)
    return upper + np.triu(G, 1).T


def _power(A: np.ndarray, x: np.ndarray, tol: float, max_iter: int):
    """Power iteration on symmetric ``A``; returns (rayleigh, residual, iterations)."""
    rho = np.inf
    resid = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        y = A @ x
        new_rho = float(x @ y)
        resid = float(np.linalg.norm(y - new_rho * x))
        ny = np.linalg.norm(y)
        done = abs(new_rho - rho) <= tol * abs(new_rho) or ny == 0.0
        rho = new_rho
        if done:
            break
        x = y / ny
    return rho, resid, it


def spectral_bounds(G, tol: float = 1e-10, max_iter: int = 5000, seed: int = 0) -> SpectrumBounds:
    """Estimate the largest and smallest eigenvalues of a symmetric PSD matrix.

    ``kappa`` comes from power iteration on ``G``. ``kappa0`` comes from power
    iteration on ``kappa*I - G``, pushed down by the eigen-residual so that it
    errs low, and floored at zero. An all-zero ``G`` yields ``(0, 0)``.
    """
    G = as_dense(G, "G")
    _check_symmetric(G, "G")
    n = G.shape[0]
    if not np.any(G):
        return SpectrumBounds(0.0, 0.0, 0)

    x0 = np.random.default_rng(seed).standard_normal(n)
    x0 /= np.linalg.norm(x0)
    kappa, _, it1 = _power(G, x0, tol, max_iter)
    kappa = max(kappa, 0.0)
    if kappa == 0.0:
        return SpectrumBounds(0.0, 0.0, it1)

    shifted = kappa * np.eye(n) - G
    top, resid, it2 = _power(shifted, x0, tol, max_iter)
    kappa0 = min(max(kappa - (top + resid), 0.0), kappa)
    return SpectrumBounds(kappa0, kappa, it1 + it2)


def solve_spd(A, B, jitter: float = 0.0) -> np.ndarray:
    """Solve ``(A + jitter*I) X = B`` for symmetric positive definite ``A``.

    Raises :class:`SolveError` carrying the failing pivot when the Cholesky
    factorization breaks down.
    """
    A = as_dense(A, "A")
    _check_symmetric(A, "A")
    B = np.asarray(B, dtype=np.float64)
    vector = B.ndim == 1
    B = as_dense(B.reshape(-1, 1) if vector else B, "B")
    if B.shape[0] != A.shape[0]:
        raise ValueError(f"B has {B.shape[0]} rows, A has order {A.shape[0]}")

    M = A + jitter * np.eye(A.shape[0]) if jitter else A.copy()
    c, info = lapack.dpotrf(M, lower=True, clean=True)
    if info > 0:
        raise SolveError(info - 1)
    if info < 0:
        raise ValueError(f"dpotrf: illegal argument {-info}")
    X, info = lapack.dpotrs(c, B, lower=True)
    if info != 0:
        raise ValueError(f"dpotrs: illegal argument {-info}")
    return X.ravel() if vector else X


def min_norm_lsq(H, T, ridge_floor: float = 1e-10) -> np.ndarray:
    """Least-squares output weights ``H^+ T`` via lightly regularized normal equations.

    The ridge added to the Gram diagonal is ``ridge_floor`` times its mean
    diagonal entry, which keeps rank-deficient ``H`` solvable.
    """
    H = as_dense(H, "H")
    T = np.asarray(T, dtype=np.float64)
    if T.shape[0] != H.shape[0]:
        raise ValueError(f"H has {H.shape[0]} rows, T has {T.shape[0]}")
    G = gram(H)
    jitter = ridge_floor * np.trace(G) / G.shape[0]
    return solve_spd(G, H.T @ T, jitter)
