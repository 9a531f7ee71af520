"""Slow, independent reference computations used as test oracles.

Nothing here imports from ``halfelm``: each oracle is a from-scratch method
(triple loops, Jacobi rotations, elimination, grid search, coordinate
descent) so agreement with the library is evidence rather than tautology.
"""
import itertools
import math

import numpy as np


def matmul_loops(A, B):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    n, k = A.shape
    k2, m = B.shape
    assert k == k2
    C = np.zeros((n, m))
    for i in range(n):
        for j in range(m):
            s = 0.0
            for r in range(k):
                s += A[i, r] * B[r, j]
            C[i, j] = s
    return C


def jacobi_eigenvalues(S, sweeps=100, tol=1e-15):
    """Cyclic Jacobi rotations on a small symmetric matrix; returns sorted eigenvalues."""
    A = np.array(S, dtype=float)
    n = A.shape[0]
    for _ in range(sweeps):
        off = math.sqrt(sum(A[i, j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off < tol * max(1.0, np.abs(A).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * A[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                R = np.eye(n)
                R[p, p] = R[q, q] = c
                R[p, q] = s
                R[q, p] = -s
                A = R.T @ A @ R
    return np.sort(np.diag(A))


def gauss_solve(A, B):
    """Gaussian elimination with partial pivoting on the augmented matrix."""
    A = np.array(A, dtype=float)
    B = np.array(B, dtype=float)
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    n = A.shape[0]
    M = np.hstack([A, B])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(M[col:, col])))
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
        for r in range(col + 1, n):
            f = M[r, col] / M[col, col]
            M[r, col:] -= f * M[col, col:]
    X = np.zeros((n, B.shape[1]))
    for r in range(n - 1, -1, -1):
        X[r] = (M[r, n:] - M[r, r + 1:n] @ X[r + 1:]) / M[r, r]
    return X[:, 0] if vector else X


def prox_1d(t, penalty, dpenalty, grid=4001):
    """Global minimizer of ``0.5*(u - t)**2 + penalty(|u|)`` for an increasing penalty.

    The minimizer has the sign of ``t`` and magnitude in ``[0, |t|]``. A grid
    over that interval picks the basin, bisection on the derivative polishes
    the interior candidate, and the origin is always compared explicitly.
    """
    a = abs(float(t))
    if a == 0.0:
        return 0.0
    f = lambda u: 0.5 * (u - a) ** 2 + penalty(u)
    df = lambda u: u - a + dpenalty(u)
    u = np.linspace(0.0, a, grid)
    vals = 0.5 * (u - a) ** 2 + penalty(u)
    k = int(np.argmin(vals))
    best = 0.0
    if k > 0:
        lo, hi = u[k - 1], u[min(k + 1, grid - 1)]
        lo = max(lo, 1e-300)
        if df(lo) < 0 < df(hi):
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if df(mid) < 0:
                    lo = mid
                else:
                    hi = mid
                if hi - lo <= 4 * np.finfo(float).eps * hi:
                    break
            cand = 0.5 * (lo + hi)
        else:
            cand = float(u[k])
        best = cand if f(cand) < f(0.0) else 0.0
    return math.copysign(best, t)


def half_prox_oracle(lam, t, gamma=1.0, epsilon=0.0):
    """Minimizer of ``0.5*(u - t)**2 + lam*(gamma*|u|**0.5 + epsilon*u**2)``."""
    w, e = lam * gamma, lam * epsilon
    pen = lambda u: w * np.sqrt(u) + e * np.asarray(u) ** 2
    dpen = lambda u: w / (2.0 * math.sqrt(u)) + 2.0 * e * u
    return prox_1d(t, pen, dpen)


def soft_prox_oracle(lam, t, gamma=1.0, epsilon=0.0):
    """Minimizer of ``0.5*(u - t)**2 + lam*(gamma*|u| + epsilon*u**2)``."""
    w, e = lam * gamma, lam * epsilon
    pen = lambda u: w * np.asarray(u) + e * np.asarray(u) ** 2
    dpen = lambda u: w + 2.0 * e * u
    return prox_1d(t, pen, dpen)


def lasso_cd(H, t, lam, sweeps=100000, tol=1e-15):
    """Cyclic coordinate descent for ``0.5*||H b - t||^2 + lam*||b||_1`` (single column)."""
    H = np.asarray(H, dtype=float)
    t = np.asarray(t, dtype=float).ravel()
    N = H.shape[1]
    b = np.zeros(N)
    col_sq = (H * H).sum(axis=0)
    r = t - H @ b
    for _ in range(sweeps):
        max_change = 0.0
        for j in range(N):
            if col_sq[j] == 0:
                continue
            rho = H[:, j] @ r + col_sq[j] * b[j]
            new = math.copysign(max(abs(rho) - lam, 0.0), rho) / col_sq[j]
            if new != b[j]:
                r -= H[:, j] * (new - b[j])
                max_change = max(max_change, abs(new - b[j]))
                b[j] = new
        if max_change < tol:
            break
    return b


def hybrid_half_objective(H, T, beta, lam, gamma, epsilon):
    r = H @ beta - T
    return 0.5 * np.sum(r * r) + lam * (gamma * np.sum(np.sqrt(np.abs(beta))) + epsilon * np.sum(beta * beta))


def restricted_support_search(H, T, lam, gamma, epsilon, max_support=3):
    """Best hybrid objective over all supports of size <= max_support, ridge-solved per support."""
    N = H.shape[1]
    T = T.reshape(H.shape[0], -1)
    best = hybrid_half_objective(H, T, np.zeros((N, T.shape[1])), lam, gamma, epsilon)
    for k in range(1, max_support + 1):
        for S in itertools.combinations(range(N), k):
            Hs = H[:, S]
            bs = gauss_solve(Hs.T @ Hs + 2 * lam * epsilon * np.eye(k), Hs.T @ T)
            beta = np.zeros((N, T.shape[1]))
            beta[list(S)] = bs
            best = min(best, hybrid_half_objective(H, T, beta, lam, gamma, epsilon))
    return best


def lmax_mpmath(step, kappa0, kappa, epsilon, lam, xi, dps=50):
    """Iteration bound evaluated in 50-digit arithmetic."""
    import mpmath

    mpmath.mp.dps = dps
    s, k0, k, e, l, x = (mpmath.mpf(v) for v in (step, kappa0, kappa, epsilon, lam, xi))
    num = mpmath.log(s * (k + k0) / (x * k0 * (k + k0 + 4 * e * l)))
    den = mpmath.log((k + k0) / (k - k0))
    val = num / den
    if val < 0:
        return 1
    return int(mpmath.floor(val)) + 1
