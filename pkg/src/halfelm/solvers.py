"""Output-weight solvers for the six ELM variants.

``train_hybrid_half`` is the fixed-point half-thresholding iteration for

    0.5*||H b - T||_F^2 + lam*(gamma*sum|b|^{1/2} + epsilon*||b||_F^2)

with step ``delta = 2/(kappa0 + kappa)`` and an a-priori iteration count.
The other solvers are the classical baselines (least squares, ridge, lasso,
elastic net, pure l_{1/2}). Every solver takes ``(H, T, cfg)`` and returns a
:class:`SolverOutput`; multi-column ``T`` is handled as independent columns
sharing ``H``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .numerics import SpectrumBounds, as_dense, gram, min_norm_lsq, solve_spd, spectral_bounds
from .thresholding import prox_hybrid_half, prox_hybrid_soft

__all__ = [
    "RegConfig",
    "SolverOutput",
    "SOLVERS",
    "objective_hybrid_half",
    "objective_hybrid_soft",
    "fixed_point_map",
    "lmax_bound",
    "step_size",
    "train_hybrid_half",
    "train_half",
    "train_hybrid_soft",
    "train_l1",
    "train_l2",
    "train_elm",
]

KAPPA0_FLOOR = 1e-12


@dataclass(frozen=True)
class RegConfig:
    """Regularization and stopping parameters shared by all solvers.

    ``delta=None`` selects the step from the spectrum of ``H.T @ H``; a float
    fixes it. ``xi`` is the acceptable error used both in the a-priori
    iteration bound and in the residual stop.
    """

    lam: float = 1.0
    gamma: float = 1.0
    epsilon: float = 0.0
    mu: float = 0.0
    xi: float = 1e-4
    delta: float | None = None
    hard_iter_cap: int = 10_000
    ridge_floor: float = 1e-10
    spectral_tol: float = 1e-8
    spectral_max_iter: int = 5000

    def __post_init__(self):
        if self.gamma < 0 or self.epsilon < 0 or self.mu < 0:
            raise ValueError("gamma, epsilon and mu must be >= 0")
        if not self.xi > 0:
            raise ValueError(f"xi must be > 0, got {self.xi}")
        if self.hard_iter_cap < 1:
            raise ValueError("hard_iter_cap must be >= 1")
        if self.delta is not None and not self.delta > 0:
            raise ValueError(f"fixed delta must be > 0, got {self.delta}")

    def require_lam(self) -> None:
        if not self.lam > 0:
            raise ValueError(f"lam must be > 0 for regularized solvers, got {self.lam}")


@dataclass
class SolverOutput:
    beta: np.ndarray
    iterations: int = 0
    objective_trace: list[float] = field(default_factory=list)
    support_size: int = 0
    delta_used: float = 0.0
    lmax_used: int | None = None
    kappa_bounds: SpectrumBounds | None = None
    wall_time: float = 0.0
    diagnostics: list[str] = field(default_factory=list)
    converged: bool = True


def _prepare(H, T):
    H = as_dense(H, "H")
    T = np.asarray(T, dtype=np.float64)
    vector = T.ndim == 1
    T = as_dense(T[:, None] if vector else T, "T")
    if T.shape[0] != H.shape[0]:
        raise ValueError(f"H has {H.shape[0]} rows, T has {T.shape[0]}")
    return H, T, vector


def _gram_operator(H: np.ndarray, G: np.ndarray):
    """``b -> G @ b``, routed through ``H`` when that is cheaper (fewer rows than columns)."""
    if H.shape[0] < H.shape[1]:
        Ht = H.T
        return lambda b: Ht @ (H @ b)
    return lambda b: G @ b


def _penalty_half(beta, gamma, epsilon):
    return gamma * float(np.sum(np.sqrt(np.abs(beta)))) + epsilon * float(np.sum(beta * beta))


def _penalty_soft(beta, gamma, epsilon):
    return gamma * float(np.sum(np.abs(beta))) + epsilon * float(np.sum(beta * beta))


def objective_hybrid_half(H, T, beta, lam, gamma, epsilon) -> float:
    r = np.asarray(H, dtype=np.float64) @ beta - T
    return 0.5 * float(np.sum(r * r)) + lam * _penalty_half(beta, gamma, epsilon)


def objective_hybrid_soft(H, T, beta, lam, gamma, epsilon) -> float:
    r = np.asarray(H, dtype=np.float64) @ beta - T
    return 0.5 * float(np.sum(r * r)) + lam * _penalty_soft(beta, gamma, epsilon)


def fixed_point_map(H, T, beta, lam, gamma, epsilon, delta) -> np.ndarray:
    """One application of the map whose fixed points solve the hybrid model.

    A gradient step of length ``delta`` on the data term followed by the
    hybrid half-thresholding prox with weight ``lam*delta``.
    """
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    H = np.asarray(H, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    z = beta - delta * (H.T @ (H @ beta) - H.T @ T)
    return prox_hybrid_half(lam * delta, gamma, epsilon, z)


def lmax_bound(beta0, beta1, kappa0, kappa, epsilon, lam, xi) -> int:
    """Smallest positive iteration count that certifies ``xi`` accuracy a priori.

    Uses the first step length ``||beta1 - beta0||`` and the contraction
    factor ``(kappa - kappa0)/(kappa + kappa0)``.
    """
    if not kappa0 > 0:
        raise ValueError("kappa0 must be > 0 for an a-priori bound; rely on the residual stop instead")
    if not xi > 0:
        raise ValueError(f"xi must be > 0, got {xi}")
    step = float(np.linalg.norm(np.asarray(beta1, dtype=np.float64) - np.asarray(beta0, dtype=np.float64)))
    if step == 0.0 or kappa0 >= kappa or math.isinf(xi):
        return 1
    arg = step * (kappa + kappa0) / (xi * kappa0 * (kappa + kappa0 + 4.0 * epsilon * lam))
    if arg <= 1.0:
        return 1
    # log((k+k0)/(k-k0)) written with log1p to survive k0 << k
    rate = math.log1p(2.0 * kappa0 / (kappa - kappa0))
    return math.floor(math.log(arg) / rate) + 1


def step_size(G: np.ndarray, cfg: RegConfig, diagnostics: list[str]):
    """Spectrum bounds (kappa0 clamped away from 0) and the step length."""
    bounds = spectral_bounds(G, cfg.spectral_tol, cfg.spectral_max_iter)
    if bounds.kappa == 0.0:
        raise ValueError("H is zero; the hidden output matrix carries no signal")
    if bounds.kappa0 < KAPPA0_FLOOR * bounds.kappa:
        diagnostics.append(
            f"kappa0 estimate {bounds.kappa0:.3e} clamped to {KAPPA0_FLOOR:g}*kappa"
        )
        bounds = SpectrumBounds(KAPPA0_FLOOR * bounds.kappa, bounds.kappa, bounds.iterations_used)
    delta = cfg.delta if cfg.delta is not None else 2.0 / (bounds.kappa0 + bounds.kappa)
    return bounds, delta


def _check_finite(value: float, delta: float) -> None:
    if not math.isfinite(value):
        raise FloatingPointError(f"objective became non-finite with step delta={delta:g}")


def _finish(out: SolverOutput, vector: bool, t0: float) -> SolverOutput:
    out.support_size = int(np.count_nonzero(out.beta))
    if vector:
        out.beta = out.beta[:, 0]
    out.wall_time = time.perf_counter() - t0
    return out


def train_hybrid_half(H, T, cfg: RegConfig) -> SolverOutput:
    """Fixed-point iteration for the l2 + l_{1/2} regularized ELM.

    Starts from zero and keeps iterating until at least
    ``min(l_max, hard_iter_cap)`` steps have run and the fixed-point residual
    ``||b - Gamma b||_F`` is within ``xi*(1 + ||b||_F)``; ``hard_iter_cap``
    is absolute. The returned ``beta`` is the last iterate whose residual was
    measured.
    """
    t0 = time.perf_counter()
    cfg.require_lam()
    H, T, vector = _prepare(H, T)
    G = gram(H)
    HtT = H.T @ T
    half_T = 0.5 * float(np.sum(T * T))
    diagnostics: list[str] = []
    bounds, delta = step_size(G, cfg, diagnostics)
    lam, gamma, eps = cfg.lam, cfg.gamma, cfg.epsilon

    apply_G = _gram_operator(H, G)

    def gamma_map(beta):
        Gb = apply_G(beta)
        obj = half_T + 0.5 * float(np.sum(beta * Gb)) - float(np.sum(beta * HtT))
        obj += lam * _penalty_half(beta, gamma, eps)
        return prox_hybrid_half(lam * delta, gamma, eps, beta - delta * (Gb - HtT)), obj

    beta = np.zeros((H.shape[1], T.shape[1]))
    nxt, obj = gamma_map(beta)
    trace = [obj]
    lmax = lmax_bound(beta, nxt, bounds.kappa0, bounds.kappa, eps, lam, cfg.xi)
    floor_iter = min(lmax, cfg.hard_iter_cap)
    if lmax > cfg.hard_iter_cap:
        diagnostics.append(f"l_max={lmax} exceeds hard_iter_cap={cfg.hard_iter_cap}")

    it = 0
    converged = False
    while True:
        resid = float(np.linalg.norm(beta - nxt))
        converged = resid <= cfg.xi * (1.0 + float(np.linalg.norm(beta)))
        if (it >= floor_iter and converged) or it >= cfg.hard_iter_cap:
            break
        beta = nxt
        it += 1
        nxt, obj = gamma_map(beta)
        _check_finite(obj, delta)
        trace.append(obj)

    if not converged:
        diagnostics.append(f"residual {resid:.3e} above tolerance after {it} iterations")
    out = SolverOutput(
        beta=beta,
        iterations=it,
        objective_trace=trace,
        delta_used=delta,
        lmax_used=lmax,
        kappa_bounds=bounds,
        diagnostics=diagnostics,
        converged=converged,
    )
    return _finish(out, vector, t0)


def train_half(H, T, cfg: RegConfig) -> SolverOutput:
    """Pure l_{1/2} regularized ELM: the hybrid iteration with ``epsilon = 0``."""
    return train_hybrid_half(H, T, replace(cfg, epsilon=0.0))


def train_hybrid_soft(H, T, cfg: RegConfig) -> SolverOutput:
    """Forward-backward (ISTA) iteration for the l2 + l1 regularized ELM.

    Same step rule as the half solver; stops when the relative step
    ``||b_l - b_{l-1}||_F <= xi*(1 + ||b_l||_F)`` or at ``hard_iter_cap``.
    """
    t0 = time.perf_counter()
    cfg.require_lam()
    H, T, vector = _prepare(H, T)
    G = gram(H)
    HtT = H.T @ T
    half_T = 0.5 * float(np.sum(T * T))
    diagnostics: list[str] = []
    bounds, delta = step_size(G, cfg, diagnostics)
    lam, gamma, eps = cfg.lam, cfg.gamma, cfg.epsilon

    def objective(beta, Gb):
        val = half_T + 0.5 * float(np.sum(beta * Gb)) - float(np.sum(beta * HtT))
        return val + lam * _penalty_soft(beta, gamma, eps)

    apply_G = _gram_operator(H, G)
    beta = np.zeros((H.shape[1], T.shape[1]))
    Gb = apply_G(beta)
    trace = [objective(beta, Gb)]
    it = 0
    converged = False
    while it < cfg.hard_iter_cap:
        nxt = prox_hybrid_soft(lam * delta, gamma, eps, beta - delta * (Gb - HtT))
        step = float(np.linalg.norm(nxt - beta))
        beta = nxt
        it += 1
        Gb = apply_G(beta)
        obj = objective(beta, Gb)
        _check_finite(obj, delta)
        trace.append(obj)
        if step <= cfg.xi * (1.0 + float(np.linalg.norm(beta))):
            converged = True
            break

    if not converged:
        diagnostics.append(f"step above tolerance after {it} iterations")
    out = SolverOutput(
        beta=beta,
        iterations=it,
        objective_trace=trace,
        delta_used=delta,
        kappa_bounds=bounds,
        diagnostics=diagnostics,
        converged=converged,
    )
    return _finish(out, vector, t0)


def train_l1(H, T, cfg: RegConfig) -> SolverOutput:
    """Lasso ELM: ``0.5*||H b - T||^2 + lam*||b||_1``."""
    return train_hybrid_soft(H, T, replace(cfg, gamma=1.0, epsilon=0.0))


def train_l2(H, T, cfg: RegConfig) -> SolverOutput:
    """Ridge ELM: solves ``(H.T H + 2 mu I) b = H.T T`` exactly."""
    t0 = time.perf_counter()
    H, T, vector = _prepare(H, T)
    beta = solve_spd(gram(H), H.T @ T, 2.0 * cfg.mu)
    return _finish(SolverOutput(beta=beta), vector, t0)


def train_elm(H, T, cfg: RegConfig) -> SolverOutput:
    """Plain ELM: minimum-norm least squares."""
    t0 = time.perf_counter()
    H, T, vector = _prepare(H, T)
    beta = min_norm_lsq(H, T, cfg.ridge_floor)
    return _finish(SolverOutput(beta=beta), vector, t0)


SOLVERS: dict[str, Callable[..., SolverOutput]] = {
    "elm": train_elm,
    "l2": train_l2,
    "l1": train_l1,
    "half": train_half,
    "l2l1": train_hybrid_soft,
    "l2half": train_hybrid_half,
}
