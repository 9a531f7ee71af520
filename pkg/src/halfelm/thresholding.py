"""Half (l_{1/2}) and soft (l_1) thresholding, plus their hybrid l2 variants.

All operators here are proximity maps for the scaled objective
``0.5*(u - t)**2 + lam * pen(u)`` applied entrywise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HalfThresholdParams",
    "half_threshold",
    "half_scalar",
    "half_vector",
    "soft_scalar",
    "soft_vector",
    "prox_hybrid_half",
    "prox_hybrid_soft",
]


def half_threshold(lam: float) -> float:
    """Magnitude at or below which ``half_vector(lam, .)`` returns exactly zero.

    Below ``1.5*lam**(2/3)`` the origin is the global minimizer of
    ``0.5*(u - t)**2 + lam*sqrt(|u|)``.
    """
    return 1.5 * lam ** (2.0 / 3.0)


@dataclass(frozen=True)
class HalfThresholdParams:
    lam: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")

    @property
    def threshold(self) -> float:
        return half_threshold(self.lam)


def half_vector(lam: float, beta) -> np.ndarray:
    """Entrywise minimizer of ``0.5*(u - beta)**2 + lam*|u|**0.5``.

    Above the threshold the nonzero root of the stationarity cubic is taken
    from its trigonometric form. Works on arrays of any shape.
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    beta = np.asarray(beta, dtype=np.float64)
    if lam == 0:
        return beta.copy()
    mag = np.abs(beta)
    out = np.zeros_like(beta)
    active = mag > half_threshold(lam)
    a = mag[active]
    # rounding can push the argument a hair past 1 right at the threshold
    phi = np.arccos(np.clip((lam / 4.0) * (a / 3.0) ** -1.5, -1.0, 1.0))
    out[active] = np.copysign((2.0 / 3.0) * a * (1.0 + np.cos(2.0 * (np.pi - phi) / 3.0)), beta[active])
    return out


def half_scalar(lam: float, t: float) -> float:
    return float(half_vector(lam, np.float64(t)))


def soft_vector(lam: float, beta) -> np.ndarray:
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    beta = np.asarray(beta, dtype=np.float64)
    return np.sign(beta) * np.maximum(np.abs(beta) - lam, 0.0)


def soft_scalar(lam: float, t: float) -> float:
    return float(soft_vector(lam, np.float64(t)))


def _hybrid_scaling(lam: float, gamma: float, epsilon: float) -> tuple[float, float]:
    if not lam > 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if gamma < 0 or epsilon < 0:
        raise ValueError("gamma and epsilon must be >= 0")
    shrink = 1.0 + 2.0 * epsilon * lam
    return lam * gamma / shrink, shrink


def prox_hybrid_half(lam: float, gamma: float, epsilon: float, beta) -> np.ndarray:
    """Prox of ``lam*(gamma*||u||_{1/2} + epsilon*||u||_2^2)``.

    The quadratic term folds into a rescaling of the input and of the
    half-threshold weight.
    """
    weight, shrink = _hybrid_scaling(lam, gamma, epsilon)
    return half_vector(weight, np.asarray(beta, dtype=np.float64) / shrink)


def prox_hybrid_soft(lam: float, gamma: float, epsilon: float, beta) -> np.ndarray:
    """Prox of ``lam*(gamma*||u||_1 + epsilon*||u||_2^2)`` (elastic-net style)."""
    weight, shrink = _hybrid_scaling(lam, gamma, epsilon)
    return soft_vector(weight, np.asarray(beta, dtype=np.float64) / shrink)
