"""Random hidden layer, target encoding, decoding and evaluation metrics."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np
from scipy.special import expit

from .numerics import as_dense

__all__ = [
    "ActivationKind",
    "HiddenLayer",
    "LabelEncoding",
    "init_hidden",
    "hidden_matrix",
    "one_hot",
    "predict",
    "accuracy",
    "remaining_nodes",
]


class ActivationKind(enum.Enum):
    SIGMOID = "sigmoid"

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return expit(x)


@dataclass(frozen=True, eq=False)
class HiddenLayer:
    """Frozen random feature map ``x -> g(W x + b)``.

    ``weights`` has shape (node_count, input_dim). Arrays are made read-only
    at construction.
    """

    weights: np.ndarray
    biases: np.ndarray
    weight_range: float
    seed: int
    activation: ActivationKind = ActivationKind.SIGMOID

    def __post_init__(self):
        self.weights.setflags(write=False)
        self.biases.setflags(write=False)

    @property
    def input_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def node_count(self) -> int:
        return self.weights.shape[0]

    def __eq__(self, other):
        if not isinstance(other, HiddenLayer):
            return NotImplemented
        return (
            np.array_equal(self.weights, other.weights)
            and np.array_equal(self.biases, other.biases)
            and (self.weight_range, self.seed, self.activation)
            == (other.weight_range, other.seed, other.activation)
        )


@dataclass(frozen=True)
class LabelEncoding:
    """Ordered, duplicate-free class list; position is the class index."""

    classes: tuple
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        classes = tuple(self.classes)
        object.__setattr__(self, "classes", classes)
        if len(set(classes)) != len(classes):
            raise ValueError("class labels must be distinct")
        if len(classes) < 2:
            raise ValueError(f"need at least 2 classes, got {len(classes)}")
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(classes)})

    @classmethod
    def from_labels(cls, labels: Sequence[Hashable]) -> "LabelEncoding":
        """Classes in order of first appearance."""
        return cls(tuple(dict.fromkeys(labels)))

    @property
    def m(self) -> int:
        return len(self.classes)

    def indices(self, labels: Sequence[Hashable]) -> np.ndarray:
        try:
            return np.array([self._index[lab] for lab in labels], dtype=np.intp)
        except KeyError as exc:
            raise KeyError(f"unknown label {exc.args[0]!r}") from None


def init_hidden(p: int, N: int, c: float = 1.0, seed: int = 0) -> HiddenLayer:
    """Draw weights and biases i.i.d. uniform on [-c, c] from a seeded generator."""
    if p < 1 or N < 1:
        raise ValueError(f"need p >= 1 and N >= 1, got p={p}, N={N}")
    if not c > 0:
        raise ValueError(f"weight range must be positive, got {c}")
    rng = np.random.default_rng(seed)
    weights = rng.uniform(-c, c, size=(N, p))
    biases = rng.uniform(-c, c, size=N)
    return HiddenLayer(weights, biases, float(c), int(seed))


def hidden_matrix(layer: HiddenLayer, X) -> np.ndarray:
    """Hidden output matrix, shape (n_samples, node_count)."""
    X = as_dense(X, "X")
    if X.shape[1] != layer.input_dim:
        raise ValueError(f"X has {X.shape[1]} features, layer expects {layer.input_dim}")
    return layer.activation(X @ layer.weights.T + layer.biases)


def one_hot(labels: Sequence[Hashable], enc: LabelEncoding) -> np.ndarray:
    idx = enc.indices(labels)
    T = np.zeros((len(idx), enc.m))
    T[np.arange(len(idx)), idx] = 1.0
    return T


def predict(layer: HiddenLayer, beta, X) -> np.ndarray:
    """Class index per sample: row argmax of ``H @ beta``, lowest index on ties."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.ndim == 1:
        beta = beta[:, None]
    if beta.shape[0] != layer.node_count:
        raise ValueError(f"beta has {beta.shape[0]} rows, layer has {layer.node_count} nodes")
    return np.argmax(hidden_matrix(layer, X) @ beta, axis=1)


def accuracy(pred, truth) -> float:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError(f"length mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ValueError("accuracy of an empty prediction is undefined")
    return float(np.mean(pred == truth))


def remaining_nodes(beta, tol: float = 1e-8) -> int:
    """Hidden nodes whose outgoing weight row has any entry above ``tol`` in magnitude."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.ndim == 1:
        beta = beta[:, None]
    if beta.size == 0:
        return 0
    return int(np.count_nonzero(np.max(np.abs(beta), axis=1) > tol))
