"""Dataset loading, standardization, train/test splitting and synthetic fixtures."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .elm import LabelEncoding

__all__ = [
    "DatasetError",
    "Dataset",
    "DatasetSchema",
    "SplitSpec",
    "Transform",
    "SparseFixture",
    "load_csv",
    "load_schema",
    "standardize",
    "split",
    "synthetic_sparse",
]

DELIMITERS = (",", ";", "\t")


class DatasetError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    X: np.ndarray
    labels: tuple
    encoding: LabelEncoding

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.X.ndim != 2 or self.X.shape[0] != len(self.labels):
            raise DatasetError(f"{self.name}: X shape {self.X.shape} does not match {len(self.labels)} labels")
        if not self.labels:
            raise DatasetError(f"{self.name}: no samples")
        if not np.all(np.isfinite(self.X)):
            raise DatasetError(f"{self.name}: non-finite feature values")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def y(self) -> np.ndarray:
        """Class indices under ``encoding``."""
        return self.encoding.indices(self.labels)

    def subset(self, idx: np.ndarray, name: str | None = None) -> "Dataset":
        idx = np.asarray(idx)
        return Dataset(name or self.name, self.X[idx], tuple(self.labels[i] for i in idx), self.encoding)


@dataclass(frozen=True)
class DatasetSchema:
    """Where a CSV lives and how to read it."""

    path: str
    label_column: int | str = -1
    has_header: bool = False
    delimiter: str = ","
    name: str | None = None

    def __post_init__(self):
        if self.delimiter not in DELIMITERS:
            raise DatasetError(f"unsupported delimiter {self.delimiter!r}")

    @classmethod
    def from_dict(cls, d: dict, base_dir: Path | None = None) -> "DatasetSchema":
        unknown = set(d) - {"path", "label_column", "has_header", "delimiter", "name"}
        if unknown:
            raise DatasetError(f"unknown schema fields: {sorted(unknown)}")
        if "path" not in d:
            raise DatasetError("dataset schema needs a 'path'")
        path = Path(d["path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return cls(**{**d, "path": str(path)})

    def load(self) -> Dataset:
        return load_csv(self.path, self.label_column, self.has_header, self.delimiter, self.name)


def load_schema(path) -> DatasetSchema:
    """Read a JSON schema; a relative ``path`` inside it is taken relative to the schema file."""
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DatasetError(f"cannot read schema {path}: {exc}") from exc
    return DatasetSchema.from_dict(d, path.parent)


def load_csv(path, label_column: int | str = -1, has_header: bool = False,
             delimiter: str = ",", name: str | None = None) -> Dataset:
    """Load numeric features and a label column from a CSV file.

    ``label_column`` is a column index (negative counts from the end) or, with
    a header, a column name. Classes are ordered by first appearance. Numbers
    are parsed with ``float`` so the decimal point is always '.'.
    """
    path = Path(path)
    if delimiter not in DELIMITERS:
        raise DatasetError(f"unsupported delimiter {delimiter!r}")
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh, delimiter=delimiter) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc

    header = rows.pop(0) if has_header and rows else None
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    width = len(rows[0])
    first_line = 2 if header else 1
    for i, r in enumerate(rows):
        if len(r) != width:
            raise DatasetError(f"{path}: row {i + first_line} has {len(r)} fields, expected {width}")

    if isinstance(label_column, str):
        if header is None:
            raise DatasetError("label_column given by name but the file has no header")
        names = [h.strip() for h in header]
        if label_column not in names:
            raise DatasetError(f"{path}: no column named {label_column!r}")
        lc = names.index(label_column)
    else:
        lc = label_column + width if label_column < 0 else label_column
        if not 0 <= lc < width:
            raise DatasetError(f"{path}: label column {label_column} out of range for {width} columns")

    feat_cols = [j for j in range(width) if j != lc]
    X = np.empty((len(rows), len(feat_cols)))
    for i, r in enumerate(rows):
        for k, j in enumerate(feat_cols):
            try:
                X[i, k] = float(r[j])
            except ValueError:
                raise DatasetError(
                    f"{path}: cannot parse {r[j]!r} at row {i + first_line}, column {j + 1}"
                ) from None
    labels = tuple(r[lc].strip() for r in rows)
    classes = tuple(dict.fromkeys(labels))
    if len(classes) < 2:
        raise DatasetError(f"{path}: need at least 2 classes, found {len(classes)}")
    return Dataset(name or path.stem, X, labels, LabelEncoding(classes))


@dataclass(frozen=True, eq=False)
class Transform:
    """Affine feature map ``(X - mean) / scale`` fitted on a training set."""

    mean: np.ndarray
    scale: np.ndarray

    def apply(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.scale

    def apply_dataset(self, ds: Dataset) -> Dataset:
        return replace(ds, X=self.apply(ds.X))


def standardize(train: Dataset) -> tuple[Dataset, Transform]:
    """Zero mean, unit (population) std per feature; near-constant features are only centered."""
    mean = train.X.mean(axis=0)
    std = train.X.std(axis=0)
    scale = np.where(std < 1e-12, 1.0, std)
    tf = Transform(mean, scale)
    return tf.apply_dataset(train), tf


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.5
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def _take(n: int, frac: float) -> int:
    return int(np.floor(frac * n + 0.5))


def split(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Random disjoint train/test partition, deterministic in ``spec.seed``.

    The stratified variant splits every class separately, rounding its
    training share to the nearest count while leaving each side nonempty.
    """
    rng = np.random.default_rng(spec.seed)
    if spec.stratified:
        y = ds.y
        train_idx = []
        for c in range(ds.encoding.m):
            members = np.flatnonzero(y == c)
            if members.size == 0:
                continue
            if members.size < 2:
                raise DatasetError(
                    f"class {ds.encoding.classes[c]!r} has {members.size} sample(s); cannot stratify"
                )
            k = min(max(_take(members.size, spec.train_fraction), 1), members.size - 1)
            train_idx.append(rng.permutation(members)[:k])
        train_idx = np.sort(np.concatenate(train_idx))
    else:
        k = min(max(_take(ds.n, spec.train_fraction), 1), ds.n - 1)
        train_idx = np.sort(rng.permutation(ds.n)[:k])
    mask = np.zeros(ds.n, dtype=bool)
    mask[train_idx] = True
    return ds.subset(np.flatnonzero(mask)), ds.subset(np.flatnonzero(~mask))


@dataclass(frozen=True, eq=False)
class SparseFixture:
    H: np.ndarray
    T: np.ndarray
    beta_star: np.ndarray


def synthetic_sparse(n: int, p: int, support: int, noise: float = 0.0, seed: int = 0,
                     condition: float = 10.0) -> SparseFixture:
    """Regression problem ``T = H beta* + noise`` with a planted sparse ``beta*``.

    ``H`` (n x p, n >= p) has singular values log-spaced from 1 down to
    ``1/condition``; nonzero entries of ``beta*`` have magnitude in [1, 2].
    """
    if min(n, p) < 1 or not 0 <= support <= p or noise < 0 or condition < 1:
        raise ValueError("invalid synthetic_sparse parameters")
    if n < p:
        raise ValueError(f"need n >= p for controlled conditioning, got n={n}, p={p}")
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((n, p)))
    V, _ = np.linalg.qr(rng.standard_normal((p, p)))
    s = np.logspace(0.0, -np.log10(condition), p)
    H = (U * s) @ V.T
    beta = np.zeros((p, 1))
    idx = rng.choice(p, size=support, replace=False)
    beta[idx, 0] = rng.uniform(1.0, 2.0, size=support) * rng.choice([-1.0, 1.0], size=support)
    T = H @ beta + noise * rng.standard_normal((n, 1))
    return SparseFixture(H, T, beta)
