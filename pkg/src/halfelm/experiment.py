"""Repeated-trial benchmark protocol and its report formats.

Every trial draws a fresh stratified split (seed ``base_seed + trial``) and,
per hidden-layer size, one fresh random layer. All configured solvers are
fitted on that same hidden output matrix, so differences between rows of the
report come from the penalty alone. Wall time covers the solver call only.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import __version__
from .data import DatasetError, DatasetSchema, SplitSpec, load_schema, split, standardize
from .elm import accuracy, hidden_matrix, init_hidden, one_hot, predict, remaining_nodes
from .solvers import SOLVERS, RegConfig

__all__ = [
    "ConfigError",
    "SolverSpec",
    "ExperimentConfig",
    "TrialResult",
    "CellSummary",
    "Failure",
    "ExperimentReport",
    "load_config",
    "run_experiment",
    "emit_report",
    "emit_curves",
    "mean_std",
]

DISPLAY_NAMES = {
    "elm": "ELM",
    "l2": "l2-ELM",
    "l1": "l1-ELM",
    "half": "l0.5-ELM",
    "l2l1": "l2-l1-ELM",
    "l2half": "l2-l0.5-ELM",
}
TIMING_FIELDS = ("wall_time", "time_mean")
_REG_KEYS = {f.name for f in fields(RegConfig)}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SolverSpec:
    kind: str
    label: str
    params: RegConfig

    @classmethod
    def from_dict(cls, d: dict) -> "SolverSpec":
        d = dict(d)
        kind = d.pop("kind", None)
        if kind not in SOLVERS:
            raise ConfigError(f"unknown solver kind {kind!r}; choose from {sorted(SOLVERS)}")
        label = d.pop("label", DISPLAY_NAMES[kind])
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        unknown = set(d) - _REG_KEYS
        if unknown:
            raise ConfigError(f"solver {label!r}: unknown parameters {sorted(unknown)}")
        try:
            params = RegConfig(**d)
            if kind not in ("elm", "l2"):
                params.require_lam()
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"solver {label!r}: {exc}") from exc
        return cls(kind, label, params)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "label": self.label, **asdict(self.params)}


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    dataset: DatasetSchema
    solvers: tuple[SolverSpec, ...]
    node_counts: tuple[int, ...] = (600,)
    trials: int = 30
    train_fraction: float = 0.5
    stratified: bool = True
    base_seed: int = 0
    standardize: bool = True
    weight_range: float = 1.0
    remaining_tol: float = 1e-8
    output_dir: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.node_counts or any(int(N) < 1 for N in self.node_counts):
            raise ConfigError("node_counts must be a nonempty list of positive integers")
        if not 0 < self.train_fraction < 1:
            raise ConfigError("train_fraction must be in (0, 1)")
        if not self.weight_range > 0:
            raise ConfigError("weight_range must be positive")

    @classmethod
    def from_dict(cls, d: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        d = dict(d)
        known = {f.name for f in fields(cls)} | {"notes"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        d.pop("notes", None)
        try:
            ds = d.pop("dataset")
            name = d.pop("name")
        except KeyError as exc:
            raise ConfigError(f"config needs {exc.args[0]!r}") from None
        try:
            if isinstance(ds, str):
                path = Path(ds)
                schema = load_schema(path if path.is_absolute() or base_dir is None else base_dir / path)
            else:
                schema = DatasetSchema.from_dict(ds, base_dir)
        except DatasetError as exc:
            raise ConfigError(f"dataset schema: {exc}") from exc
        solvers = tuple(SolverSpec.from_dict(s) for s in d.pop("solvers", []))
        if "node_counts" in d:
            d["node_counts"] = tuple(int(N) for N in d["node_counts"])
        if d.get("output_dir") and base_dir is not None and not Path(d["output_dir"]).is_absolute():
            d["output_dir"] = str(base_dir / d["output_dir"])
        try:
            return cls(name=name, dataset=schema, solvers=solvers, **d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["dataset"] = asdict(self.dataset)
        d["solvers"] = [s.to_dict() for s in self.solvers]
        d["node_counts"] = list(self.node_counts)
        return d


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        d = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return ExperimentConfig.from_dict(d, path.parent)


@dataclass(frozen=True)
class TrialResult:
    solver: str
    kind: str
    slot: int
    N: int
    trial: int
    seed: int
    layer_seed: int
    accuracy: float
    remaining_nodes: int
    wall_time: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class Failure:
    solver: str
    slot: int
    N: int
    trial: int
    error: str


@dataclass(frozen=True)
class CellSummary:
    solver: str
    kind: str
    slot: int
    N: int
    n_trials: int
    accuracy_mean: float
    accuracy_std: float
    remaining_nodes_mean: float
    time_mean: float
    iterations_mean: float


@dataclass
class ExperimentReport:
    name: str
    version: str
    config: dict
    seeds: list[int]
    trials: list[TrialResult] = field(default_factory=list)
    cells: list[CellSummary] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def node_counts(self) -> list[int]:
        return list(dict.fromkeys(c.N for c in self.cells))

    def cell(self, solver: str, N: int) -> CellSummary:
        for c in self.cells:
            if c.solver == solver and c.N == N:
                return c
        raise KeyError((solver, N))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        d = dict(d)
        d["trials"] = [TrialResult(**t) for t in d.get("trials", [])]
        d["cells"] = [CellSummary(**c) for c in d.get("cells", [])]
        d["failures"] = [Failure(**f) for f in d.get("failures", [])]
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def mean_std(values) -> tuple[float, float]:
    """Mean and sample (n-1) standard deviation, two-pass; std is 0 for one value."""
    values = [float(v) for v in values]
    n = len(values)
    if n == 0:
        return math.nan, math.nan
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    return mean, math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))


def _layer_seed(trial_seed: int, N: int) -> int:
    return int(np.random.SeedSequence([trial_seed, N]).generate_state(1)[0])


def _run_trial(cfg: ExperimentConfig, ds, t: int):
    seed = cfg.base_seed + t
    train, test = split(ds, SplitSpec(cfg.train_fraction, cfg.stratified, seed))
    if cfg.standardize:
        train, tf = standardize(train)
        test = tf.apply_dataset(test)
    T = one_hot(train.labels, ds.encoding)
    y_test = test.y
    results, failures = [], []
    for N in cfg.node_counts:
        layer_seed = _layer_seed(seed, N)
        layer = init_hidden(ds.X.shape[1], N, cfg.weight_range, layer_seed)
        H = hidden_matrix(layer, train.X)
        for slot, spec in enumerate(cfg.solvers):
            try:
                out = SOLVERS[spec.kind](H, T, spec.params)
                acc = accuracy(predict(layer, out.beta, test.X), y_test)
            except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
                failures.append(Failure(spec.label, slot, N, t, f"{type(exc).__name__}: {exc}"))
                continue
            results.append(TrialResult(
                solver=spec.label, kind=spec.kind, slot=slot, N=N, trial=t, seed=seed,
                layer_seed=layer_seed, accuracy=acc,
                remaining_nodes=remaining_nodes(out.beta, cfg.remaining_tol),
                wall_time=out.wall_time, iterations=out.iterations, converged=out.converged,
            ))
    return results, failures


def _summaries(cfg: ExperimentConfig, trials: list[TrialResult]) -> list[CellSummary]:
    cells = []
    for N in cfg.node_counts:
        for slot, spec in enumerate(cfg.solvers):
            rows = [r for r in trials if r.slot == slot and r.N == N]
            if not rows:
                continue
            acc_mean, acc_std = mean_std(r.accuracy for r in rows)
            cells.append(CellSummary(
                solver=spec.label, kind=spec.kind, slot=slot, N=N, n_trials=len(rows),
                accuracy_mean=acc_mean, accuracy_std=acc_std,
                remaining_nodes_mean=mean_std(r.remaining_nodes for r in rows)[0],
                time_mean=mean_std(r.wall_time for r in rows)[0],
                iterations_mean=mean_std(r.iterations for r in rows)[0],
            ))
    return cells


def run_experiment(cfg: ExperimentConfig, threads: int = 1, progress=None) -> ExperimentReport:
    """Run every (trial, N, solver) cell of ``cfg`` and aggregate the metrics.

    Solver failures are recorded in ``report.failures`` and do not stop the
    run. Results are deterministic in ``cfg`` regardless of ``threads``.
    """
    ds = cfg.dataset.load()

    def one(t):
        res = _run_trial(cfg, ds, t)
        if progress is not None:
            progress(t)
        return res

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(one, range(cfg.trials)))
    else:
        outcomes = [one(t) for t in range(cfg.trials)]

    trials = [r for res, _ in outcomes for r in res]
    failures = [f for _, fs in outcomes for f in fs]
    notes = [
        "all solvers in a (N, trial) cell share one hidden output matrix",
        "times cover the solver call only, not hidden-layer construction",
        "accuracy std is the sample (n-1) standard deviation across trials",
        f"features standardized on the training split: {cfg.standardize}",
    ]
    return ExperimentReport(
        name=cfg.name,
        version=__version__,
        config=cfg.to_dict(),
        seeds=[cfg.base_seed + t for t in range(cfg.trials)],
        trials=trials,
        cells=_summaries(cfg, trials),
        failures=failures,
        notes=notes,
    )


def _atomic_write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def report_markdown(report: ExperimentReport) -> str:
    lines = [
        f"# {report.name}",
        "",
        "| Methods | N | Times(s) | Remaining Nodes | Accuracy (% ± %) |",
        "|---|---|---|---|---|",
    ]
    for c in report.cells:
        lines.append(
            f"| {c.solver} | {c.N} | {c.time_mean:.4f} | {c.remaining_nodes_mean:.1f} "
            f"| {100 * c.accuracy_mean:.2f} ± {100 * c.accuracy_std:.2f} |"
        )
    if report.failures:
        lines += ["", "## Failures", ""]
        lines += [f"- {f.solver}, N={f.N}, trial {f.trial}: {f.error}" for f in report.failures]
    return "\n".join(lines) + "\n"


def report_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    names = [f.name for f in fields(TrialResult)]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for r in report.trials:
        w.writerow([getattr(r, n) for n in names])
    return buf.getvalue()


def report_json(report: ExperimentReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


_EMITTERS = {
    "markdown": ("report.md", report_markdown),
    "csv": ("trials.csv", report_csv),
    "json": ("report.json", report_json),
}


def emit_report(report: ExperimentReport, out_dir, formats=("markdown", "csv", "json")) -> dict[str, Path]:
    """Write the requested formats into ``out_dir``; returns format -> path."""
    out_dir = Path(out_dir)
    written = {}
    for fmt in formats:
        if fmt not in _EMITTERS:
            raise ValueError(f"unknown format {fmt!r}")
        fname, render = _EMITTERS[fmt]
        written[fmt] = _atomic_write(out_dir / fname, render(report))
    return written


def curves_csv(report: ExperimentReport) -> str:
    if len(report.node_counts) < 2:
        raise ValueError(
            f"accuracy-vs-nodes curves need at least 2 node counts, report has {report.node_counts}"
        )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["solver", "N", "mean_accuracy", "std_accuracy"])
    for c in report.cells:
        w.writerow([c.solver, c.N, c.accuracy_mean, c.accuracy_std])
    return buf.getvalue()


def emit_curves(report: ExperimentReport, path=None) -> str:
    """Long-format accuracy-vs-nodes CSV; also written to ``path`` when given."""
    text = curves_csv(report)
    if path is not None:
        _atomic_write(Path(path), text)
    return text
