"""Reproducible experiments: simulate, estimate, predict, compare.

A single JSON config fully determines an experiment; there is no
user-supplied code.  Reruns with the same config produce byte-identical
outputs, replica aggregation is in fixed index order, and every output
file embeds the config hash and package version.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .errors import ConfigError, PackdimError
from .estimators import _METHODS as _EST_METHODS
from .estimators import ScaleGrid, box_counting_dim, dim_field
from .fields import DriftSpec, FieldSpec, graph_points, sample_many
from .fractals import build_tx_system, build_uniform_cantor, natural_measure, realize_explicit
from .kernels import KernelContext
from .measures import DiscreteMeasure
from .numerics import Seed
from .theory import Regime, graph_lower, predict_graph_upper, predict_image

__all__ = ["ExperimentConfig", "PredictionReport", "run_experiment", "run_suite"]

_SET_KINDS = ("interval", "cantor", "txset")
_MODES = ("image", "graph")
_KNOWN_KEYS = {
    "name", "alpha", "d", "n", "set", "drift", "resolution",
    "grid", "replicas", "seed", "mode", "method", "box_method", "tolerance",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one simulation-vs-theory comparison.

    The canonical serialized form is sorted-key JSON; the config hash is
    the sha256 of that form, so any byte of the config changes the hash.
    """

    name: str
    alpha: float
    d: int
    n: int
    set_spec: dict
    drift: dict | None
    resolution: int
    grid: dict
    replicas: int
    seed: int
    mode: str
    method: str
    box_method: str
    tolerance: float

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        unknown = set(raw) - _KNOWN_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("name", "alpha", "d", "seed"):
            if key not in raw:
                raise ConfigError(f"config misses required key {key!r}")
        name = str(raw["name"])
        if not name or any(ch in name for ch in ",\n\r"):
            raise ConfigError("name must be nonempty and free of commas/newlines")
        cfg = cls(
            name=name,
            alpha=float(raw["alpha"]),
            d=int(raw["d"]),
            n=int(raw.get("n", 1)),
            set_spec=dict(raw.get("set", {"kind": "interval"})),
            drift=dict(raw["drift"]) if raw.get("drift") is not None else None,
            resolution=int(raw.get("resolution", 4096)),
            grid=dict(raw.get("grid", {"j_min": 4, "j_max": 9, "base": 2.0})),
            replicas=int(raw.get("replicas", 1)),
            seed=int(raw["seed"]),
            mode=str(raw.get("mode", "image")),
            method=str(raw.get("method", "regression")),
            box_method=str(raw.get("box_method", raw.get("method", "regression"))),
            tolerance=float(raw.get("tolerance", 0.25)),
        )
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "alpha": self.alpha,
            "d": self.d,
            "n": self.n,
            "set": self.set_spec,
            "drift": self.drift,
            "resolution": self.resolution,
            "grid": self.grid,
            "replicas": self.replicas,
            "seed": self.seed,
            "mode": self.mode,
            "method": self.method,
            "box_method": self.box_method,
            "tolerance": self.tolerance,
        }

    def to_json(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def canonical(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:12]

    def validate(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError("alpha must lie in (0, 1)")
        if self.d < 1 or self.n < 1:
            raise ConfigError("d and n must be positive")
        if self.replicas < 1:
            raise ConfigError("need at least one replica")
        if self.mode not in _MODES:
            raise ConfigError(f"mode must be one of {_MODES}")
        if self.mode == "graph" and self.n != 1:
            raise ConfigError("graph experiments need a one-dimensional domain")
        kind = self.set_spec.get("kind")
        if kind not in _SET_KINDS:
            raise ConfigError(f"set kind must be one of {_SET_KINDS}")
        if kind != "interval" and self.n != 1:
            raise ConfigError(f"{kind} sets live on the line; set n = 1")
        if not (1 <= self.resolution <= 2**14):
            raise ConfigError("resolution must lie in [1, 2^14]")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        for field_name, value in (("method", self.method), ("box_method", self.box_method)):
            if value not in _EST_METHODS:
                raise ConfigError(f"{field_name} must be one of {_EST_METHODS}")
        # Constructing the grid validates j_min/j_max/base.
        self.scale_grid()
        if self.drift is not None:
            self.drift_spec()

    def scale_grid(self) -> ScaleGrid:
        g = self.grid
        extra = set(g) - {"j_min", "j_max", "base"}
        if extra:
            raise ConfigError(f"unknown grid keys: {sorted(extra)}")
        try:
            return ScaleGrid(
                int(g.get("j_min", 4)), int(g.get("j_max", 9)), float(g.get("base", 2.0))
            )
        except PackdimError as exc:
            raise ConfigError(f"bad scale grid: {exc}") from exc

    def field_spec(self) -> FieldSpec:
        return FieldSpec(self.alpha, domain_dim=self.n, range_dim=self.d)

    def drift_spec(self) -> DriftSpec | None:
        if self.drift is None:
            return None
        spec = dict(self.drift)
        kind = spec.pop("kind", None)
        try:
            if kind == "zero":
                return DriftSpec.zero(self.d)
            if kind == "constant":
                return DriftSpec.constant(spec.pop("values"))
            if kind == "power":
                return DriftSpec.power(spec.pop("direction"), spec.pop("exponent"))
            if kind == "polynomial":
                return DriftSpec.polynomial(spec.pop("rows"))
        except (KeyError, PackdimError) as exc:
            raise ConfigError(f"bad drift spec: {exc}") from exc
        raise ConfigError(f"unknown drift kind {kind!r}")


def _build_set(cfg: ExperimentConfig) -> tuple[np.ndarray, DiscreteMeasure, float, bool]:
    """Sample points, sampling measure, packing dimension of the set, and
    whether consecutive points trace a curve (so box counting may connect
    them)."""
    kind = cfg.set_spec["kind"]
    spec = {k: v for k, v in cfg.set_spec.items() if k != "kind"}
    if kind == "interval":
        if spec:
            raise ConfigError(f"interval set takes no parameters, got {sorted(spec)}")
        if cfg.n == 1:
            pts = np.linspace(0.0, 1.0, cfg.resolution)[:, None]
        else:
            per_axis = max(2, round(cfg.resolution ** (1.0 / cfg.n)))
            axes = [np.linspace(0.0, 1.0, per_axis)] * cfg.n
            mesh = np.meshgrid(*axes, indexing="ij")
            pts = np.stack([m.ravel() for m in mesh], axis=1)
        k = len(pts)
        mu = DiscreteMeasure(pts, np.full(k, 1.0 / k))
        return pts, mu, float(cfg.n), cfg.n == 1
    if kind == "cantor":
        try:
            branches = int(spec.pop("branches"))
            ratio = float(spec.pop("ratio"))
            level = int(spec.pop("level"))
        except KeyError as exc:
            raise ConfigError(f"cantor set needs key {exc.args[0]!r}") from exc
        if spec:
            raise ConfigError(f"unknown cantor keys: {sorted(spec)}")
        system = build_uniform_cantor(branches, ratio, level)
        mu = natural_measure(system, level)
        return mu.atoms, mu, system.params["similarity_dimension"], False
    # txset
    try:
        beta = float(spec.pop("beta"))
        level = int(spec.pop("level"))
    except KeyError as exc:
        raise ConfigError(f"txset needs key {exc.args[0]!r}") from exc
    delta0 = float(spec.pop("delta0", 0.25))
    if spec:
        raise ConfigError(f"unknown txset keys: {sorted(spec)}")
    symbolic = build_tx_system(beta, delta0, levels=max(level, 1))
    system = realize_explicit(symbolic, level)
    mu = natural_measure(system, level)
    return mu.atoms, mu, beta, False


def _predictions(cfg: ExperimentConfig, beta_set: float) -> dict[str, float]:
    if cfg.n > 1:
        # Cube domain: the image prediction generalizes directly; the
        # one-parameter Regime type stays out of the way.
        return {"dimension": min(float(cfg.d), beta_set / cfg.alpha)}
    regime = Regime(cfg.alpha, cfg.d, beta_set)
    if cfg.mode == "image":
        return {"dimension": predict_image(regime)}
    out = {"dimension": predict_graph_upper(regime)}
    if regime.alpha * regime.d < 1.0 and 0.0 < beta_set < 1.0:
        out["graph_floor"] = graph_lower(regime)
    return out


@dataclass(frozen=True)
class PredictionReport:
    """Closed-form predictions against empirical estimates.

    ``estimated`` maps estimator name to a summary dict that names the
    grid, method, replicas, and seed behind the number, so the table is
    auditable without the config file."""

    name: str
    config_hash: str
    predicted: dict
    estimated: dict
    gaps: dict
    passed: bool

    def summary_row(self) -> dict:
        return {
            "name": self.name,
            "predicted": self.predicted["dimension"],
            "estimate_box": self.estimated["box"]["value"],
            "estimate_kernel": self.estimated["kernel"]["value"],
            "gap": max(self.gaps.values()),
            "pass": self.passed,
        }

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "config_hash": self.config_hash,
            "version": __version__,
            "predicted": self.predicted,
            "estimated": self.estimated,
            "gaps": self.gaps,
            "pass": self.passed,
        }


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_report_files(report: PredictionReport, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    stamp = f"# config_hash={report.config_hash} version={__version__}\n"
    csv_path = os.path.join(out_dir, f"{report.name}.csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(stamp)
        fh.write("field,replica,value\n")
        for i, v in enumerate(report.estimated["box"]["replicas_values"]):
            fh.write(f"estimate_box,{i},{_fmt(v)}\n")
        fh.write(f"estimate_box_mean,,{_fmt(report.estimated['box']['value'])}\n")
        fh.write(f"estimate_kernel,,{_fmt(report.estimated['kernel']['value'])}\n")
        for key in sorted(report.predicted):
            fh.write(f"predicted_{key},,{_fmt(report.predicted[key])}\n")
        for key in sorted(report.gaps):
            fh.write(f"gap_{key},,{_fmt(report.gaps[key])}\n")
        fh.write(f"pass,,{int(report.passed)}\n")
    json_path = os.path.join(out_dir, f"{report.name}.json")
    with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_experiment(
    config: ExperimentConfig, out_dir: str | None = None, threads: int = 1
) -> PredictionReport:
    """Simulate, estimate by box counting and by kernel scaling, compare to
    the closed-form prediction.  Deterministic given the seed: replicas
    draw from indexed substreams and aggregate in index order, whatever
    ``threads`` is.  With ``out_dir`` set, writes <name>.csv and
    <name>.json there."""
    config.validate()
    pts, mu, beta_set, connect = _build_set(config)
    grid = config.scale_grid()
    field = config.field_spec()
    drift = config.drift_spec()
    predicted = _predictions(config, beta_set)

    try:
        paths = sample_many(field, pts, Seed(config.seed), config.replicas, drift=drift)
    except PackdimError as exc:
        raise type(exc)(f"simulation stage: {exc}") from exc

    def box_of(path) -> float:
        cloud = path.values if config.mode == "image" else graph_points(path)
        return box_counting_dim(
            cloud, grid, connect=connect, method=config.box_method
        ).value

    try:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                box_values = list(pool.map(box_of, paths))
        else:
            box_values = [box_of(p) for p in paths]
    except PackdimError as exc:
        raise type(exc)(f"box-count stage: {exc}") from exc
    box_mean = float(np.mean(box_values))

    try:
        ctx = KernelContext(field, drift, mu, config.mode)
        kernel_est = dim_field(ctx, grid, method=config.method)
    except PackdimError as exc:
        raise type(exc)(f"kernel stage: {exc}") from exc

    estimated = {
        "box": {
            "value": box_mean,
            "replicas_values": [float(v) for v in box_values],
            "grid": [grid.j_min, grid.j_max, grid.base],
            "method": config.box_method,
            "replicas": config.replicas,
            "seed": config.seed,
            "connect": connect,
        },
        "kernel": {
            "value": kernel_est.value,
            "grid": [grid.j_min, grid.j_max, grid.base],
            "method": kernel_est.method,
            "replicas": 1,
            "seed": config.seed,
        },
    }
    target = predicted["dimension"]
    gaps = {
        "box": abs(box_mean - target),
        "kernel": abs(kernel_est.value - target),
    }
    passed = all(g <= config.tolerance for g in gaps.values())
    report = PredictionReport(
        config.name, config.config_hash(), predicted, estimated, gaps, passed
    )
    if out_dir is not None:
        _write_report_files(report, out_dir)
    return report


def run_suite(config_dir: str, out_path: str | None = None, threads: int = 1) -> list[dict]:
    """Run every *.json config in ``config_dir`` (sorted by filename) and
    write one summary.csv row per experiment.  A failing experiment does
    not stop the suite; its row records the error."""
    files = sorted(
        f for f in os.listdir(config_dir) if f.endswith(".json")
    )
    if not files:
        raise ConfigError(f"no .json configs in {config_dir!r}")
    rows = []
    hashes = []
    for fname in files:
        path = os.path.join(config_dir, fname)
        try:
            cfg = ExperimentConfig.from_json(path)
            hashes.append(cfg.config_hash())
            report = run_experiment(cfg, threads=threads)
            row = report.summary_row()
        except PackdimError as exc:
            row = {
                "name": os.path.splitext(fname)[0],
                "predicted": math.nan,
                "estimate_box": math.nan,
                "estimate_kernel": math.nan,
                "gap": math.nan,
                "pass": f"error:{type(exc).__name__}",
            }
        rows.append(row)
    suite_hash = hashlib.sha256("".join(hashes).encode()).hexdigest()[:12]
    if out_path is None:
        out_path = os.path.join(config_dir, "summary.csv")
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# config_hash={suite_hash} version={__version__}\n")
        fh.write("name,predicted,estimate_box,estimate_kernel,gap,pass\n")
        for row in rows:
            passes = row["pass"]
            cell = passes if isinstance(passes, str) else str(bool(passes)).lower()
            fh.write(
                f"{row['name']},{_fmt(row['predicted'])},{_fmt(row['estimate_box'])},"
                f"{_fmt(row['estimate_kernel'])},{_fmt(row['gap'])},{cell}\n"
            )
    return rows
