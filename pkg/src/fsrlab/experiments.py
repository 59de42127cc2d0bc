"""Experiment configuration, execution, and CSV/JSON serialization.

A config is a flat key=value mapping (file or command line); every run
produces one CSV row per seed with a fixed column order, plus a JSON sidecar
holding the fully resolved config (and fitted slopes for sweeps).
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import multidim as md
from . import overlap as ov
from . import readout as ro
from .functions import FunctionSpec, GridFunction, evaluate, f1, f2, f3, f4, sample

SCHEMA_VERSION = 1

CSV_COLUMNS = ("schema_version", "function", "method", "dims", "N", "M", "margin",
               "n_shot", "n_shot1", "n_shot2", "n_iter", "delta", "statevector",
               "axis", "axis_value", "seed", "adaptive_M", "N_sum", "rmse",
               "l2ns", "wall_ms")

POINTS_COLUMNS = ("schema_version", "function", "method", "seed", "x", "y",
                  "truth", "value")

METHODS = ("rsr", "rsr-post", "fsr", "fsr-adaptive", "fqfsr-exact", "fqfsr-approx")

_NAMED_FUNCTIONS = {"f1": f1, "f2": f2, "f3": f3, "f4": f4}


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    function: str = "f1"
    expression: str = ""
    method: str = "fsr"
    N: int = 1024
    L: float = 1.0
    M: int = 64
    margin: int = 0
    n_shot: int = 10000
    n_shot1: int | None = None
    n_shot2: int | None = None
    n_iter: int = 1
    delta: float | None = None
    cutoff: int = 64           # rsr-post truncation
    x: tuple = ()              # fqfsr target points; empty = every 16th grid point
    seeds: tuple = (0, 1, 2, 3, 4)
    statevector: bool = False
    margin2d: int | None = None
    workers: int = 1
    out: str = "experiment"

    def resolved(self) -> "ExperimentConfig":
        cfg = self
        if cfg.n_shot1 is None:
            cfg = replace(cfg, n_shot1=cfg.n_shot)
        if cfg.n_shot2 is None:
            cfg = replace(cfg, n_shot2=cfg.n_shot)
        return cfg

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; choose from {METHODS}")
        if self.function not in _NAMED_FUNCTIONS and self.function != "custom":
            raise ConfigError(f"unknown function {self.function!r} "
                              "(f1/f2/f3/f4 or custom with expression=...)")
        if self.function == "custom" and not self.expression:
            raise ConfigError("function=custom requires expression=...")
        for name in ("N", "M"):
            v = getattr(self, name)
            if v < 1 or v & (v - 1):
                raise ConfigError(f"{name}={v} must be a positive power of two")
        if self.M > self.N:
            raise ConfigError(f"M={self.M} exceeds N={self.N}")
        if self.n_shot < 0 or self.n_iter < 1:
            raise ConfigError("need n_shot >= 0 and n_iter >= 1")
        if self.delta is not None and self.delta < 0:
            raise ConfigError("delta must be nonnegative")
        if not self.seeds:
            raise ConfigError("need at least one seed")

    def spec(self) -> FunctionSpec:
        if self.function == "custom":
            return FunctionSpec("custom-expression", (), self.expression)
        return _NAMED_FUNCTIONS[self.function]()

    def grid_function(self) -> GridFunction:
        return sample(self.spec(), self.L, self.N)


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in ("function", "expression", "method", "out"):
        return raw
    if key == "statevector":
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"statevector={raw!r} is not a boolean")
    if key == "seeds":
        return tuple(int(s) for s in raw.split(",") if s != "")
    if key == "x":
        return tuple(float(s) for s in raw.split(",") if s != "")
    if key in ("L", "delta"):
        return float(raw)
    return int(raw)


def parse_config(pairs, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Build a config from an iterable of 'key=value' strings."""
    cfg = base or ExperimentConfig()
    fields = set(ExperimentConfig.__dataclass_fields__)
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"expected key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in fields:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            cfg = replace(cfg, **{key: _parse_value(key, raw)})
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for {key}: {exc}") from exc
    return cfg


def load_config(path: str) -> ExperimentConfig:
    """Read a flat key=value config file ('#' starts a comment)."""
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                pairs.append(line)
    return parse_config(pairs)


@dataclass(frozen=True)
class SweepRecord:
    config: ExperimentConfig
    axis: str
    axis_value: float | int | str
    seed: int
    adaptive_M: str
    N_sum: int
    rmse: float
    l2ns: float
    wall_ms: float
    points: tuple = field(default=(), compare=False)  # (x[, y], truth, value) rows

    def row(self) -> dict:
        c = self.config
        return {
            "schema_version": SCHEMA_VERSION,
            "function": c.function,
            "method": c.method,
            "dims": c.spec().dims,
            "N": c.N, "M": c.M, "margin": c.margin,
            "n_shot": c.n_shot, "n_shot1": c.n_shot1, "n_shot2": c.n_shot2,
            "n_iter": c.n_iter,
            "delta": "" if c.delta is None else repr(c.delta),
            "statevector": int(c.statevector),
            "axis": self.axis, "axis_value": self.axis_value,
            "seed": self.seed,
            "adaptive_M": self.adaptive_M, "N_sum": self.N_sum,
            "rmse": repr(self.rmse), "l2ns": repr(self.l2ns),
            "wall_ms": f"{self.wall_ms:.1f}",
        }


def _grid_points_rows(gf: GridFunction, rec) -> tuple:
    if gf.dims == 1:
        x = gf.grid()[0]
        return tuple((repr(float(xi)), "", repr(float(t)), repr(float(v)))
                     for xi, t, v in zip(x, gf.samples, rec.values))
    ax1, ax2 = gf.grid()
    rows = []
    for i, xi in enumerate(ax1):
        for j, yj in enumerate(ax2):
            rows.append((repr(float(xi)), repr(float(yj)),
                         repr(float(gf.samples[i, j])), repr(float(rec.values[i, j]))))
    return tuple(rows)


def run_single(cfg: ExperimentConfig, seed: int, axis: str = "",
               axis_value="") -> SweepRecord:
    """Execute one pipeline for one seed and collect metrics."""
    cfg = cfg.resolved()
    gf = cfg.grid_function()
    t0 = time.perf_counter()
    adaptive = ""
    n_sum = 0
    m = int(np.log2(cfg.M))
    if gf.dims == 1:
        if cfg.method == "rsr":
            rec = ro.rsr_readout(gf, cfg.n_shot, seed, statevector=cfg.statevector)
        elif cfg.method == "rsr-post":
            raw = ro.rsr_readout(gf, cfg.n_shot, seed, statevector=cfg.statevector)
            rec = ro.rsr_postprocess(raw, cfg.cutoff, gf.samples, gf.A)
        elif cfg.method == "fsr":
            readout, rec = ro.fsr_readout(gf, m, cfg.n_shot1, cfg.n_shot2,
                                          cfg.n_iter, seed, cfg.delta,
                                          statevector=cfg.statevector)
            n_sum = readout.N_sum
        elif cfg.method == "fsr-adaptive":
            readout, rec = ro.fsr_adaptive(gf, cfg.n_shot, seed, cfg.margin,
                                           cfg.delta, statevector=cfg.statevector,
                                           n_iter=cfg.n_iter)
            adaptive, n_sum = str(readout.M), readout.N_sum
        elif cfg.method in ("fqfsr-exact", "fqfsr-approx"):
            xs = cfg.x or tuple(gf.grid()[0][:: max(cfg.N // 16, 1)])
            vals, truth = [], []
            for xi in xs:
                if cfg.method == "fqfsr-exact":
                    est = ov.fqfsr_exact(gf, xi, cfg.n_shot, np.random.SeedSequence(
                        [seed, int(round(xi * 2 ** 30))]), statevector=cfg.statevector)
                else:
                    est = ov.fqfsr_approx(gf, xi, m, cfg.n_shot, np.random.SeedSequence(
                        [seed, int(round(xi * 2 ** 30))]), statevector=cfg.statevector)
                vals.append(est.value)
                truth.append(abs(float(evaluate(cfg.spec(), xi))))
            vals, truth = np.array(vals), np.array(truth)
            rec = ro.Reconstruction(np.array(xs), vals, cfg.method).with_metrics(
                truth, gf.A)
        else:  # pragma: no cover - validate() guards this
            raise ConfigError(f"method {cfg.method} not available")
    else:
        if cfg.method == "rsr":
            rec = md.rsr_readout_2d(gf, cfg.n_shot, seed, statevector=cfg.statevector)
        elif cfg.method == "fsr":
            readout, rec = md.fsr_readout_2d(gf, m, m, cfg.n_shot1, cfg.n_shot2,
                                             seed, cfg.delta,
                                             statevector=cfg.statevector)
            n_sum = readout.N_sum
        elif cfg.method == "fsr-adaptive":
            margin = cfg.margin2d if cfg.margin2d is not None else cfg.margin
            readout, rec = md.fsr_adaptive_2d(gf, cfg.n_shot, seed, margin,
                                              cfg.delta, statevector=cfg.statevector)
            adaptive = "x".join(str(v) for v in readout.M_per_dim)
            n_sum = readout.N_sum
        else:
            raise ConfigError(f"method {cfg.method} is 1D-only")
    wall = (time.perf_counter() - t0) * 1e3
    points = _grid_points_rows(gf, rec) if cfg.method not in (
        "fqfsr-exact", "fqfsr-approx") else tuple(
        (repr(float(xi)), "", repr(float(t)), repr(float(v)))
        for xi, t, v in zip(rec.points, truth, rec.values))
    return SweepRecord(cfg, axis, axis_value, seed, adaptive, n_sum,
                       rec.rmse, rec.l2ns, wall, points)


def _run_task(args):
    cfg, seed, axis, axis_value = args
    return run_single(cfg, seed, axis, axis_value)


def run(cfg: ExperimentConfig) -> list:
    """All seeds of one configuration, in deterministic seed order."""
    cfg.validate()
    tasks = [(cfg, s, "", "") for s in cfg.seeds]
    return _execute(tasks, cfg.workers)


def sweep(cfg: ExperimentConfig, axis: str, values) -> tuple:
    """One run per (axis value, seed); returns (records, slope or None).

    The slope is the least-squares fit of log(rmse) against log(axis value).
    """
    cfg.validate()
    if axis not in ("M", "n_shot", "N"):
        raise ConfigError(f"sweep axis must be M, n_shot, or N, not {axis!r}")
    values = [int(v) for v in values]
    if values != sorted(values):
        raise ConfigError("sweep values must be sorted ascending")
    tasks = []
    for v in values:
        point = replace(cfg, **{axis: v})
        if axis == "N" and cfg.M > v:
            point = replace(point, M=min(cfg.M, v))
        point.validate()
        tasks.extend((point, s, axis, v) for s in cfg.seeds)
    records = _execute(tasks, cfg.workers)
    slope = None
    if len(values) < 3:
        warnings.warn("fewer than 3 sweep values; slope omitted", stacklevel=2)
    else:
        xs = np.log([r.axis_value for r in records])
        ys = np.log([max(r.rmse, 1e-300) for r in records])
        slope = float(np.polyfit(xs, ys, 1)[0])
    return records, slope


def _execute(tasks, workers: int) -> list:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_task, tasks))
    return [_run_task(t) for t in tasks]


# -- serialization --

def output_dir() -> str:
    return os.environ.get("FSRLAB_OUT_DIR", ".")


def _out_base(cfg_out: str) -> str:
    if os.path.isabs(cfg_out):
        return cfg_out
    return os.path.join(output_dir(), cfg_out)


def write_records(records, out: str, config: ExperimentConfig,
                  slope: float | None = None, dump_points: bool = False) -> str:
    """Write <out>.csv (+ optional <out>.points.csv) and <out>.config.json;
    returns the CSV path."""
    base = _out_base(out)
    os.makedirs(os.path.dirname(base) or ".", exist_ok=True)
    csv_path = base + ".csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(CSV_COLUMNS))
        writer.writeheader()
        for rec in records:
            writer.writerow(rec.row())
    sidecar = {
        "schema_version": SCHEMA_VERSION,
        "config": {k: (list(v) if isinstance(v, tuple) else v)
                   for k, v in asdict(config.resolved()).items()},
        "slope": slope,
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    with open(base + ".config.json", "w") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")
    if dump_points:
        with open(base + ".points.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(POINTS_COLUMNS))
            for rec in records:
                c = rec.config
                for row in rec.points:
                    writer.writerow([SCHEMA_VERSION, c.function, c.method,
                                     rec.seed, *row])
    return csv_path


def render_data(in_path: str, out_path: str) -> str:
    """Aggregate per-seed rows to mean and stddev per sweep point."""
    with open(in_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ConfigError(f"no data rows in {in_path}")
    group_cols = [c for c in CSV_COLUMNS
                  if c not in ("seed", "adaptive_M", "N_sum", "rmse", "l2ns",
                               "wall_ms")]
    groups: dict = {}
    order = []
    for row in rows:
        key = tuple(row[c] for c in group_cols)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append((float(row["rmse"]), float(row["l2ns"])))
    out_cols = group_cols + ["n_seeds", "mean_rmse", "std_rmse", "mean_l2ns",
                             "std_l2ns"]
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(out_cols)
    for key in order:
        vals = np.array(groups[key])
        writer.writerow(list(key) + [len(vals),
                                     repr(float(vals[:, 0].mean())),
                                     repr(float(vals[:, 0].std())),
                                     repr(float(vals[:, 1].mean())),
                                     repr(float(vals[:, 1].std()))])
    os.makedirs(os.path.dirname(out_path) or ".", exist_ok=True)
    with open(out_path, "w", newline="") as fh:
        fh.write(buf.getvalue())
    return out_path
