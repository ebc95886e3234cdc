"""Benchmark protocol: instance sweeps over penalty factors, method
comparisons, and the mean/variance accuracy statistics, emitting
machine-readable results.

Every random draw (graph, penalty factors, initial angles) derives from a
sub-seed that is a pure function of (master_seed, size, instance, start,
factor index), so any cell can be reproduced in isolation and re-running an
experiment reproduces results.json byte-identically.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
import csv
import io
import json
import os

import numpy as np

from .ansatz import FEASIBILITY, PENALTY, make_ansatz
from .graphs import ConfigError, generate_erdos_renyi
from .vqa import make_loss, optimize, random_params

PROBLEMS = ("MVC", "MIS")
MODES = ("penalty-sweep", "comparison")

_TAG_GRAPH, _TAG_LAMBDA, _TAG_START = 1, 2, 3

CSV_COLUMNS = [
    "size",
    "method",
    "depth",
    "lambda",
    "instance",
    "start",
    "accuracy",
    "loss",
    "p1",
    "evals",
]


@dataclass
class ExperimentConfig:
    problem: str = "MVC"
    mode: str = "comparison"
    sizes: list[int] = field(default_factory=lambda: [3, 4, 5, 6])
    instances_per_size: int = 10
    starts_per_instance: int = 6
    num_penalty_factors: int = 5
    penalty_lower_bound: float = 1.0
    penalty_span: float = 10.0
    our_depth: int = 2
    penalty_depth: int = 3
    sweep_depths: list[int] = field(default_factory=lambda: [2, 3])
    edge_probability: float = 0.5
    master_seed: int = 1
    budget: int = 20000
    workers: int = 1

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ConfigError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.sizes or any(n < 2 or n > 24 for n in self.sizes):
            raise ConfigError(f"sizes must be within 2..24, got {self.sizes}")
        for name in (
            "instances_per_size",
            "starts_per_instance",
            "num_penalty_factors",
            "our_depth",
            "penalty_depth",
            "budget",
            "workers",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not 0.0 < self.edge_probability <= 1.0:
            raise ConfigError("edge_probability must be in (0, 1]")
        if self.penalty_lower_bound <= 0 or self.penalty_span <= 0:
            raise ConfigError("penalty interval must be positive")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be >= 0")

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        try:
            if str(path).endswith(".toml"):
                try:
                    import tomllib
                except ModuleNotFoundError:
                    import tomli as tomllib
                with open(path, "rb") as fh:
                    obj = tomllib.load(fh)
            else:
                with open(path) as fh:
                    obj = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(obj)


def _subseed(master: int, *key: int) -> int:
    ss = np.random.SeedSequence([int(master)] + [int(k) for k in key])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def graph_seed(cfg: ExperimentConfig, size: int, instance: int) -> int:
    return _subseed(cfg.master_seed, _TAG_GRAPH, size, instance)


def penalty_factor(cfg: ExperimentConfig, size: int, p_index: int) -> float:
    """Uniform draw from (a, a + span]; a is the ground-state threshold."""
    u = np.random.default_rng(
        _subseed(cfg.master_seed, _TAG_LAMBDA, size, p_index)
    ).uniform()
    return cfg.penalty_lower_bound + cfg.penalty_span * (1.0 - u)


def start_seed(
    cfg: ExperimentConfig,
    size: int,
    instance: int,
    start: int,
    method: str,
    depth: int,
    p_index: int,
) -> int:
    code = 0 if method == PENALTY else 1
    return _subseed(cfg.master_seed, _TAG_START, size, instance, start, code, depth, p_index)


def _run_cell(cell: dict) -> dict:
    """Execute one (instance, factor, start) optimization; pool worker entry."""
    g = generate_erdos_renyi(cell["size"], cell["edge_probability"], cell["graph_seed"])
    method, lam = cell["method"], cell["lambda"]
    spec = make_ansatz(cell["problem"], g, method, cell["depth"], lam=lam)
    loss = make_loss(cell["problem"], g, method, lam=lam)
    init = random_params(spec, cell["start_seed"])
    rec = optimize(spec, loss, init, cell["budget"], seed=cell["start_seed"])
    row = dict(cell)
    row.update(rec.to_json_dict())
    return row


def _make_cells(cfg: ExperimentConfig, method: str, depth: int, p_indices) -> list[dict]:
    cells = []
    for size in cfg.sizes:
        for instance in range(cfg.instances_per_size):
            for p_index in p_indices:
                lam = None if method == FEASIBILITY else penalty_factor(cfg, size, p_index)
                for start in range(cfg.starts_per_instance):
                    cells.append(
                        {
                            "problem": cfg.problem,
                            "size": size,
                            "edge_probability": cfg.edge_probability,
                            "graph_seed": graph_seed(cfg, size, instance),
                            "method": method,
                            "depth": depth,
                            "lambda": lam,
                            "lambda_index": None if method == FEASIBILITY else p_index,
                            "instance": instance,
                            "start": start,
                            "start_seed": start_seed(
                                cfg, size, instance, start, method, depth, p_index
                            ),
                            "budget": cfg.budget,
                        }
                    )
    return cells


def _execute(cfg: ExperimentConfig, cells: list[dict]) -> list[dict]:
    if cfg.workers <= 1 or len(cells) < 2:
        return [_run_cell(c) for c in cells]
    chunk = max(1, len(cells) // (cfg.workers * 8))
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_run_cell, cells, chunksize=chunk))


def penalty_sweep_stats(acc: np.ndarray) -> dict:
    """Accuracy array indexed [factor, instance, start] -> per-factor means
    mu_p (divisor: instances*starts), their mean mu (divisor: factor count),
    and the population variance sigma of the mu_p."""
    num_p, num_i, num_j = acc.shape
    mu_p = acc.reshape(num_p, -1).sum(axis=1) / (num_i * num_j)
    mu = float(mu_p.sum() / num_p)
    sigma = float(((mu_p - mu) ** 2).sum() / num_p)
    return {"mu_p": [float(v) for v in mu_p], "mu": mu, "sigma": sigma}


def _acc_array(records: list[dict], shape: tuple, key_fn) -> np.ndarray:
    acc = np.full(shape, np.nan)
    for row in records:
        acc[key_fn(row)] = row["accuracy"]
    if np.isnan(acc).any():
        raise RuntimeError("missing cells in accuracy aggregation")
    return acc


def _method_summary(acc: np.ndarray) -> dict:
    """acc[instance, start] -> across-start aggregates and best-start stats."""
    best = acc.max(axis=1)
    return {
        "mean": float(acc.mean()),
        "std": float(acc.std()),
        "best_by_instance": [float(v) for v in best],
        "mean_best": float(best.mean()),
        "median_best": float(np.median(best)),
    }


@dataclass
class StatsTable:
    """Full experiment output: per-cell records plus the aggregate statistics."""

    mode: str
    config: dict
    metadata: dict
    records: list[dict]
    stats: dict

    def to_json(self) -> str:
        payload = {
            "mode": self.mode,
            "config": self.config,
            "metadata": self.metadata,
            "records": self.records,
            "stats": self.stats,
        }
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "StatsTable":
        obj = json.loads(text)
        return cls(
            mode=obj["mode"],
            config=obj["config"],
            metadata=obj["metadata"],
            records=obj["records"],
            stats=obj["stats"],
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.records:
            writer.writerow(
                ["" if row[c] is None else row[c] for c in CSV_COLUMNS]
            )
        return buf.getvalue()


def _metadata(cfg: ExperimentConfig) -> dict:
    meta = {
        "penalty_lower_bound": cfg.penalty_lower_bound,
        "penalty_interval": f"({cfg.penalty_lower_bound}, "
        f"{cfg.penalty_lower_bound + cfg.penalty_span}]",
        "lambdas": {
            str(size): [
                penalty_factor(cfg, size, p) for p in range(cfg.num_penalty_factors)
            ]
            for size in cfg.sizes
        },
        "accuracy_definition": "exact probability mass of optimal solutions in the "
        "work-register distribution (ancilla traced out)",
    }
    if cfg.problem == "MIS":
        meta["threshold_note"] = (
            "penalty lower bound a=1 adopted for MIS by analogy with MVC"
        )
    return meta


def sweep_stats_from_records(cfg_dict: dict, records: list[dict]) -> dict:
    """Recompute per-size, per-depth sweep statistics from raw records."""
    num_p = cfg_dict["num_penalty_factors"]
    num_i = cfg_dict["instances_per_size"]
    num_j = cfg_dict["starts_per_instance"]
    stats: dict = {}
    for size in cfg_dict["sizes"]:
        stats[str(size)] = {}
        for depth in cfg_dict["sweep_depths"]:
            rows = [r for r in records if r["size"] == size and r["depth"] == depth]
            acc = _acc_array(
                rows,
                (num_p, num_i, num_j),
                lambda r: (r["lambda_index"], r["instance"], r["start"]),
            )
            stats[str(size)][str(depth)] = penalty_sweep_stats(acc)
    return stats


def run_penalty_sweep(cfg: ExperimentConfig) -> StatsTable:
    """Penalty method at every sweep depth, factor, instance, and start."""
    records = []
    for depth in cfg.sweep_depths:
        cells = _make_cells(cfg, PENALTY, depth, range(cfg.num_penalty_factors))
        records.extend(_execute(cfg, cells))
    stats = sweep_stats_from_records(asdict(cfg), records)
    return StatsTable("penalty-sweep", asdict(cfg), _metadata(cfg), records, stats)


def comparison_stats_from_records(cfg_dict: dict, records: list[dict]) -> dict:
    """Recompute comparison statistics: per size, the penalty method at its
    best average factor versus the feasibility method, plus pooled medians of
    per-instance best-start accuracy."""
    num_p = cfg_dict["num_penalty_factors"]
    num_i = cfg_dict["instances_per_size"]
    num_j = cfg_dict["starts_per_instance"]
    stats: dict = {"per_size": {}}
    pooled: dict[str, list[float]] = {"ours": [], "penalty": []}
    for size in cfg_dict["sizes"]:
        pen_rows = [r for r in records if r["size"] == size and r["method"] == PENALTY]
        acc3 = _acc_array(
            pen_rows,
            (num_p, num_i, num_j),
            lambda r: (r["lambda_index"], r["instance"], r["start"]),
        )
        sweep = penalty_sweep_stats(acc3)
        star = int(np.argmax(sweep["mu_p"]))
        our_rows = [
            r for r in records if r["size"] == size and r["method"] == FEASIBILITY
        ]
        acc_ours = _acc_array(
            our_rows, (num_i, num_j), lambda r: (r["instance"], r["start"])
        )
        lam_star = next(r["lambda"] for r in pen_rows if r["lambda_index"] == star)
        entry = {
            "lambda_sweep": sweep,
            "lambda_star_index": star,
            "lambda_star": lam_star,
            "penalty": _method_summary(acc3[star]),
            "ours": _method_summary(acc_ours),
        }
        stats["per_size"][str(size)] = entry
        pooled["ours"].extend(entry["ours"]["best_by_instance"])
        pooled["penalty"].extend(entry["penalty"]["best_by_instance"])
    stats["pooled"] = {
        "ours_median_best": float(np.median(pooled["ours"])),
        "penalty_median_best": float(np.median(pooled["penalty"])),
    }
    return stats


def run_method_comparison(cfg: ExperimentConfig) -> StatsTable:
    """Feasibility method at our_depth versus the penalty method at
    penalty_depth with its best-average penalty factor per size."""
    pen_cells = _make_cells(cfg, PENALTY, cfg.penalty_depth, range(cfg.num_penalty_factors))
    our_cells = _make_cells(cfg, FEASIBILITY, cfg.our_depth, [0])
    records = _execute(cfg, pen_cells + our_cells)
    stats = comparison_stats_from_records(asdict(cfg), records)
    return StatsTable("comparison", asdict(cfg), _metadata(cfg), records, stats)


def run_experiment(cfg: ExperimentConfig) -> StatsTable:
    if cfg.mode == "penalty-sweep":
        return run_penalty_sweep(cfg)
    return run_method_comparison(cfg)


def recompute_stats(table: StatsTable) -> dict:
    """Re-derive the aggregate statistics from the stored records."""
    if table.mode == "penalty-sweep":
        return sweep_stats_from_records(table.config, table.records)
    return comparison_stats_from_records(table.config, table.records)


def emit_results(table: StatsTable, outdir: str) -> tuple[str, str]:
    """Write results.json (full records + stats) and results.csv (one row per
    cell, frozen column schema); bytes are deterministic given the config."""
    os.makedirs(outdir, exist_ok=True)
    json_path = os.path.join(outdir, "results.json")
    csv_path = os.path.join(outdir, "results.csv")
    with open(json_path, "w", newline="") as fh:
        fh.write(table.to_json())
    with open(csv_path, "w", newline="") as fh:
        fh.write(table.to_csv())
    return json_path, csv_path
