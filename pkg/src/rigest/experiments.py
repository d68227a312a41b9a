"""Seeded Monte Carlo experiments: parameter sweeps, replicate histograms and
covering-density checks.

Every replicate draws its randomness from
``SeedSequence(root_seed, spawn_key=(n, replicate))``, so results do not
depend on the number of worker threads, and adding grid points leaves
existing rows untouched.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .catalog import get_motif
from .covering import (
    containment_frequency,
    density_polynomial,
    exact_containment_probability,
    expected_counts,
)
from .errors import ConfigError, InvalidParameterError, ResourceLimitError
from .estimators import estimate_all
from .graph import generate, induced_subgraph, sample_nodes
from .model import ModelParams, RegimeParams, regime_flags, regime_to_model

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "Summary",
    "summarize",
    "run_sweep",
    "run_histogram",
    "run_density_check",
    "run_experiment",
    "parse_config",
    "load_config",
    "replicate_seeds",
    "theory_values",
    "ROW_COLUMNS",
    "DENSITY_COLUMNS",
]

KINDS = ("sweep", "histogram", "density-check")
N0_RULES = ("equal-n", "fraction", "fixed")
ESTIMATORS = ("lambda_hat", "mu1_hat", "mu2_hat", "transitivity")

ROW_COLUMNS = (
    "n",
    "replicate",
    "n0",
    "m",
    "p",
    "graph_seed",
    "sample_seed",
    "lambda_hat",
    "mu1_hat",
    "mu2_hat",
    "transitivity",
    "n_k2",
    "n_s2",
    "n_k3",
    "a1",
    "a2",
    "d_max",
    "theory_lambda",
    "theory_mu1",
    "theory_mu2",
    "flags",
)

DENSITY_COLUMNS = (
    "motif",
    "m",
    "p",
    "mc_reps",
    "hits",
    "empirical",
    "se",
    "theory",
    "exact",
    "rel_error",
    "flags",
)

THEORY_NOTE = (
    "theory columns plug expected counts into the estimator formulas: exact edge "
    "probability 1-(1-p^2)^m for edges, leading-order covering densities for "
    "2-stars (m p^3 + m^2 p^4) and triangles (m p^3 + m^3 p^6)"
)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    lam: float = 9.0
    mu: float = 3.0
    n_grid: tuple[int, ...] = (750,)
    n0_rule: str = "equal-n"
    n0_value: float | None = None
    replicates: int = 1
    root_seed: int = 0
    motifs: tuple[str, ...] = ()
    mc_reps: int = 100_000
    m: int | None = None
    p: float | None = None
    fast_only: bool = False

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {', '.join(KINDS)}, got {self.kind!r}", field="kind")
        if self.replicates < 1:
            raise ConfigError("replicates must be at least 1", field="replicates")
        if not self.n_grid:
            raise ConfigError("n_grid must not be empty", field="n_grid")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError("n_grid must be strictly ascending", field="n_grid")
        if self.n_grid[0] < 1:
            raise ConfigError("n_grid entries must be positive", field="n_grid")
        if self.root_seed < 0:
            raise ConfigError("root_seed must be non-negative", field="root_seed")
        if self.n0_rule not in N0_RULES:
            raise ConfigError(f"n0_rule must be one of {', '.join(N0_RULES)}", field="n0_rule")
        if self.n0_rule == "fraction" and not (self.n0_value and 0 < self.n0_value <= 1):
            raise ConfigError("n0_rule=fraction needs n0 in (0, 1]", field="n0_value")
        if self.n0_rule == "fixed":
            if not self.n0_value or int(self.n0_value) != self.n0_value or self.n0_value < 1:
                raise ConfigError("n0_rule=fixed needs a positive integer n0", field="n0_value")
            if self.n0_value > self.n_grid[0]:
                raise ConfigError("fixed n0 exceeds the smallest n in the grid", field="n0_value")
        if self.kind == "histogram" and len(self.n_grid) != 1:
            raise ConfigError("histogram runs take a single n", field="n_grid")
        if self.kind == "density-check":
            if not self.motifs:
                raise ConfigError("density-check needs at least one motif", field="motifs")
            for name in self.motifs:
                try:
                    get_motif(name)
                except InvalidParameterError as exc:
                    raise ConfigError(str(exc), field="motifs") from None
            if self.mc_reps < 1:
                raise ConfigError("mc_reps must be positive", field="mc_reps")
        try:
            RegimeParams(self.lam, self.mu, self.n_grid[0])
        except InvalidParameterError as exc:
            raise ConfigError(str(exc)) from None

    def n0_for(self, n: int) -> int:
        if self.n0_rule == "equal-n":
            return n
        if self.n0_rule == "fraction":
            return max(1, math.floor(self.n0_value * n + 0.5))
        return int(self.n0_value)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["n_grid"] = list(self.n_grid)
        d["motifs"] = list(self.motifs)
        return d


@dataclass
class Summary:
    mean: float
    sd: float
    quantiles: list[float]
    count: int
    removed: int


def summarize(values: Iterable[float | None]) -> Summary:
    """Mean, unbiased sd and deciles (10%..90%) of the defined values.

    ``None`` and NaN entries are dropped and counted in ``removed``.  The sd
    of a single value is reported as 0.
    """
    vals = list(values)
    clean = np.array(
        [v for v in vals if v is not None and not (isinstance(v, float) and math.isnan(v))],
        dtype=float,
    )
    if clean.size == 0:
        raise InvalidParameterError("no defined values to summarize")
    sd = float(np.std(clean, ddof=1)) if clean.size > 1 else 0.0
    deciles = np.quantile(clean, np.arange(1, 10) / 10)
    return Summary(
        mean=float(clean.mean()),
        sd=sd,
        quantiles=[float(q) for q in deciles],
        count=int(clean.size),
        removed=len(vals) - int(clean.size),
    )


def replicate_seeds(root_seed: int, n: int, replicate: int) -> tuple[int, int]:
    """``(graph_seed, sample_seed)`` for one replicate."""
    ss = np.random.SeedSequence(root_seed, spawn_key=(n, replicate))
    a, b = ss.generate_state(2, dtype=np.uint64)
    return int(a), int(b)


def theory_values(params: ModelParams, n0: int) -> dict[str, float | None]:
    """Estimator values with the observed counts replaced by expected counts."""
    if n0 < 3:
        return {"theory_lambda": None, "theory_mu1": None, "theory_mu2": None}
    e_k2, e_s2, e_k3 = expected_counts(params, n0)
    lam = params.n / (n0 * n0) * 2 * e_k2
    mu1 = e_s2 / (3 * e_k3) - 1 if e_k3 > 0 else None
    mu2 = None
    if e_k2 > 0:
        denom = n0 * e_s2 / (2 * e_k2 * e_k2) - 1
        mu2 = 1 / denom if denom > 0 else None
    return {"theory_lambda": lam, "theory_mu1": mu1, "theory_mu2": mu2}


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[dict[str, Any]]
    summary: dict[str, Any]
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def columns(self) -> tuple[str, ...]:
        return DENSITY_COLUMNS if self.config.kind == "density-check" else ROW_COLUMNS

    def column(self, name: str) -> list[Any]:
        return [row[name] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# config: " + json.dumps(self.config.to_dict(), sort_keys=True) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_csv_cell(row[c]) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "provenance": self.provenance,
            "summary": self.summary,
            "rows": self.rows,
        }
        return json.dumps(payload, indent=2, sort_keys=True, default=_json_default)

    def plot_data(self) -> dict[str, dict[str, list]]:
        """Per-estimator scatter series and theoretical curves keyed by name."""
        if self.config.kind == "density-check":
            raise InvalidParameterError("plot data is only defined for sweep and histogram runs")
        series: dict[str, dict[str, list]] = {}
        for name in ESTIMATORS:
            pts = [(r["n"], r[name]) for r in self.rows if r[name] is not None]
            series[name] = {"x": [x for x, _ in pts], "y": [y for _, y in pts]}
        for name in ("theory_lambda", "theory_mu1", "theory_mu2"):
            seen: dict[int, Any] = {}
            for r in self.rows:
                seen.setdefault(r["n"], r[name])
            pts = [(x, y) for x, y in seen.items() if y is not None]
            series[name] = {"x": [x for x, _ in pts], "y": [y for _, y in pts]}
        return series

    def write(self, out_dir: str | Path, plot_data: bool = False) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name, text in (
            ("results.csv", self.to_csv()),
            ("results.json", self.to_json()),
            ("provenance.json", json.dumps(self.provenance, indent=2, sort_keys=True)),
        ):
            path = out / name
            path.write_text(text + ("" if text.endswith("\n") else "\n"))
            written.append(path)
        if plot_data:
            path = out / "plot_data.json"
            path.write_text(
                json.dumps({"config": self.config.to_dict(), "series": self.plot_data()}, indent=2)
                + "\n"
            )
            written.append(path)
        return written


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, list):
        return ";".join(map(str, value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _provenance(cfg: ExperimentConfig) -> dict[str, Any]:
    return {
        "config": cfg.to_dict(),
        "root_seed": cfg.root_seed,
        "version": __version__,
        "seed_scheme": "SeedSequence(root_seed, spawn_key=(n, replicate)).generate_state(2) "
        "-> (graph_seed, sample_seed)",
        "theory": THEORY_NOTE,
    }


def _estimate_row(cfg: ExperimentConfig, n: int, rep: int) -> dict[str, Any]:
    params = regime_to_model(RegimeParams(cfg.lam, cfg.mu, n))
    n0 = cfg.n0_for(n)
    graph_seed, sample_seed = replicate_seeds(cfg.root_seed, n, rep)
    row: dict[str, Any] = dict.fromkeys(ROW_COLUMNS)
    row.update(
        n=n, replicate=rep, n0=n0, m=params.m, p=params.p,
        graph_seed=graph_seed, sample_seed=sample_seed,
    )
    row.update(theory_values(params, n0))
    flags = regime_flags(RegimeParams(cfg.lam, cfg.mu, n))
    try:
        _, g = generate(params, graph_seed)
    except ResourceLimitError:
        row["flags"] = flags + ["generation-budget-exceeded"]
        return row
    if n0 < n:
        g, _ = induced_subgraph(g, sample_nodes(n, n0, sample_seed))
    report = estimate_all(g, n, fast_only=cfg.fast_only).to_dict()
    for key in ("lambda_hat", "mu1_hat", "mu2_hat", "transitivity", "n_k2", "n_s2",
                "n_k3", "a1", "a2", "d_max"):
        row[key] = report[key]
    row["flags"] = flags + report["flags"]
    return row


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("RIGEST_THREADS", "1"))
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def _run_rows(cfg: ExperimentConfig, threads: int | None) -> list[dict[str, Any]]:
    tasks = [(n, rep) for n in cfg.n_grid for rep in range(cfg.replicates)]
    workers = _resolve_threads(threads)
    if workers == 1:
        return [_estimate_row(cfg, n, rep) for n, rep in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: _estimate_row(cfg, *t), tasks))


def _summaries(rows: Sequence[dict[str, Any]], n_values: Sequence[int]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for n in n_values:
        subset = [r for r in rows if r["n"] == n]
        per: dict[str, Any] = {"rows": len(subset)}
        for name in ESTIMATORS:
            vals = [r[name] for r in subset]
            try:
                per[name] = asdict(summarize(vals))
            except InvalidParameterError:
                per[name] = {"mean": None, "sd": None, "quantiles": [], "count": 0,
                             "removed": len(vals)}
        per["theory"] = {k: subset[0][k] for k in ("theory_lambda", "theory_mu1", "theory_mu2")}
        out[str(n)] = per
    return out


def run_sweep(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    """Generate, sample and estimate for every ``(n, replicate)`` in the grid."""
    if cfg.kind != "sweep":
        raise ConfigError(f"run_sweep needs kind=sweep, got {cfg.kind}")
    rows = _run_rows(cfg, threads)
    return ExperimentResult(cfg, rows, _summaries(rows, cfg.n_grid), _provenance(cfg))


def run_histogram(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    """Many replicates at a single ``n``; the summary also carries the raw estimate lists."""
    if cfg.kind != "histogram":
        raise ConfigError(f"run_histogram needs kind=histogram, got {cfg.kind}")
    rows = _run_rows(cfg, threads)
    summary = _summaries(rows, cfg.n_grid)[str(cfg.n_grid[0])]
    summary["values"] = {name: [r[name] for r in rows] for name in ESTIMATORS}
    return ExperimentResult(cfg, rows, summary, _provenance(cfg))


def run_density_check(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    """Fixed-vertex containment frequency against the covering-density polynomial.

    ``(m, p)`` come from the config when given, otherwise from the regime
    mapping at the first grid size.
    """
    if cfg.kind != "density-check":
        raise ConfigError(f"run_density_check needs kind=density-check, got {cfg.kind}")
    if cfg.m is not None and cfg.p is not None:
        params = ModelParams(n=max(cfg.n_grid[0], 1), m=int(cfg.m), p=float(cfg.p))
    else:
        params = regime_to_model(RegimeParams(cfg.lam, cfg.mu, cfg.n_grid[0]))
    m, p = params.m, params.p

    def one(idx_name: tuple[int, str]) -> dict[str, Any]:
        idx, name = idx_name
        motif = get_motif(name)
        seed = np.random.SeedSequence(cfg.root_seed, spawn_key=(idx,))
        hits, reps = containment_frequency(motif, m, p, cfg.mc_reps, seed=seed)
        freq = hits / reps
        theory = density_polynomial(motif).evaluate(m, p)
        flags = ["strained-regime"] if m * p * p > 0.25 else []
        return {
            "motif": motif.name,
            "m": m,
            "p": p,
            "mc_reps": reps,
            "hits": hits,
            "empirical": freq,
            "se": math.sqrt(freq * (1 - freq) / reps),
            "theory": theory,
            "exact": exact_containment_probability(motif, m, p),
            "rel_error": (freq / theory - 1) if theory > 0 else None,
            "flags": flags,
        }

    tasks = list(enumerate(cfg.motifs))
    workers = _resolve_threads(threads)
    if workers == 1:
        rows = [one(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, tasks))
    summary = {r["motif"]: {k: r[k] for k in ("empirical", "theory", "exact", "rel_error", "se")}
               for r in rows}
    return ExperimentResult(cfg, rows, summary, _provenance(cfg))


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    runner = {"sweep": run_sweep, "histogram": run_histogram, "density-check": run_density_check}
    return runner[cfg.kind](cfg, threads)


# --- flat key=value configuration files -------------------------------------

_KEYS = {
    "kind": "kind",
    "lambda": "lam",
    "lam": "lam",
    "mu": "mu",
    "n_grid": "n_grid",
    "n": "n_grid",
    "n0_rule": "n0_rule",
    "n0": "n0_value",
    "replicates": "replicates",
    "root_seed": "root_seed",
    "seed": "root_seed",
    "motif": "motifs",
    "motifs": "motifs",
    "mc_reps": "mc_reps",
    "m": "m",
    "p": "p",
    "fast_only": "fast_only",
}


def _parse_grid(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("range must be start:stop:step")
        start, stop, step = (int(x) for x in parts)
        if step <= 0:
            raise ValueError("step must be positive")
        return tuple(range(start, stop + 1, step))
    return tuple(int(x) for x in text.replace(",", " ").split())


def _convert(field_name: str, raw: str) -> Any:
    if field_name in ("kind", "n0_rule"):
        return raw
    if field_name == "n_grid":
        return _parse_grid(raw)
    if field_name == "motifs":
        return tuple(x.strip() for x in raw.split(",") if x.strip())
    if field_name in ("replicates", "root_seed", "mc_reps", "m"):
        return int(raw)
    if field_name == "fast_only":
        low = raw.lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise ValueError(f"expected a boolean, got {raw!r}")
        return low in ("true", "1", "yes")
    return float(raw)


def parse_config(text: str) -> ExperimentConfig:
    """Parse the flat ``key = value`` format; ``#`` starts a comment.

    Recognised keys: kind, lambda, mu, n_grid (``50,70,90`` or
    ``start:stop:step`` inclusive), n0_rule, n0, replicates, root_seed,
    motifs, mc_reps, m, p, fast_only.
    """
    values: dict[str, Any] = {}
    lines_of: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key = value, got {line!r}", lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        name = _KEYS.get(key.lower())
        if name is None:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if name in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            values[name] = _convert(name, val)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno) from None
        lines_of[name] = lineno
    if "kind" not in values:
        raise ConfigError("missing required key 'kind'")
    known = {f.name for f in fields(ExperimentConfig)}
    try:
        return ExperimentConfig(**{k: v for k, v in values.items() if k in known})
    except ConfigError as exc:
        if exc.field in lines_of:
            raise ConfigError(exc.message, lines_of[exc.field], exc.field) from None
        raise


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())
