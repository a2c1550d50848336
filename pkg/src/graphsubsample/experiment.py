"""End-to-end experiment pipeline, alpha sweep and batch suite runner."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, GraphSubsampleError, StageError
from .generator import (
    GeneratorSpec,
    SignalSpec,
    build_generator,
    generate_signals,
    save_signals,
    signal_correlation,
    synthesize_coefficients,
)
from .graph import GraphTemplate, WeightedGraph, build_graph, graph_to_dict, normalized_laplacian
from .lowrank import LowRankFactorization, RankSelection, approx_samp, approx_svd, select_rank
from .numerics import SvdResult, svd
from .reconstruct import ReconstructionReport, SubsamplingOperator, error_report, reconstruct
from .selection import SelectionResult, greedy_select

log = logging.getLogger(__name__)

SCHEMES = ("svd", "samp")
SUMMARY_HEADER = ["family", "epsilon", "scheme", "P", "error_db", "cond_ast"]


@dataclass(frozen=True)
class ExperimentConfig:
    graph: GraphTemplate = field(default_factory=GraphTemplate)
    generator: GeneratorSpec = field(default_factory=GeneratorSpec)
    signal: SignalSpec = field(default_factory=SignalSpec)
    epsilon: float = 0.03
    scheme: str = "both"
    name: str | None = None
    rowsum_active_only: bool = False
    output_dir: str | None = None

    def __post_init__(self):
        if not (isinstance(self.epsilon, (int, float)) and 0 < self.epsilon < 1):
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.scheme not in SCHEMES + ("both",):
            raise ConfigError(f"scheme must be svd, samp or both, got {self.scheme!r}")

    @property
    def schemes(self) -> tuple[str, ...]:
        return SCHEMES if self.scheme == "both" else (self.scheme,)

    @property
    def family(self) -> str:
        return self.name or self.graph.kind

    @property
    def seeds(self) -> dict:
        return {
            "graph": self.graph.seed,
            "coefficients": self.generator.coefficient_seed,
            "signal": self.signal.signal_seed,
        }

    def with_seeds(self, graph=None, coefficients=None, signal=None) -> "ExperimentConfig":
        cfg = self
        if graph is not None:
            cfg = replace(cfg, graph=GraphTemplate.from_dict({**cfg.graph.to_dict(), "seed": graph}))
        if coefficients is not None:
            cfg = replace(cfg, generator=replace(cfg.generator, coefficient_seed=coefficients))
        if signal is not None:
            cfg = replace(cfg, signal=replace(cfg.signal, signal_seed=signal))
        return cfg

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "graph": self.graph.to_dict(),
            "generator": self.generator.to_dict(),
            "signal": self.signal.to_dict(),
            "epsilon": self.epsilon,
            "scheme": self.scheme,
            "rowsum_active_only": self.rowsum_active_only,
            "seeds": self.seeds,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("experiment config must be a JSON object")
        known = {"name", "graph", "generator", "signal", "epsilon", "scheme",
                 "rowsum_active_only", "seeds", "output_dir"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            cfg = cls(
                graph=GraphTemplate.from_dict(d.get("graph", {})),
                generator=GeneratorSpec.from_dict(d.get("generator", {})),
                signal=SignalSpec.from_dict(d.get("signal", {})),
                epsilon=d.get("epsilon", 0.03),
                scheme=d.get("scheme", "both"),
                name=d.get("name"),
                rowsum_active_only=bool(d.get("rowsum_active_only", False)),
                output_dir=d.get("output_dir"),
            )
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        seeds = d.get("seeds") or {}
        extra = set(seeds) - {"graph", "coefficients", "signal"}
        if extra:
            raise ConfigError(f"unknown seed names: {sorted(extra)}")
        return cfg.with_seeds(**seeds)


def load_config(path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return ExperimentConfig.from_dict(data)


@dataclass(frozen=True, eq=False)
class SchemeOutcome:
    selection: SelectionResult
    factorization: LowRankFactorization
    report: ReconstructionReport


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    config: ExperimentConfig
    graph: WeightedGraph
    gammas: tuple[float, ...]
    b: np.ndarray
    decomposition: SvdResult
    rank: RankSelection
    c: np.ndarray
    y: np.ndarray
    outcomes: dict[str, SchemeOutcome]

    def selection_dict(self) -> dict:
        return {
            "family": self.config.family,
            "epsilon": self.config.epsilon,
            "P": self.rank.P,
            "gammas": list(self.gammas),
            "singular_values": self.decomposition.singular_values.tolist(),
            "rowsum_active_only": self.config.rowsum_active_only,
            "schemes": {k: o.selection.to_dict() for k, o in self.outcomes.items()},
        }

    def report_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "gammas": list(self.gammas),
            "rank": {
                "P": self.rank.P,
                "epsilon": self.rank.epsilon,
                "discarded_energy": self.rank.discarded_energy,
                "total_energy": self.rank.total_energy,
            },
            "schemes": {
                k: {"selected": list(o.selection.selected), **o.report.to_dict()}
                for k, o in self.outcomes.items()
            },
        }


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except (GraphSubsampleError, ValueError, ArithmeticError, IndexError) as exc:
        raise StageError(name, exc) from exc


def selection_matrix(b, decomposition: SvdResult, P: int, scheme: str) -> np.ndarray:
    """Matrix that seeds greedy selection: the truncated SVD for ``svd``, B itself for ``samp``."""
    if scheme == "svd":
        return approx_svd(b, P, decomposition).b_tilde
    return b


def run_scheme(b, decomposition: SvdResult, P: int, scheme: str, y, c, rowsum_active_only=False) -> SchemeOutcome:
    n = b.shape[0]
    b_sel = selection_matrix(b, decomposition, P, scheme)
    sel = _stage(f"select[{scheme}]", greedy_select, b_sel, P, scheme, rowsum_active_only)
    if scheme == "svd":
        fac = approx_svd(b, P, decomposition)
    else:
        fac = _stage("approx[samp]", approx_samp, b, sel.selected)
    op = SubsamplingOperator(sel.selected, n)
    y_hat = _stage(f"reconstruct[{scheme}]", reconstruct, op.apply(y), fac, op)
    rep = _stage(f"error_report[{scheme}]", error_report, y, y_hat, b, fac, c, op)
    return SchemeOutcome(sel, fac, rep)


def run_experiment(cfg: ExperimentConfig, output_dir=None) -> ExperimentResult:
    g = _stage("build_graph", build_graph, cfg.graph)
    lap = _stage("normalized_laplacian", normalized_laplacian, g)
    gammas = cfg.generator.gammas()
    b = _stage("build_generator", build_generator, lap, cfg.generator)
    c = _stage("synthesize", synthesize_coefficients, g.n, cfg.signal)
    y = _stage("generate_signals", generate_signals, b, c)
    dec = _stage("svd", svd, b)
    rank = _stage("select_rank", select_rank, dec.singular_values, cfg.epsilon)
    outcomes = {
        s: run_scheme(b, dec, rank.P, s, y, c, cfg.rowsum_active_only) for s in cfg.schemes
    }
    result = ExperimentResult(cfg, g, gammas, b, dec, rank, c, y, outcomes)
    out = output_dir if output_dir is not None else cfg.output_dir
    if out is not None:
        write_artifacts(result, out)
    return result


def _dump(obj, path: Path):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")


def write_artifacts(result: ExperimentResult, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _dump(graph_to_dict(result.graph), out / "graph.json")
    save_signals(result.y, out / "signals.csv")
    save_signals(result.c, out / "latent.csv")
    _dump(result.selection_dict(), out / "selection.json")
    _dump(result.report_dict(), out / "report.json")
    for scheme, o in result.outcomes.items():
        _dump(o.factorization.to_dict(), out / f"factorization_{scheme}.json")
        save_signals(o.report.y_hat, out / f"reconstructed_{scheme}.csv")
    return out


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(r.get(h)) for h in header])
    return buf.getvalue()


def sweep_alpha(base: ExperimentConfig, alphas, out_csv=None) -> list[dict]:
    """Second-smallest singular value of B, pair correlations and error versus alpha.

    Correlation columns are named after the alpha pairs counted from one
    (``corr_24`` for the 0-based pair (1, 3)). ``error_db`` uses the config's
    scheme; with ``both`` it reports ``samp``.
    """
    if not base.graph.has_alpha:
        raise ConfigError(f"graph kind {base.graph.kind!r} has no alpha-weighted pairs to sweep")
    pairs = base.graph.alpha_pairs
    names = [f"corr_{i + 1}{j + 1}" for i, j in pairs]
    err_scheme = "samp" if base.scheme == "both" else base.scheme
    rows = []
    for alpha in alphas:
        cfg = replace(base, graph=base.graph.with_alpha(float(alpha)), scheme=err_scheme)
        g = build_graph(cfg.graph)
        b = build_generator(normalized_laplacian(g), cfg.generator)
        y = generate_signals(b, synthesize_coefficients(g.n, cfg.signal))
        dec = svd(b)
        row = {"alpha": float(alpha), "sigma2": float(dec.singular_values[-2])}
        for name, (i, j) in zip(names, pairs):
            row[name] = signal_correlation(y, i, j)
        try:
            row["error_db"] = run_experiment(cfg).outcomes[err_scheme].report.error_db
        except StageError as exc:
            log.warning("alpha=%s: %s", alpha, exc)
            row["error_db"] = None
        rows.append(row)
    if out_csv is not None:
        Path(out_csv).parent.mkdir(parents=True, exist_ok=True)
        Path(out_csv).write_text(_csv_text(["alpha", "sigma2"] + names + ["error_db"], rows))
    return rows


def load_suite(path) -> list:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read suite {path}: {exc}") from exc
    if not isinstance(data, list):
        raise ConfigError("suite file must be a JSON array of experiment configs")
    return data


def run_suite(suite, out_dir=None) -> list[dict]:
    """Run each config in ``suite`` (a path or a list of config dicts).

    One summary row per (config, scheme). A failing config contributes a row
    whose ``error_db`` is ``FAILED`` and the run continues; failure details go
    to ``failures.json``.
    """
    entries = load_suite(suite) if isinstance(suite, (str, Path)) else list(suite)
    rows, failures = [], []
    for k, entry in enumerate(entries):
        family = entry.get("name") if isinstance(entry, dict) else None
        try:
            cfg = ExperimentConfig.from_dict(entry)
            family = cfg.family
            sub = None if out_dir is None else Path(out_dir) / f"{k:03d}_{family}_eps{cfg.epsilon:g}"
            res = run_experiment(cfg, sub)
        except GraphSubsampleError as exc:
            eps = entry.get("epsilon") if isinstance(entry, dict) else None
            scheme = entry.get("scheme", "both") if isinstance(entry, dict) else None
            rows.append({"family": family or f"config{k}", "epsilon": eps, "scheme": scheme,
                         "P": None, "error_db": "FAILED", "cond_ast": None})
            failures.append({"index": k, "family": family, "error": str(exc)})
            continue
        for scheme, o in res.outcomes.items():
            rows.append({
                "family": cfg.family,
                "epsilon": float(cfg.epsilon),
                "scheme": scheme,
                "P": res.rank.P,
                "error_db": o.report.error_db,
                "cond_ast": o.report.condition_ast,
            })
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.csv").write_text(_csv_text(SUMMARY_HEADER, rows))
        _dump(failures, out / "failures.json")
    return rows
