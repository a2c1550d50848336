"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError, NumericalError, StageError
from .experiment import (
    ExperimentConfig,
    load_config,
    run_experiment,
    run_suite,
    selection_matrix,
    sweep_alpha,
)
from .generator import GeneratorSpec, build_generator, load_signals, save_signals
from .graph import build_graph, load_graph, normalized_laplacian, save_graph
from .lowrank import approx_samp, approx_svd, select_rank
from .numerics import svd
from .reconstruct import SubsamplingOperator, error_report, reconstruct
from .selection import greedy_select

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _config_from_args(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if getattr(args, "scheme", None):
        cfg = replace(cfg, scheme=args.scheme)
    if getattr(args, "epsilon", None) is not None:
        cfg = replace(cfg, epsilon=args.epsilon)
    if getattr(args, "rowsum_active_only", False):
        cfg = replace(cfg, rowsum_active_only=True)
    return cfg.with_seeds(
        graph=getattr(args, "seed_graph", None),
        coefficients=getattr(args, "seed_coefficients", None),
        signal=getattr(args, "seed_signal", None),
    )


def _dump(obj, path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")


def cmd_gen_graph(args):
    cfg = _config_from_args(args)
    g = build_graph(cfg.graph)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_graph(g, out)
    print(f"wrote {out} ({g.n} nodes, {int((g.weights > 0).sum() // 2)} edges)")


def cmd_run(args):
    cfg = _config_from_args(args)
    res = run_experiment(cfg, args.out)
    for scheme, o in res.outcomes.items():
        print(
            f"{cfg.family} eps={cfg.epsilon:g} {scheme:4s} P={res.rank.P} "
            f"S={list(o.selection.selected)} error={o.report.error_db:.2f} dB "
            f"cond(A_S T)={o.report.condition_ast:.3g}"
        )


def cmd_select(args):
    cfg = _config_from_args(args)
    g = build_graph(cfg.graph)
    b = build_generator(normalized_laplacian(g), cfg.generator)
    dec = svd(b)
    rank = select_rank(dec.singular_values, cfg.epsilon)
    out = {
        "family": cfg.family,
        "epsilon": cfg.epsilon,
        "P": rank.P,
        "gammas": list(cfg.generator.gammas()),
        "singular_values": dec.singular_values.tolist(),
        "rowsum_active_only": cfg.rowsum_active_only,
        "schemes": {},
    }
    for scheme in cfg.schemes:
        sel = greedy_select(selection_matrix(b, dec, rank.P, scheme), rank.P, scheme,
                            cfg.rowsum_active_only)
        out["schemes"][scheme] = sel.to_dict()
        print(f"{scheme}: P={rank.P} S={list(sel.selected)}")
    if args.out:
        _dump(out, args.out)


def cmd_reconstruct(args):
    """Rebuild B from graph.json + selection.json and reconstruct from signals.csv."""
    run_dir = Path(args.run_dir)
    g = load_graph(run_dir / "graph.json")
    selection = json.loads((run_dir / "selection.json").read_text())
    y = load_signals(run_dir / "signals.csv")
    latent = run_dir / "latent.csv"
    c = load_signals(latent) if latent.exists() else None
    gammas = selection["gammas"]
    b = build_generator(normalized_laplacian(g), GeneratorSpec(len(gammas), tuple(gammas)))
    P = selection["P"]
    out_dir = Path(args.out) if args.out else run_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {}
    for scheme, sel in selection["schemes"].items():
        op = SubsamplingOperator(sel["selected"], g.n)
        fac = approx_svd(b, P) if scheme == "svd" else approx_samp(b, op.selected)
        y_hat = reconstruct(op.apply(y), fac, op)
        rep = error_report(y, y_hat, b, fac, c, op)
        save_signals(y_hat, out_dir / f"reconstructed_{scheme}.csv")
        report[scheme] = {"selected": list(op.selected), **rep.to_dict()}
        print(f"{scheme}: error={rep.error_db:.2f} dB")
    _dump({"schemes": report}, out_dir / "reconstruction_report.json")


def cmd_sweep_alpha(args):
    cfg = _config_from_args(args)
    try:
        alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --alphas list: {exc}") from exc
    if not alphas:
        raise ConfigError("--alphas must list at least one value")
    rows = sweep_alpha(cfg, alphas, args.out)
    for r in rows:
        print("  ".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}" for k, v in r.items()))


def cmd_suite(args):
    rows = run_suite(args.config, args.out)
    print(f"{len(rows)} summary rows written to {Path(args.out) / 'summary.csv'}")
    for r in rows:
        err = r["error_db"]
        err = f"{err:.2f}" if isinstance(err, float) else err
        print(f"  {r['family']:<16} eps={r['epsilon']} {r['scheme']:<4} P={r['P']} error_db={err}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="graphsubsample",
        description="Generative-model graph signal subsampling experiments",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_required=True, out_help="output path"):
        sp.add_argument("--config", help="experiment config (JSON)")
        sp.add_argument("--out", required=out_required, help=out_help)
        sp.add_argument("--scheme", choices=["svd", "samp", "both"])
        sp.add_argument("--epsilon", type=float)
        sp.add_argument("--seed-graph", type=int)
        sp.add_argument("--seed-coefficients", type=int)
        sp.add_argument("--seed-signal", type=int)
        sp.add_argument("--rowsum-active-only", action="store_true",
                        help="greedy rowsums over remaining nodes only")

    sp = sub.add_parser("gen-graph", help="build a graph from a template and write graph.json")
    common(sp, out_help="graph JSON path")
    sp.set_defaults(func=cmd_gen_graph)

    sp = sub.add_parser("run", help="run the full pipeline for one config")
    common(sp, out_help="output directory")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("select", help="run rank and node selection only")
    common(sp, out_required=False, out_help="selection JSON path")
    sp.set_defaults(func=cmd_select)

    sp = sub.add_parser("reconstruct", help="reconstruct from the artifacts of a previous run")
    sp.add_argument("--run-dir", required=True, help="directory written by `run`")
    sp.add_argument("--out", help="output directory (defaults to --run-dir)")
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("sweep-alpha", help="sweep the alpha edge weight, write a CSV table")
    common(sp, out_help="CSV path")
    sp.add_argument("--alphas", default="1,2,3,4,5", help="comma-separated alpha values")
    sp.set_defaults(func=cmd_sweep_alpha)

    sp = sub.add_parser("suite", help="run a JSON array of configs, write summary.csv")
    sp.add_argument("--config", required=True, help="suite file (JSON array)")
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL if isinstance(exc.cause, (NumericalError, ArithmeticError)) else EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
