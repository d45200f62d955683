"""Command-line interface: ``threshnet {sweep,metrics,synth}``.

Every flag has a config-file key of the same name (dashes become
underscores). Values come from built-in defaults, then ``--config``, then flags.
A run manifest written by a previous run is also accepted as ``--config``.

Exit codes: 0 success, 1 unreadable or malformed input, 2 invalid
configuration, 3 degenerate data.
"""

from __future__ import annotations

import argparse
import datetime as dt
import hashlib
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import __version__, kernels
from .dissim import DissimWeights, combine, d_terms, summarize
from .estimate import DegenerateSweepError, SweepConfig, SweepError, sweep
from .ingest import PriceFileError, format_prices, log_returns, read_prices, write_prices
from .metrics import MetricsRow, metrics_series
from .netgraph import threshold_graph, write_edge_list
from .rolling import NORMS, WindowSpec, ZeroVarianceError, correlation_matrices, dump_matrix, window_starts
from .synth import GENERATOR, SynthConfig, generate_market

log = logging.getLogger("threshnet")

EXIT_INPUT, EXIT_CONFIG, EXIT_DEGENERATE = 1, 2, 3

COMMON_DEFAULTS = {
    "input": None,
    "output_dir": ".",
    "width": 250,
    "step": 5,
    "return_interval": 1,
    "missing": "drop",
    "alpha": 0.45,
    "beta": 0.45,
    "gamma": 0.10,
    "norm": "frobenius",
    "workers": os.cpu_count() or 1,
}
DEFAULTS = {
    "sweep": {**COMMON_DEFAULTS, "theta_min": "auto", "theta_max": 1.0, "theta_step": 0.01},
    "metrics": {**COMMON_DEFAULTS, "theta": None, "clustering_bins": 20,
                "dump_matrices": None, "dump_edges": None, "dump_terms": False},
    "synth": {"output": None, "instruments": 40, "days": 600,
              "regimes": "0:0.2,300:0.7", "vol": 0.01, "seed": 0},
}
# keys that never change output bytes, left out of the embedded manifest
_VOLATILE = {"workers", "output_dir", "output", "input", "dump_matrices", "dump_edges"}


class ConfigError(ValueError):
    pass


class InputError(ValueError):
    pass


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config (or a previous run manifest)")
    p.add_argument("-i", "--input", help="price file")
    p.add_argument("-o", "--output-dir", help="directory for output files")
    p.add_argument("--width", type=int, help="window width in trading days (default 250)")
    p.add_argument("--step", type=int, help="window step in trading days (default 5)")
    p.add_argument("--return-interval", type=int, help="return interval in trading days (default 1)")
    p.add_argument("--missing", choices=("drop", "ffill"), help="missing-price policy (default drop)")
    p.add_argument("--alpha", type=float, help="distance-term weight (default 0.45)")
    p.add_argument("--beta", type=float, help="dispersion-term weight (default 0.45)")
    p.add_argument("--gamma", type=float, help="centrality-term weight (default 0.1)")
    p.add_argument("--norm", choices=NORMS, help="matrix difference norm (default frobenius)")
    p.add_argument("--workers", type=int, help="worker threads (default: all cores)")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="threshnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"threshnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="estimate the optimal threshold")
    _add_common(p)
    p.add_argument("--theta-min", help="first grid threshold or 'auto' (default auto)")
    p.add_argument("--theta-max", type=float, help="last grid threshold (default 1.0)")
    p.add_argument("--theta-step", type=float, help="grid spacing (default 0.01)")

    p = sub.add_parser("metrics", help="per-window network metrics at a fixed threshold")
    _add_common(p)
    p.add_argument("--theta", type=float, help="threshold (required)")
    p.add_argument("--clustering-bins", type=int, help="bins for the clustering entropy (default 20)")
    p.add_argument("--dump-matrices", help="directory for binary correlation-matrix dumps")
    p.add_argument("--dump-edges", help="directory for per-window edge lists")
    p.add_argument("--dump-terms", action="store_true", default=None,
                   help="write per-pair dissimilarity terms to dterms.csv")

    p = sub.add_parser("synth", help="write a synthetic price file")
    p.add_argument("--config", help="JSON config")
    p.add_argument("-o", "--output", help="price file to write (default: stdout)")
    p.add_argument("--instruments", type=int, help="number of instruments (default 40)")
    p.add_argument("--days", type=int, help="number of price dates (default 600)")
    p.add_argument("--regimes", help="start:loading pairs, e.g. '0:0.2,300:0.7'")
    p.add_argument("--vol", type=float, help="daily return volatility (default 0.01)")
    p.add_argument("--seed", type=int, help="64-bit seed (default 0)")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def effective_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS[args.command])
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {args.config} is not valid JSON: {exc}") from exc
        if "config" in loaded and "version" in loaded:
            loaded = loaded["config"]
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        cfg.update(loaded)
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _fingerprint(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def _comment_block(command: str, cfg: dict, extra: dict) -> str:
    stable = {k: v for k, v in sorted(cfg.items()) if k not in _VOLATILE}
    lines = [f"threshnet {command}", f"version: {__version__}",
             f"config: {json.dumps(stable, sort_keys=True)}"]
    lines += [f"{k}: {v}" for k, v in extra.items()]
    return "".join(f"# {line}\n" for line in lines)


def _write_manifest(out_dir: Path, command: str, cfg: dict, started: str, extra: dict) -> None:
    manifest = {
        "tool": "threshnet",
        "version": __version__,
        "command": command,
        "config": cfg,
        "backend": kernels.BACKEND,
        "started": started,
        "finished": dt.datetime.now(dt.timezone.utc).isoformat(),
        **extra,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _load_returns(cfg: dict):
    if not cfg["input"]:
        raise ConfigError("an input price file is required (--input)")
    if not Path(cfg["input"]).is_file():
        raise InputError(f"input file not found: {cfg['input']}")
    try:
        prices = read_prices(cfg["input"], missing=cfg["missing"])
    except PriceFileError as exc:
        raise InputError(f"{cfg['input']}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{cfg['input']}: not UTF-8 text") from exc
    if cfg["return_interval"] < 1 or cfg["return_interval"] >= prices.T:
        raise ConfigError(f"return interval {cfg['return_interval']} must be in [1, {prices.T - 1}]")
    return log_returns(prices, cfg["return_interval"])


def _window_and_weights(cfg: dict, T_obs: int) -> tuple[WindowSpec, DissimWeights]:
    try:
        spec = WindowSpec(int(cfg["width"]), int(cfg["step"]))
        weights = DissimWeights(float(cfg["alpha"]), float(cfg["beta"]), float(cfg["gamma"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if spec.width > T_obs:
        raise ConfigError(f"window width {spec.width} exceeds the {T_obs} return observations (width must be <= observations)")
    if int(cfg["workers"]) < 1:
        raise ConfigError("workers must be >= 1")
    return spec, weights


def cmd_sweep(cfg: dict) -> int:
    started = dt.datetime.now(dt.timezone.utc).isoformat()
    r = _load_returns(cfg)
    spec, weights = _window_and_weights(cfg, r.T)
    theta_min = None if str(cfg["theta_min"]).lower() == "auto" else cfg["theta_min"]
    try:
        scfg = SweepConfig(
            window=spec,
            theta_min=None if theta_min is None else float(theta_min),
            theta_max=float(cfg["theta_max"]),
            theta_step=float(cfg["theta_step"]),
            weights=weights,
            norm=cfg["norm"],
            workers=int(cfg["workers"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        res = sweep(r, scfg)
    except DegenerateSweepError:
        raise
    except SweepError as exc:
        raise ConfigError(str(exc)) from exc

    out_dir = Path(cfg["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    fingerprint = _fingerprint(cfg["input"])
    extra = {
        "input_sha256": fingerprint,
        "windows": len(res.diff_w) + 1,
        "corr_range": f"{res.corr_min!r} {res.corr_max!r}",
        "grid": f"{float(res.thetas[0])!r} {float(res.thetas[-1])!r} {len(res.thetas)}",
        "theta_hat": repr(res.theta_hat),
        "ties": " ".join(repr(t) for t in res.ties) or "none",
    }
    body = ["theta,G_theta,defined\n"]
    for t, g in zip(res.thetas, res.g_values):
        body.append(f"{float(t)!r},{_fmt(float(g))},{0 if math.isnan(g) else 1}\n")
    (out_dir / "sweep.csv").write_text(_comment_block("sweep", cfg, extra) + "".join(body), encoding="utf-8")
    _write_manifest(out_dir, "sweep", cfg, started, {"input_sha256": fingerprint, "result": extra})
    print(f"theta_hat {res.theta_hat!r}")
    print(f"G_max {float(res.g_values[res.thetas == res.theta_hat][0])!r}")
    if res.ties:
        print("ties " + " ".join(repr(t) for t in res.ties))
    return 0


def cmd_metrics(cfg: dict) -> int:
    started = dt.datetime.now(dt.timezone.utc).isoformat()
    if cfg["theta"] is None:
        raise ConfigError("--theta is required")
    theta = float(cfg["theta"])
    if not math.isfinite(theta):
        raise ConfigError("theta must be finite")
    if int(cfg["clustering_bins"]) < 1:
        raise ConfigError("clustering_bins must be >= 1")
    r = _load_returns(cfg)
    if r.n < 3:
        raise ConfigError(f"metrics need at least 3 instruments, got {r.n}")
    spec, weights = _window_and_weights(cfg, r.T)
    mats = correlation_matrices(r, spec)
    graphs = [threshold_graph(W, theta) for W in mats]
    rows = metrics_series(graphs, mats, int(cfg["clustering_bins"]))

    out_dir = Path(cfg["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    starts = window_starts(r.T, spec)
    fingerprint = _fingerprint(cfg["input"])
    extra = {"input_sha256": fingerprint, "theta": repr(theta), "windows": len(rows)}
    cols = ["window", "start_date", "end_date"] + MetricsRow.columns()[1:]
    body = [",".join(cols) + "\n"]
    for row, s in zip(rows, starts):
        vals = [row.window, r.dates[s].isoformat(), r.dates[s + spec.width - 1].isoformat()]
        vals += [getattr(row, c) for c in MetricsRow.columns()[1:]]
        body.append(",".join(_fmt(v) for v in vals) + "\n")
    (out_dir / "metrics.csv").write_text(_comment_block("metrics", cfg, extra) + "".join(body), encoding="utf-8")

    if cfg["dump_matrices"]:
        d = Path(cfg["dump_matrices"])
        d.mkdir(parents=True, exist_ok=True)
        for W in mats:
            dump_matrix(W, d / f"corr_w{W.window:05d}.bin")
    if cfg["dump_edges"]:
        d = Path(cfg["dump_edges"])
        d.mkdir(parents=True, exist_ok=True)
        for g in graphs:
            write_edge_list(g, d / f"edges_w{g.window:05d}_theta{theta!r}.txt")
    if cfg["dump_terms"]:
        summaries = [summarize(g) for g in graphs]
        lines = ["window_a,window_b,distance,dispersion,centrality,D\n"]
        for a, b in zip(summaries, summaries[1:]):
            terms = d_terms(a, b)
            k = len(lines) - 1
            lines.append(f"{k},{k + 1}," + ",".join(repr(t) for t in terms) + f",{combine(terms, weights)!r}\n")
        (out_dir / "dterms.csv").write_text("".join(lines), encoding="utf-8")
    _write_manifest(out_dir, "metrics", cfg, started, {"input_sha256": fingerprint})
    print(f"wrote {len(rows)} window rows to {out_dir / 'metrics.csv'}")
    return 0


def parse_regimes(text: str) -> tuple[tuple[int, float], ...]:
    try:
        pairs = [item.split(":") for item in str(text).split(",") if item.strip()]
        return tuple((int(s), float(v)) for s, v in pairs)
    except ValueError:
        raise ConfigError(f"regimes must look like '0:0.2,300:0.7', got {text!r}") from None


def cmd_synth(cfg: dict) -> int:
    regimes = cfg["regimes"]
    regimes = parse_regimes(regimes) if isinstance(regimes, str) else tuple((int(s), float(v)) for s, v in regimes)
    try:
        scfg = SynthConfig(n=int(cfg["instruments"]), T=int(cfg["days"]), regimes=regimes,
                           vol=float(cfg["vol"]), seed=int(cfg["seed"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    table = generate_market(scfg)
    if cfg["output"]:
        write_prices(table, cfg["output"])
        log.info("wrote %d x %d prices (%s, seed %d) to %s", table.n, table.T, GENERATOR, scfg.seed, cfg["output"])
    else:
        sys.stdout.write(format_prices(table))
    return 0


COMMANDS = {"sweep": cmd_sweep, "metrics": cmd_metrics, "synth": cmd_synth}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = effective_config(args)
        print(f"config: {json.dumps(cfg, sort_keys=True)}", file=sys.stderr)
        return COMMANDS[args.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegenerateSweepError, ZeroVarianceError) as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
