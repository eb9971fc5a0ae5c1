"""
    marketnet: correlation-network analytics for asset price panels.
    Copyright (C) 2025  The marketnet authors

    This file is part of marketnet.

    marketnet is free software: you can redistribute it and/or modify
    it under the terms of the GNU General Public License as published
    by the Free Software Foundation, either version 3 of the License,
    or (at your option) any later version.

    marketnet is distributed in the hope that it will be useful, but WITHOUT
    ANY WARRANTY; without even the implied warranty of MERCHANTABILITY
    or FITNESS FOR A PARTICULAR PURPOSE. See the GNU General Public
    License for more details.

    You should have received a copy of the GNU General Public License
    along with marketnet. If not, see <https://www.gnu.org/licenses/>.
"""

# marketnet/main.py

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional

import colorama
from art import tprint
from colorama import Fore, Style

from .batch_runner import full_panel_window, run_windows
from .config import RunConfig, STAGES, apply_overrides, load_config, load_synth_spec
from .errors import (
    EXIT_DATA, EXIT_OK, EXIT_USAGE, DataError, MarketNetError, MissingArtifact,
)
from .exporters import EXPORTERS, GraphArtifact, write_artifact
from .hier import BAND_MODES, Merge, MergeTree
from .ingest import FILL_POLICIES, FORMATS, WindowSpec, read_panel
from .report import analyze_window, theta_key
from .synth import crisis_scenario, generate, regime_windows
from .topo import SCOPES
from .tree import SpanningTree
from .utils import fail, info, success

ARTIFACTS = ("mst", "threshold", "dendrogram")


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{Fore.RED}❌ Usage Error: {message}{Style.RESET_ALL}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _window_arg(text: str) -> WindowSpec:
    try:
        return WindowSpec.parse(text)
    except DataError as e:
        raise argparse.ArgumentTypeError(str(e))


def _range_arg(text: str) -> tuple[float, float]:
    parts = text.split(":")
    try:
        lo, hi = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Range must look like lo:hi, got {text!r}.")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"Range low end exceeds high end in {text!r}.")
    return lo, hi


def _theta_arg(text: str) -> float:
    try:
        theta = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Threshold must be a number, got {text!r}.")
    if not -1.0 <= theta <= 1.0:
        raise argparse.ArgumentTypeError(f"Threshold {theta} is outside [-1, 1].")
    return theta


def _add_input_flags(p: argparse.ArgumentParser):
    p.add_argument("-c", "--config", dest="config_path", type=Path, default=None,
                   help="TOML run configuration; CLI flags override it.")
    p.add_argument("--input", dest="input_path", type=Path, help="Price CSV file.")
    p.add_argument("--format", choices=FORMATS, help="CSV layout (default: wide).")
    p.add_argument("--fill", choices=FILL_POLICIES, help="Missing-price policy (default: none).")
    p.add_argument("--sectors", dest="sectors_path", type=Path, help="Optional ticker,sector CSV.")
    p.add_argument("--window", dest="windows", action="append", type=_window_arg, default=[],
                   metavar="NAME:START:END", help="Analysis window (repeatable).")
    p.add_argument("--theta", dest="thetas", action="append", type=_theta_arg, default=[],
                   help="Explicit network threshold (repeatable).")
    p.add_argument("--sigma-mult", dest="sigma_multiples", action="append", type=int, default=[],
                   help="Threshold at mean + k*std (repeatable; default 1 2 3).")
    p.add_argument("--fit-range", dest="clustering_range", type=_range_arg,
                   metavar="LO:HI", help="Theta range for the clustering scaling fit.")
    p.add_argument("--degree-range", dest="degree_range", type=_range_arg,
                   metavar="LO:HI", help="Degree range for degree-exponent fits.")
    p.add_argument("--log-binning", dest="log_binning", action="store_true", default=None,
                   help="Fit degree distributions on powers-of-two bins.")
    p.add_argument("--scope", choices=SCOPES, help="Degree distribution scope (default: largest).")
    p.add_argument("--band-mode", dest="band_mode", choices=BAND_MODES, help="Dendrogram height banding.")
    p.add_argument("--seed", type=int, help="Seed recorded in the provenance block.")


def build_parser() -> CliParser:
    parser = CliParser(prog="marketnet", description="Correlation-network analytics for asset price panels.")
    parser.add_argument("-n", "--no-logo", dest="no_logo", action="store_true", default=False,
                        help="Disable Ascii Art logo.")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="Analyze one or more windows of a price panel.")
    _add_input_flags(analyze)
    analyze.add_argument("--out", dest="output_dir", type=Path, help="Output directory (default: ./output).")
    analyze.add_argument("--export", dest="exports", action="append", choices=sorted(EXPORTERS), default=[],
                         help="Graph/dendrogram export format (repeatable).")
    analyze.add_argument("--workers", type=int, help="Windows analyzed in parallel (default: 1).")
    analyze.add_argument("--stage", dest="stages", action="append", choices=STAGES, default=[],
                         help="Restrict the analysis to these stages (repeatable).")
    analyze.add_argument("-q", "--quiet", action="store_true", help="No progress bar or summary.")

    synth = commands.add_parser("synth", help="Write a synthetic multi-regime price panel.")
    synth.add_argument("-c", "--config", dest="config_path", type=Path, default=None,
                       help="TOML file with a [synth] table (default: built-in crisis scenario).")
    synth.add_argument("--out", type=Path, default=Path("synthetic.csv"), help="CSV path (default: %(default)s).")
    synth.add_argument("--seed", type=int, help="Override the scenario seed.")

    export = commands.add_parser("export", help="Serialize one artifact of one window.")
    _add_input_flags(export)
    export.add_argument("--report", type=Path, help="Read mst/dendrogram from an existing report.json.")
    export.add_argument("--artifact", choices=ARTIFACTS, required=True)
    export.add_argument("--export", "--to", dest="fmt", required=True,
                        help=f"Output format: {', '.join(sorted(EXPORTERS))}.")
    export.add_argument("--out", type=Path, required=True, help="Output file.")
    return parser


def _run_config(args) -> RunConfig:
    config = load_config(args.config_path) if args.config_path else RunConfig()
    overrides = {k: getattr(args, k, None) for k in (
        "input_path", "format", "fill", "sectors_path", "windows", "thetas", "sigma_multiples",
        "clustering_range", "degree_range", "log_binning", "scope", "band_mode", "seed",
        "output_dir", "exports", "workers", "stages",
    )}
    return apply_overrides(config, **overrides).validate()


def _load_panel(config: RunConfig):
    if config.input_path is None:
        raise DataError("No input file given (use --input or 'input' in the config).")
    return read_panel(config.input_path, config.format, config.fill, config.sectors_path)


def cmd_analyze(args) -> int:
    config = _run_config(args)
    panel = _load_panel(config)
    if not args.quiet:
        info(f"🔎 Loaded {panel.n_assets} tickers over {panel.n_dates} dates from {config.input_path}")
        info(f"🚀 Analyzing {len(config.windows) or 1} window(s) into {config.output_dir}")
    return run_windows(panel, config, quiet=args.quiet)


def _write_csv(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def cmd_synth(args) -> int:
    spec = load_synth_spec(args.config_path) if args.config_path else crisis_scenario()
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    panel = generate(spec)

    out: Path = args.out
    _write_csv(out, panel.to_csv())
    sectors = "ticker,sector\n" + "".join(f"{t},{s}\n" for t, s in panel.meta.items())
    _write_csv(out.with_suffix(".sectors.csv"), sectors)
    windows = "name,start,end\n" + "".join(
        f"{w.name},{w.start.isoformat()},{w.end.isoformat()}\n" for w in regime_windows(spec))
    _write_csv(out.with_suffix(".windows.csv"), windows)
    success(f"Synthetic panel ({spec.n_assets} tickers, {panel.n_dates} rows, seed {spec.seed}) written to: {out}")
    return EXIT_OK


def _artifact_from_report(path: Path, window: Optional[str], artifact: str):
    if not path.is_file():
        raise MissingArtifact(f"Report not found: {path}")
    windows = json.loads(path.read_text(encoding="utf-8")).get("windows", [])
    chosen = [w for w in windows if window is None or w["window"]["name"] == window]
    if not chosen:
        raise MissingArtifact(f"Window '{window}' is not in {path}.")
    rep = chosen[0]
    if artifact == "mst" and rep.get("mst", {}).get("edges"):
        tickers = tuple(rep["hierarchy"].get("leaves") or sorted(
            {e[0] for e in rep["mst"]["edges"]} | {e[1] for e in rep["mst"]["edges"]}))
        index = {t: i for i, t in enumerate(tickers)}
        edges = tuple((index[a], index[b], w) for a, b, w in rep["mst"]["edges"])
        meta = {h["ticker"]: h["sector"] for h in rep["mst"].get("hubs", []) if "sector" in h} or None
        return GraphArtifact.from_tree(SpanningTree(tickers, edges, meta), f"{rep['window']['name']}_mst")
    if artifact == "dendrogram" and rep.get("hierarchy", {}).get("merges"):
        merges = tuple(Merge(int(l), int(r), float(h), int(s)) for l, r, h, s in rep["hierarchy"]["merges"])
        return MergeTree(tuple(rep["hierarchy"]["leaves"]), merges)
    raise MissingArtifact(f"The report holds no '{artifact}' artifact for window '{rep['window']['name']}'.")


def _artifact_inline(args, artifact: str):
    config = _run_config(args)
    panel = _load_panel(config)
    window = config.windows[0] if config.windows else full_panel_window(panel)
    stage = {"mst": "mst", "threshold": "threshold", "dendrogram": "hierarchy"}[artifact]
    config.stages = [stage]
    if artifact == "threshold":
        if len(config.thetas) != 1:
            raise MissingArtifact("Exporting a threshold network needs exactly one --theta.")
        config.sigma_multiples = []
        config.sweep = (config.thetas[0], config.thetas[0], 1.0)
    rep = analyze_window(panel, window, config)
    if artifact == "mst":
        return GraphArtifact.from_tree(rep.artifacts["tree"], f"{window.name}_mst")
    if artifact == "threshold":
        key = theta_key(config.thetas[0])
        return GraphArtifact.from_threshold(rep.artifacts["graphs"][key], f"{window.name}_threshold_{key}")
    return rep.artifacts["newick_tree"]


def cmd_export(args) -> int:
    if args.report is not None:
        window = args.windows[0].name if args.windows else None
        artifact = _artifact_from_report(args.report, window, args.artifact)
    else:
        artifact = _artifact_inline(args, args.artifact)
    path = write_artifact(artifact, args.fmt, args.out)
    success(f"{args.artifact} exported as {args.fmt} to: {path}")
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "synth": cmd_synth, "export": cmd_export}


def run(argv=None) -> int:
    """Parses argv, dispatches the subcommand and maps errors to exit codes."""
    args = build_parser().parse_args(argv)

    if not args.no_logo and not getattr(args, "quiet", False):
        tprint("marketnet", "isometric1")
        print("marketnet correlation-network analytics.")

    try:
        return COMMANDS[args.command](args)
    except MarketNetError as e:
        fail(f"{type(e).__name__}: {e}")
        return e.exit_code
    except FileNotFoundError as e:
        fail(f"File Error: {e}")
        return EXIT_DATA
    except (KeyError, ValueError, TypeError) as e:
        fail(f"Configuration Error: {e}")
        return EXIT_USAGE


def main(argv=None):
    colorama.init()
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
