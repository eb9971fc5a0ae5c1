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

# marketnet/report.py

"""
Per-window analysis pipeline and the report files it produces.

A window runs through slice -> returns -> stats -> correlation -> threshold
networks -> spanning tree -> hierarchy -> fits. Any module error is re-raised
as a StageError naming the window and stage. Fit failures are the exception:
they are recorded in the report and the run continues.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pandas as pd

from . import __version__
from .config import RunConfig
from .corrnet import (
    CORRELATION_CONVENTION, coefficient_distribution, cross_correlation, distance_matrix,
)
from .errors import DegenerateVariance, MarketNetError, StageError, TooFewSamples
from .exporters import GraphArtifact, file_name, supported_formats, write_artifact
from .fit import fit_clustering_scaling, fit_degree_exponent
from .hier import (
    cophenetic_correlation, cophenetic_matrix, pair_height_bands, subset_tree, upgma,
)
from .ingest import PricePanel, WindowSpec, log_returns, slice_window
from .stats import KURTOSIS_CONVENTION, VOLATILITY_CONVENTION, mean_volatility, return_stats
from .topo import (
    SweepRow, build_threshold_network, clustering_coefficients, connected_components,
    degree_distribution, largest_component_subgraph, mean_degree, sigma_thresholds, sweep_grid,
    threshold_sweep,
)
from .tree import (
    TREE_LENGTH_CONVENTION, average_tree_length, hub_ranking, kruskal_mst,
    mean_pairwise_path_length, mst_degree_distribution,
)

SCHEMA_PATH = Path(__file__).parent / "schema" / "report.schema.json"
REPORT_VERSION = 1


@dataclass
class WindowReport:
    window: dict
    window_stats: dict = field(default_factory=dict)
    threshold_networks: dict = field(default_factory=dict)
    mst: dict = field(default_factory=dict)
    hierarchy: dict = field(default_factory=dict)
    fits: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    # in-memory results for exports and TSVs, never serialized
    artifacts: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def name(self) -> str:
        return self.window["name"]

    def as_dict(self) -> dict:
        return {
            "window": self.window,
            "window_stats": self.window_stats,
            "threshold_networks": self.threshold_networks,
            "mst": self.mst,
            "hierarchy": self.hierarchy,
            "fits": self.fits,
            "provenance": self.provenance,
            "notes": self.notes,
        }


def theta_key(theta: float) -> str:
    return f"{theta:.6f}"


def conventions(config: RunConfig) -> dict:
    return {
        "kurtosis": KURTOSIS_CONVENTION,
        "volatility": VOLATILITY_CONVENTION,
        "correlation": CORRELATION_CONVENTION,
        "normalization_std": "sample",
        "sigma_threshold_std": "sample",
        "edge_rule": "C_ij >= theta",
        "clustering_average": "all_vertices",
        "tree_length": TREE_LENGTH_CONVENTION,
        "fit_target": "pmf",
        "fit_binning": "log2" if config.log_binning else "unit",
        "band_mode": config.band_mode,
    }


class _Stage:
    """Context manager that re-raises module errors with window/stage context."""

    def __init__(self, window: str, stage: str, log: Callable):
        self.window, self.stage, self.log = window, stage, log

    def __enter__(self):
        self.log(f"▶ {self.stage}")
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None or isinstance(exc, StageError):
            return False
        if isinstance(exc, (MarketNetError, ArithmeticError, ValueError)):
            raise StageError(self.window, self.stage, exc) from exc
        return False


def _fit_record(quantity: str, fit_call: Callable) -> dict:
    try:
        fit = fit_call()
    except MarketNetError as e:
        return {"quantity": quantity, "error": str(e)}
    record = fit.as_dict()
    record["quantity"] = quantity
    return record


def _threshold_entry(C, theta: float, sources: list, config: RunConfig, notes: list) -> tuple[dict, object]:
    G = build_threshold_network(C, theta)
    report = connected_components(G)
    _, avg_clustering = clustering_coefficients(G)
    largest = report.largest
    entry = {
        "theta": theta,
        "sources": sources,
        "edge_count": G.edge_count,
        "mean_degree": mean_degree(G),
        "avg_clustering": avg_clustering,
        "largest_fraction": report.largest_fraction,
        "largest_size": len(largest),
        "largest_mean_degree": mean_degree(largest_component_subgraph(G)),
        "n_components": len(report.components),
        "component_sizes": report.sizes,
        "small_clusters": [sorted(G.tickers[v] for v in c) for c in report.small_clusters()],
        "isolated": report.isolated_count,
    }
    scope = config.scope
    if scope == "largest" and G.edge_count == 0:
        notes.append(f"theta {theta_key(theta)}: no edges, degree distribution taken over the whole graph")
        scope = "whole"
    entry["degree_distribution"] = degree_distribution(G, scope).as_dict()
    return entry, G


def analyze_window(panel: PricePanel, window: WindowSpec, config: RunConfig,
                   log: Optional[Callable] = None) -> WindowReport:
    """Runs every selected stage on one window and returns its report."""
    log = log or (lambda message: None)
    name = window.name
    rep = WindowReport(window={"name": name, "start": window.start.isoformat(), "end": window.end.isoformat()})

    with _Stage(name, "slice", log):
        sub = slice_window(panel, window)
    with _Stage(name, "returns", log):
        returns = log_returns(sub)
    rep.window.update({"n_assets": returns.n_assets, "n_days": returns.n_days})

    with _Stage(name, "correlation", log):
        C = cross_correlation(returns)
        D = distance_matrix(C)
        coeff_stats, histogram = coefficient_distribution(C, config.bin_width)
    rep.artifacts.update(corr=C, dist=D, histogram=histogram)

    if config.wants("stats"):
        with _Stage(name, "stats", log):
            volatility = mean_volatility(returns)
            pooled = return_stats(returns)
        rep.window_stats = {
            "mean_correlation": coeff_stats.mean,
            "correlation": coeff_stats.as_dict(),
            "mean_volatility": volatility.mean_volatility,
            "returns": pooled.as_dict(),
            "kurtosis_convention": KURTOSIS_CONVENTION,
            "volatility_convention": VOLATILITY_CONVENTION,
            "histogram_bin_width": histogram.bin_width,
        }

    sweep: list[SweepRow] = []
    if config.wants("threshold"):
        with _Stage(name, "threshold", log):
            sigma_thetas = sigma_thresholds(C, config.sigma_multiples) if config.sigma_multiples else []
            requested: dict[str, tuple[float, list]] = {}
            for k, theta in zip(config.sigma_multiples, sigma_thetas):
                requested.setdefault(theta_key(theta), (theta, []))[1].append(f"sigma:{k}")
            for theta in config.thetas:
                requested.setdefault(theta_key(theta), (theta, []))[1].append("explicit")

            networks, graphs = {}, {}
            for key, (theta, sources) in sorted(requested.items(), key=lambda kv: kv[1][0]):
                if not -1.0 <= theta <= 1.0:
                    rep.notes.append(f"theta {key} from {', '.join(sources)} lies outside [-1, 1]; skipped")
                    continue
                networks[key], graphs[key] = _threshold_entry(C, theta, sources, config, rep.notes)

            sweep = threshold_sweep(C, sweep_grid(*config.sweep))
        rep.threshold_networks = {
            "sigma_thresholds": {str(k): t for k, t in zip(config.sigma_multiples, sigma_thetas)},
            "networks": networks,
            "sweep": {"columns": list(SweepRow.COLUMNS), "rows": [list(r.as_tuple()) for r in sweep]},
        }
        rep.artifacts.update(graphs=graphs, sweep=sweep)

    tree = None
    if config.wants("mst"):
        with _Stage(name, "mst", log):
            tree = kruskal_mst(D)
            hubs = hub_ranking(tree, min(config.hub_top, tree.n))
            mst_dd = mst_degree_distribution(tree)
            rep.mst = {
                "edges": [[tree.tickers[i], tree.tickers[j], w] for i, j, w in tree.edges],
                "total_weight": tree.total_weight,
                "tree_length": average_tree_length(tree),
                "mean_pairwise_path_length": mean_pairwise_path_length(tree),
                "degree_distribution": mst_dd.as_dict(),
                "hubs": [h.as_dict() for h in hubs.entries],
                "hub_sectors": hubs.sector_tally(),
            }
        rep.artifacts.update(tree=tree, mst_degrees=mst_dd)

    if config.wants("hierarchy"):
        with _Stage(name, "hierarchy", log):
            merge_tree = upgma(D)
            coph = cophenetic_matrix(merge_tree)
            bands = pair_height_bands(coph, config.band_cutoffs, config.band_mode)
            try:
                ccc = cophenetic_correlation(D, coph)
            except (TooFewSamples, DegenerateVariance) as e:
                ccc = None
                rep.notes.append(f"cophenetic correlation not computed: {e}")
            rep.hierarchy = {
                "leaves": list(merge_tree.tickers),
                "merges": [m.as_list() for m in merge_tree.merges],
                "ccc": ccc,
                "bands": bands.as_dict(),
                "newick_leaves": config.newick_leaves or D.n,
            }
            rep.artifacts.update(merge_tree=merge_tree, newick_tree=subset_tree(D, config.newick_leaves))

    if config.wants("fits"):
        with _Stage(name, "fits", log):
            rep.fits = _fits(rep, C, config)

    rep.provenance = {
        "software": "marketnet",
        "version": __version__,
        "report_version": REPORT_VERSION,
        "conventions": conventions(config),
        "parameters": config.as_dict(),
    }
    if config.seed is not None:
        rep.provenance["seed"] = config.seed
    log(f"✅ analyzed {returns.n_assets} assets over {returns.n_days} days")
    return rep


def _fits(rep: WindowReport, C, config: RunConfig) -> dict:
    fits = {}
    mst_degrees = rep.artifacts.get("mst_degrees")
    if mst_degrees is not None:
        fits["gamma_mst"] = _fit_record(
            "mst_degree", lambda: fit_degree_exponent(mst_degrees, config.degree_range, config.log_binning))
    sweep = rep.artifacts.get("sweep")
    if sweep:
        fits["alpha_clustering"] = _fit_record(
            "clustering_scaling", lambda: fit_clustering_scaling(sweep, config.clustering_range))

    if config.wants("threshold"):
        thetas = {theta_key(t): t for t in
                  list(rep.threshold_networks.get("sigma_thresholds", {}).values()) + list(config.degree_fit_thetas)}
        table = {}
        for key, theta in sorted(thetas.items(), key=lambda kv: kv[1]):
            def fit_at(theta=theta):
                G = build_threshold_network(C, theta)
                dd = degree_distribution(G, config.scope)
                return fit_degree_exponent(dd, config.degree_range, config.log_binning)
            if -1.0 <= theta <= 1.0:
                table[key] = _fit_record("threshold_degree", fit_at)
        fits["gamma_threshold"] = table
    return fits


# --- writers ---

def _to_builtin(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (tuple, set, frozenset)):
        return list(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def dumps(payload) -> str:
    """Deterministic JSON: sorted keys, two-space indent, finite numbers only."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False, default=_to_builtin) + "\n"


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def _write_tsv(path: Path, frame: pd.DataFrame) -> Path:
    return _write_text(path, frame.to_csv(sep="\t", index=False, lineterminator="\n"))


def window_dir(out_dir: Path, name: str) -> Path:
    return Path(out_dir) / name


def write_window_files(rep: WindowReport, out_dir: Path, exports=()) -> list[Path]:
    """Plot-ready TSVs and requested graph exports under <out>/<window>/."""
    target = window_dir(out_dir, rep.name)
    written = []

    histogram = rep.artifacts.get("histogram")
    if histogram is not None:
        written.append(_write_tsv(target / "histogram.tsv",
                                  pd.DataFrame(histogram.rows(), columns=["center", "density"])))
    sweep = rep.artifacts.get("sweep")
    if sweep:
        written.append(_write_tsv(target / "sweep.tsv",
                                  pd.DataFrame([r.as_tuple() for r in sweep], columns=list(SweepRow.COLUMNS))))
    mst_degrees = rep.artifacts.get("mst_degrees")
    if mst_degrees is not None:
        rows = [(k, c, mst_degrees.pmf[k]) for k, c in mst_degrees.counts.items()]
        written.append(_write_tsv(target / "mst_degree.tsv", pd.DataFrame(rows, columns=["k", "count", "pmf"])))

    for fmt in exports:
        for stem, artifact in export_targets(rep).items():
            if fmt in supported_formats(artifact):
                written.append(write_artifact(artifact, fmt, target / file_name(stem, fmt)))
    return written


def export_targets(rep: WindowReport) -> dict:
    """Exportable artifacts of a report keyed by file stem."""
    targets = {}
    if rep.artifacts.get("tree") is not None:
        targets["mst"] = GraphArtifact.from_tree(rep.artifacts["tree"], f"{rep.name}_mst")
    for key, G in rep.artifacts.get("graphs", {}).items():
        targets[f"threshold_{key}"] = GraphArtifact.from_threshold(G, f"{rep.name}_threshold_{key}")
    if rep.artifacts.get("newick_tree") is not None:
        targets["dendrogram"] = rep.artifacts["newick_tree"]
    return targets


def build_report(reports: list[WindowReport]) -> dict:
    return {
        "report_version": REPORT_VERSION,
        "software": "marketnet",
        "version": __version__,
        "windows": [r.as_dict() for r in reports],
    }


def _fit_text(record: Optional[dict]) -> Optional[str]:
    if not record or "error" in record:
        return None
    return record["formatted"]


def build_summary(reports: list[WindowReport]) -> dict:
    """Side-by-side headline numbers for before/during/after comparisons."""
    rows = []
    for r in reports:
        networks = r.threshold_networks.get("networks", {})
        sigma = r.threshold_networks.get("sigma_thresholds", {})
        hubs = r.mst.get("hubs", [])
        rows.append({
            "window": r.name,
            "n_assets": r.window.get("n_assets"),
            "n_days": r.window.get("n_days"),
            "mean_correlation": r.window_stats.get("mean_correlation"),
            "mean_volatility": r.window_stats.get("mean_volatility"),
            "sigma_thresholds": sigma,
            "largest_fraction": {k: networks[theta_key(t)]["largest_fraction"]
                                 for k, t in sigma.items() if theta_key(t) in networks},
            "tree_length": r.mst.get("tree_length"),
            "ccc": r.hierarchy.get("ccc"),
            "gamma_mst": _fit_text(r.fits.get("gamma_mst")),
            "alpha_clustering": _fit_text(r.fits.get("alpha_clustering")),
            "top_hub": hubs[0] if hubs else None,
        })

    def pick(key, best):
        values = [(row[key], row["window"]) for row in rows if row.get(key) is not None]
        return best(values)[1] if values else None

    return {
        "windows": rows,
        "highest_mean_correlation": pick("mean_correlation", max),
        "shortest_tree": pick("tree_length", min),
        "highest_ccc": pick("ccc", max),
    }


def write_reports(reports: list[WindowReport], out_dir: Path) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    report_path = _write_text(out_dir / "report.json", dumps(build_report(reports)))
    summary_path = _write_text(out_dir / "summary.json", dumps(build_summary(reports)))
    return report_path, summary_path


def load_schema() -> dict:
    return json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
