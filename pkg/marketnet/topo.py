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

# marketnet/topo.py

"""
Threshold networks: construction, components, degrees, clustering and sweeps.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional

import networkx as nx
import numpy as np

from .corrnet import CorrMatrix
from .errors import DataError, EmptyScope, ThetaOutOfRange, UnsortedThetas

SCOPES = ("whole", "largest")
SMALL_CLUSTER_MAX = 3


@dataclass(frozen=True)
class ThresholdGraph:
    theta: float
    tickers: tuple
    graph: nx.Graph = field(compare=False)
    meta: Optional[Mapping[str, str]] = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.tickers)

    @property
    def vertices(self) -> list[int]:
        return list(range(self.n))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted((min(i, j), max(i, j)) for i, j in self.graph.edges())

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    @property
    def adjacency(self) -> dict[int, list[int]]:
        return {v: sorted(self.graph.neighbors(v)) for v in self.vertices}

    def degrees(self) -> list[int]:
        return [self.graph.degree(v) for v in self.vertices]


@dataclass(frozen=True)
class ComponentReport:
    components: tuple
    largest_fraction: float

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.components]

    @property
    def largest(self) -> frozenset:
        return self.components[0]

    def small_clusters(self) -> list[frozenset]:
        """Clusters of 2..3 vertices; reported but flagged as below the presentation cut."""
        return [c for c in self.components if 1 < len(c) <= SMALL_CLUSTER_MAX]

    @property
    def isolated_count(self) -> int:
        return sum(1 for c in self.components if len(c) == 1)


@dataclass(frozen=True)
class DegreeDistribution:
    counts: dict
    pmf: dict
    scope: str = "whole"

    @property
    def size(self) -> int:
        return sum(self.counts.values())

    def as_dict(self) -> dict:
        return {
            "scope": self.scope,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "pmf": {str(k): p for k, p in sorted(self.pmf.items())},
        }


@dataclass(frozen=True)
class SweepRow:
    theta: float
    mean_degree: float
    avg_clustering: float
    largest_fraction: float
    edge_count: int
    largest_mean_degree: float
    n_components: int
    small_clusters: int

    COLUMNS = ("theta", "mean_degree", "avg_clustering", "largest_fraction", "edge_count",
               "largest_mean_degree", "n_components", "small_clusters")

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, c) for c in self.COLUMNS)


def degree_distribution_from(degrees, scope: str = "whole") -> DegreeDistribution:
    counts = dict(sorted(Counter(int(k) for k in degrees).items()))
    total = sum(counts.values())
    pmf = {k: c / total for k, c in counts.items()}
    return DegreeDistribution(counts, pmf, scope)


def build_threshold_network(C: CorrMatrix, theta: float) -> ThresholdGraph:
    """Undirected graph with an edge (i, j), i < j, wherever C_ij >= theta."""
    if not -1.0 <= theta <= 1.0:
        raise ThetaOutOfRange(theta)
    graph = nx.Graph()
    graph.add_nodes_from(range(C.n))
    rows, cols = np.nonzero(np.triu(C.C >= theta, k=1))
    graph.add_edges_from(zip(rows.tolist(), cols.tolist()))
    return ThresholdGraph(float(theta), C.tickers, graph, C.meta)


def sigma_thresholds(C: CorrMatrix, multiples) -> list[float]:
    """theta_k = mean + k * std of the off-diagonal coefficients (sample std)."""
    multiples = list(multiples)
    if not multiples:
        raise DataError("At least one sigma multiple is required.")
    values = C.coefficients()
    mean = float(values.mean())
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return [mean + k * std for k in multiples]


def connected_components(G: ThresholdGraph) -> ComponentReport:
    """Components ordered by size (descending), then by smallest member id."""
    components = sorted(
        (frozenset(c) for c in nx.connected_components(G.graph)),
        key=lambda c: (-len(c), min(c)),
    )
    return ComponentReport(tuple(components), len(components[0]) / G.n)


def mean_degree(G: ThresholdGraph) -> float:
    return 2.0 * G.edge_count / G.n


def degree_distribution(G: ThresholdGraph, scope: str = "whole") -> DegreeDistribution:
    if scope not in SCOPES:
        raise DataError(f"Unknown scope {scope!r}; expected one of {SCOPES}.")
    if scope == "whole":
        return degree_distribution_from(G.degrees(), scope)
    if G.edge_count == 0:
        raise EmptyScope()
    largest = connected_components(G).largest
    return degree_distribution_from((G.graph.degree(v) for v in sorted(largest)), scope)


def clustering_coefficients(G: ThresholdGraph) -> tuple[list[float], float]:
    """
    C_i = 2 m_i / (n_i (n_i - 1)), 0 when n_i <= 1. The average runs over all
    N vertices, isolated ones included.
    """
    local = nx.clustering(G.graph)
    per_vertex = [float(local[v]) for v in G.vertices]
    return per_vertex, sum(per_vertex) / G.n


def largest_component_subgraph(G: ThresholdGraph) -> ThresholdGraph:
    """The largest component as a graph of its own, vertices renumbered in ticker order."""
    members = sorted(connected_components(G).largest)
    sub = nx.convert_node_labels_to_integers(G.graph.subgraph(members), ordering="sorted")
    return ThresholdGraph(G.theta, tuple(G.tickers[v] for v in members), sub, G.meta)


def _sweep_row(C: CorrMatrix, theta: float) -> SweepRow:
    G = build_threshold_network(C, theta)
    report = connected_components(G)
    _, avg_clustering = clustering_coefficients(G)
    return SweepRow(
        theta=float(theta),
        mean_degree=mean_degree(G),
        avg_clustering=avg_clustering,
        largest_fraction=report.largest_fraction,
        edge_count=G.edge_count,
        largest_mean_degree=mean_degree(largest_component_subgraph(G)),
        n_components=len(report.components),
        small_clusters=len(report.small_clusters()),
    )


def threshold_sweep(C: CorrMatrix, thetas) -> list[SweepRow]:
    """One independently computed row per threshold; thetas must ascend."""
    thetas = [float(t) for t in thetas]
    if any(b < a for a, b in zip(thetas, thetas[1:])):
        raise UnsortedThetas()
    return [_sweep_row(C, t) for t in thetas]


def sweep_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive grid start, start+step, ... <= stop, rounded to 10 places."""
    if step <= 0:
        raise DataError(f"Sweep step must be positive, got {step}.")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(max(count, 0))]
