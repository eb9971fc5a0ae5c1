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

# marketnet/tree.py

"""
Minimum spanning tree over Mantegna distances, tree length and hubs.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional

import networkx as nx

from .corrnet import DistMatrix
from .errors import DataError, TooFewSamples, TopOutOfRange
from .topo import DegreeDistribution, degree_distribution_from

TREE_LENGTH_CONVENTION = "edge_sum_over_n"


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class SpanningTree:
    tickers: tuple
    edges: tuple
    meta: Optional[Mapping[str, str]] = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.tickers)
        if len(self.edges) != n - 1:
            raise DataError(f"A spanning tree over {n} vertices needs {n - 1} edges, got {len(self.edges)}.")

    @property
    def n(self) -> int:
        return len(self.tickers)

    @property
    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges)

    @property
    def adjacency(self) -> dict[int, list[int]]:
        adj = {v: [] for v in range(self.n)}
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return {v: sorted(nbrs) for v, nbrs in adj.items()}

    def degrees(self) -> list[int]:
        return [len(nbrs) for nbrs in self.adjacency.values()]

    def to_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_weighted_edges_from(self.edges)
        return graph


@dataclass(frozen=True)
class HubEntry:
    vertex: int
    ticker: str
    degree: int
    sector: Optional[str] = None

    def as_dict(self) -> dict:
        entry = {"vertex": self.vertex, "ticker": self.ticker, "degree": self.degree}
        if self.sector is not None:
            entry["sector"] = self.sector
        return entry


@dataclass(frozen=True)
class HubRanking:
    entries: tuple

    @property
    def top(self) -> Optional[HubEntry]:
        return self.entries[0] if self.entries else None

    def sector_tally(self) -> dict[str, int]:
        tally = Counter(e.sector for e in self.entries if e.sector is not None)
        return dict(sorted(tally.items(), key=lambda kv: (-kv[1], kv[0])))


def kruskal_mst(D: DistMatrix) -> SpanningTree:
    """
    Kruskal over the complete graph. Candidates are sorted by (weight, i, j)
    so degenerate inputs always yield the same tree.
    """
    n = D.n
    if n < 2:
        raise TooFewSamples(n)
    candidates = sorted(
        (float(D.D[i, j]), i, j) for i in range(n) for j in range(i + 1, n)
    )
    sets = UnionFind(n)
    edges = []
    for w, i, j in candidates:
        if sets.union(i, j):
            edges.append((i, j, w))
            if len(edges) == n - 1:
                break
    return SpanningTree(D.tickers, tuple(edges), D.meta)


def average_tree_length(T: SpanningTree) -> float:
    """L = (sum of the N-1 tree edge distances) / N."""
    return T.total_weight / T.n


def mean_pairwise_path_length(T: SpanningTree) -> float:
    """Mean weighted tree path length over all pairs i < j."""
    lengths = dict(nx.all_pairs_dijkstra_path_length(T.to_graph()))
    total = sum(lengths[i][j] for i in range(T.n) for j in range(i + 1, T.n))
    return total / (T.n * (T.n - 1) / 2)


def mst_degree_distribution(T: SpanningTree) -> DegreeDistribution:
    return degree_distribution_from(T.degrees(), scope="tree")


def hub_ranking(T: SpanningTree, top: int) -> HubRanking:
    """The `top` highest-degree vertices; ties go to the lower id."""
    if not 1 <= top <= T.n:
        raise TopOutOfRange(top, T.n)
    degrees = T.degrees()
    order = sorted(range(T.n), key=lambda v: (-degrees[v], v))[:top]
    meta = T.meta or {}
    return HubRanking(tuple(
        HubEntry(v, T.tickers[v], degrees[v], meta.get(T.tickers[v])) for v in order
    ))
