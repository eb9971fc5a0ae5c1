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

# marketnet/exporters.py

"""
Serializers for graphs and dendrograms.

Graphs (threshold networks and spanning trees) go to DOT, GraphML, edge lists
or JSON; dendrograms go to Newick or JSON. Nodes are labelled by ticker and
carry the sector as an attribute when one is known.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Optional

import networkx as nx

from .errors import UnknownFormat
from .hier import MergeTree, to_newick
from .topo import ThresholdGraph
from .tree import SpanningTree


@dataclass(frozen=True)
class GraphArtifact:
    """A labelled undirected graph; weight is None for unweighted edges."""
    name: str
    tickers: tuple
    edges: tuple
    meta: Optional[Mapping[str, str]] = field(default=None, compare=False)

    @classmethod
    def from_threshold(cls, G: ThresholdGraph, name: str = "threshold") -> "GraphArtifact":
        return cls(name, G.tickers, tuple((i, j, None) for i, j in G.edges), G.meta)

    @classmethod
    def from_tree(cls, T: SpanningTree, name: str = "mst") -> "GraphArtifact":
        return cls(name, T.tickers, tuple(T.edges), T.meta)

    @property
    def weighted(self) -> bool:
        return any(w is not None for _, _, w in self.edges)

    def sector(self, i: int) -> Optional[str]:
        return (self.meta or {}).get(self.tickers[i])

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph(name=self.name)
        for i, t in enumerate(self.tickers):
            attrs = {"label": t}
            if self.sector(i) is not None:
                attrs["sector"] = self.sector(i)
            graph.add_node(t, **attrs)
        for i, j, w in self.edges:
            if w is None:
                graph.add_edge(self.tickers[i], self.tickers[j])
            else:
                graph.add_edge(self.tickers[i], self.tickers[j], weight=float(w))
        return graph


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: GraphArtifact) -> str:
    lines = [f"graph {_dot_id(g.name)} {{"]
    for i, t in enumerate(g.tickers):
        attrs = [f"label={_dot_id(t)}"]
        if g.sector(i) is not None:
            attrs.append(f"sector={_dot_id(g.sector(i))}")
        lines.append(f"  {_dot_id(t)} [{', '.join(attrs)}];")
    for i, j, w in g.edges:
        edge = f"  {_dot_id(g.tickers[i])} -- {_dot_id(g.tickers[j])}"
        lines.append(edge + (f" [weight={w!r}];" if w is not None else ";"))
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_graphml(g: GraphArtifact) -> str:
    return "\n".join(nx.generate_graphml(g.to_networkx())) + "\n"


def graph_to_edgelist(g: GraphArtifact) -> str:
    """Tab-separated ticker pairs, plus the weight column for weighted graphs."""
    lines = []
    for i, j, w in g.edges:
        row = [g.tickers[i], g.tickers[j]] + ([repr(float(w))] if w is not None else [])
        lines.append("\t".join(row))
    return "\n".join(lines) + ("\n" if lines else "")


def graph_to_json(g: GraphArtifact) -> str:
    payload = {
        "name": g.name,
        "nodes": [
            {"id": i, "label": t, **({"sector": g.sector(i)} if g.sector(i) is not None else {})}
            for i, t in enumerate(g.tickers)
        ],
        "edges": [[i, j] + ([w] if w is not None else []) for i, j, w in g.edges],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def tree_to_newick(t: MergeTree) -> str:
    return to_newick(t) + "\n"


def tree_to_json(t: MergeTree) -> str:
    payload = {"leaves": list(t.tickers), "merges": [m.as_list() for m in t.merges]}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class Exporter:
    extension: str
    writers: dict  # artifact class -> function returning text


EXPORTERS: dict[str, Exporter] = {
    "dot": Exporter("dot", {GraphArtifact: graph_to_dot}),
    "graphml": Exporter("graphml", {GraphArtifact: graph_to_graphml}),
    "edgelist": Exporter("tsv", {GraphArtifact: graph_to_edgelist}),
    "newick": Exporter("nwk", {MergeTree: tree_to_newick}),
    "json": Exporter("json", {GraphArtifact: graph_to_json, MergeTree: tree_to_json}),
}


def supported_formats(artifact) -> list[str]:
    return sorted(fmt for fmt, e in EXPORTERS.items() if type(artifact) in e.writers)


def render(artifact, fmt: str) -> str:
    """Serializes a GraphArtifact or MergeTree in the named format."""
    exporter = EXPORTERS.get(fmt)
    if exporter is None:
        raise UnknownFormat(fmt, EXPORTERS)
    writer: Optional[Callable] = exporter.writers.get(type(artifact))
    if writer is None:
        raise UnknownFormat(fmt, supported_formats(artifact))
    return writer(artifact)


def write_artifact(artifact, fmt: str, path: Path) -> Path:
    text = render(artifact, fmt)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def file_name(stem: str, fmt: str) -> str:
    return f"{stem}.{EXPORTERS[fmt].extension}"
