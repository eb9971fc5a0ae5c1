# tests/test_exporters.py

import json
import re

import networkx as nx
import pytest

from marketnet.corrnet import CorrMatrix, distance_matrix
from marketnet.errors import UnknownFormat
from marketnet.exporters import (
    EXPORTERS, GraphArtifact, file_name, graph_to_dot, graph_to_edgelist, render,
    supported_formats, write_artifact,
)
from marketnet.hier import parse_newick, upgma
from marketnet.topo import build_threshold_network
from marketnet.tree import kruskal_mst

DOT_NODE = re.compile(r'^  "([^"]+)" \[label="[^"]*"(?:, sector="([^"]*)")?\];$', re.M)
DOT_EDGE = re.compile(r'^  "([^"]+)" -- "([^"]+)"(?: \[weight=([^\]]+)\])?;$', re.M)


@pytest.fixture
def corr(random_corr):
    C = random_corr(9)
    meta = {t: ("Tech" if i % 2 else "Energy") for i, t in enumerate(C.tickers)}
    return CorrMatrix(C.tickers, C.C, meta)


def test_mst_dot_has_n_nodes_and_n_minus_one_edges(corr):
    tree = kruskal_mst(distance_matrix(corr))
    text = graph_to_dot(GraphArtifact.from_tree(tree, "calm_mst"))
    assert text.startswith('graph "calm_mst" {')
    nodes = DOT_NODE.findall(text)
    edges = DOT_EDGE.findall(text)
    assert len(nodes) == 9
    assert len(edges) == 8
    assert {n for n, _ in nodes} == set(corr.tickers)
    assert all(sector in ("Tech", "Energy") for _, sector in nodes)

    by_name = {(tree.tickers[i], tree.tickers[j]): w for i, j, w in tree.edges}
    for a, b, w in edges:
        assert float(w) == by_name[(a, b)]


def test_graphml_reparses_with_sector_attributes(corr, tmp_path):
    tree = kruskal_mst(distance_matrix(corr))
    path = write_artifact(GraphArtifact.from_tree(tree), "graphml", tmp_path / "mst.graphml")
    graph = nx.read_graphml(path)
    assert graph.number_of_nodes() == 9
    assert graph.number_of_edges() == 8
    assert graph.nodes[corr.tickers[0]]["sector"] == "Energy"
    weights = sorted(d["weight"] for _, _, d in graph.edges(data=True))
    assert weights == pytest.approx(sorted(w for _, _, w in tree.edges))


def test_complete_threshold_graph_edgelist(corr):
    G = build_threshold_network(corr, -1.0)
    text = graph_to_edgelist(GraphArtifact.from_threshold(G))
    lines = text.splitlines()
    assert len(lines) == 9 * 8 // 2
    assert all(len(line.split("\t")) == 2 for line in lines)


def test_weighted_edgelist_has_three_columns(corr):
    tree = kruskal_mst(distance_matrix(corr))
    lines = render(GraphArtifact.from_tree(tree), "edgelist").splitlines()
    assert all(len(line.split("\t")) == 3 for line in lines)


def test_dendrogram_newick_reparses_to_same_heights(corr):
    T = upgma(distance_matrix(corr))
    back = parse_newick(render(T, "newick"))
    assert back.heights == pytest.approx(T.heights, abs=1e-12)


def test_json_exports(corr):
    tree = kruskal_mst(distance_matrix(corr))
    graph = json.loads(render(GraphArtifact.from_tree(tree), "json"))
    assert len(graph["nodes"]) == 9
    assert len(graph["edges"]) == 8
    assert graph["nodes"][1]["sector"] == "Tech"

    dendrogram = json.loads(render(upgma(distance_matrix(corr)), "json"))
    assert len(dendrogram["merges"]) == 8


def test_format_registry(corr):
    T = upgma(distance_matrix(corr))
    graph = GraphArtifact.from_threshold(build_threshold_network(corr, 0.5))
    assert supported_formats(T) == ["json", "newick"]
    assert supported_formats(graph) == ["dot", "edgelist", "graphml", "json"]
    assert file_name("mst", "edgelist") == "mst.tsv"
    assert file_name("dendrogram", "newick") == "dendrogram.nwk"
    assert set(EXPORTERS) == {"dot", "graphml", "edgelist", "newick", "json"}
    with pytest.raises(UnknownFormat):
        render(graph, "gexf")
    with pytest.raises(UnknownFormat):
        render(graph, "newick")


def test_networkx_view_uses_ticker_labels(corr):
    G = GraphArtifact.from_threshold(build_threshold_network(corr, -1.0)).to_networkx()
    assert set(G.nodes) == set(corr.tickers)
    assert G.nodes[corr.tickers[3]]["label"] == corr.tickers[3]
