import json
import random

import pytest

from graphinstruct.errors import GraphLoadError, UnknownNodeError
from graphinstruct.graph import SchemaConfig, load_graph

from conftest import CITEWORLD_SCHEMA, make_graph, random_graph, read_jsonl_rows


def test_citeworld_counts_match_line_counts(citeworld, citeworld_paths):
    nodes_path, edges_path = citeworld_paths
    # independent oracle: count raw lines in the fixture files
    with open(nodes_path) as fh:
        node_lines = sum(1 for line in fh if line.strip())
    with open(edges_path) as fh:
        edge_lines = sum(1 for line in fh if line.strip())
    assert (node_lines, edge_lines) == (50, 120)
    assert citeworld.num_nodes() == node_lines
    assert citeworld.num_edges() == edge_lines


def test_isolated_nodes_from_empty_edges_file(tmp_path):
    nodes = tmp_path / "nodes.jsonl"
    edges = tmp_path / "edges.jsonl"
    nodes.write_text("\n".join(json.dumps({"id": i, "title": f"t{i}"})
                               for i in "abc") + "\n")
    edges.write_text("")
    g = load_graph(nodes, edges, SchemaConfig(attribute_fields=("title",)))
    assert g.num_nodes() == 3
    assert g.num_edges() == 0
    assert all(g.degree(n) == 0 for n in g.node_ids())


def test_one_hop_star_graph():
    g = make_graph({n: {"title": n} for n in "abcd"},
                   [("a", "b", "r"), ("a", "c", "r"), ("a", "d", "r")])
    assert g.one_hop_neighbors("a") == (("b", "r"), ("c", "r"), ("d", "r"))
    assert g.degree("a") == 3
    assert g.one_hop_neighbors("b") == (("a", "r"),)


def test_n07_neighbors_match_edges_file_scan(citeworld, citeworld_paths):
    # brute-force oracle over the raw edges file
    expected = set()
    for row in read_jsonl_rows(citeworld_paths[1]):
        if row["src"] == "n07":
            expected.add(row["dst"])
        if row["dst"] == "n07":
            expected.add(row["src"])
    got = [nbr for nbr, _ in citeworld.one_hop_neighbors("n07")]
    assert got == sorted(expected)
    assert citeworld.degree("n07") == 4


def test_degree_equals_neighbor_count_everywhere(citeworld):
    for nid in citeworld.node_ids():
        assert citeworld.degree(nid) == len(citeworld.one_hop_neighbors(nid))


def test_degree_sum_equals_twice_edge_count():
    rng = random.Random(11)
    for _ in range(20):
        g = random_graph(rng)
        assert sum(g.degree(n) for n in g.node_ids()) == 2 * g.num_edges()


def test_reload_is_structurally_identical(citeworld, citeworld_paths):
    other = load_graph(*citeworld_paths, CITEWORLD_SCHEMA, dataset_name="citeworld")

    def serialize(g):
        return json.dumps({
            "nodes": {n: [g.node(n).node_type, dict(g.node(n).attributes),
                          g.node(n).label] for n in g.node_ids()},
            "adjacency": {n: list(g.one_hop_neighbors(n)) for n in g.node_ids()},
        }, sort_keys=True)

    assert serialize(citeworld) == serialize(other)


def test_adjacency_sorted(citeworld):
    for nid in citeworld.node_ids():
        nbrs = citeworld.one_hop_neighbors(nid)
        assert list(nbrs) == sorted(nbrs)


def test_malformed_record_reports_line(tmp_path):
    nodes = tmp_path / "nodes.jsonl"
    edges = tmp_path / "edges.jsonl"
    nodes.write_text('{"id": "a", "title": "t"}\nnot json\n')
    edges.write_text("")
    with pytest.raises(GraphLoadError, match=r"nodes\.jsonl:2"):
        load_graph(nodes, edges, SchemaConfig(attribute_fields=("title",)))


def test_dangling_edge_rejected(tmp_path):
    nodes = tmp_path / "nodes.jsonl"
    edges = tmp_path / "edges.jsonl"
    nodes.write_text('{"id": "a", "title": "t"}\n')
    edges.write_text('{"src": "a", "dst": "ghost", "relation": "r"}\n')
    with pytest.raises(GraphLoadError, match="ghost"):
        load_graph(nodes, edges, SchemaConfig(attribute_fields=("title",)))


def test_duplicate_node_id_rejected(tmp_path):
    nodes = tmp_path / "nodes.jsonl"
    edges = tmp_path / "edges.jsonl"
    nodes.write_text('{"id": "a", "title": "t"}\n{"id": "a", "title": "u"}\n')
    edges.write_text("")
    with pytest.raises(GraphLoadError, match="duplicate"):
        load_graph(nodes, edges, SchemaConfig(attribute_fields=("title",)))


def test_unknown_node_queries(citeworld):
    with pytest.raises(UnknownNodeError, match="nope"):
        citeworld.one_hop_neighbors("nope")
    with pytest.raises(UnknownNodeError):
        citeworld.degree("nope")
