import json
import os
import random
from types import MappingProxyType

import pytest

from graphinstruct.energy import compute_energies
from graphinstruct.graph import AttributedGraph, Edge, Node, SchemaConfig, load_graph

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
CITEWORLD = os.path.join(FIXTURES, "citeworld")

CITEWORLD_SCHEMA = SchemaConfig(
    id_field="id",
    attribute_fields=("title", "abstract"),
    label_field="label",
    type_field="type",
)


def make_graph(node_specs, edge_specs, relations=None):
    """Build an in-memory graph for tests.

    ``node_specs``: {id: attrs-dict} or {id: (node_type, attrs-dict, label)}.
    ``edge_specs``: (src, dst) or (src, dst, relation) tuples.
    """
    nodes = {}
    for nid, spec in node_specs.items():
        if isinstance(spec, dict):
            ntype, attrs, label = "NODE", spec, None
        else:
            ntype, attrs, label = spec
        nodes[nid] = Node(id=nid, node_type=ntype,
                          attributes=MappingProxyType(dict(attrs)), label=label)
    edges = []
    rel_table = dict(relations or {})
    for spec in edge_specs:
        src, dst = spec[0], spec[1]
        rel = spec[2] if len(spec) > 2 else "RELATED-TO"
        rel_table.setdefault(rel, rel)
        edges.append(Edge(src=src, dst=dst, relation=rel))
    return AttributedGraph(nodes, edges, rel_table)


def random_graph(rng: random.Random, max_nodes=50, max_attr_words=12):
    """Random attributed graph for property sweeps."""
    n = rng.randint(1, max_nodes)
    words = ["alpha", "beta", "gamma", "delta", "omega", "sigma", "theta", "kappa"]
    node_specs = {}
    for i in range(n):
        title = " ".join(rng.choice(words) for _ in range(rng.randint(1, max_attr_words)))
        node_specs[f"r{i:03d}"] = ("NODE", {"title": f"{title} x{i}"}, None)
    ids = list(node_specs)
    edge_specs = set()
    for _ in range(rng.randint(0, 3 * n)):
        a, b = rng.choice(ids), rng.choice(ids)
        if a != b:
            edge_specs.add((min(a, b), max(a, b)))
    return make_graph(node_specs, sorted(edge_specs))


def read_jsonl_rows(path):
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


@pytest.fixture(scope="session")
def citeworld():
    return load_graph(os.path.join(CITEWORLD, "nodes.jsonl"),
                      os.path.join(CITEWORLD, "edges.jsonl"),
                      CITEWORLD_SCHEMA, dataset_name="citeworld")


@pytest.fixture(scope="session")
def citeworld_energies(citeworld):
    return compute_energies(citeworld)


@pytest.fixture()
def citeworld_paths():
    return (os.path.join(CITEWORLD, "nodes.jsonl"),
            os.path.join(CITEWORLD, "edges.jsonl"))
