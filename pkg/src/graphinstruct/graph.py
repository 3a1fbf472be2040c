"""Attributed graph model and newline-delimited JSON loaders.

Nodes and edges arrive as one JSON object per line; a :class:`SchemaConfig`
maps record fields onto ids, attributes, labels, and relations. The loaded
graph is immutable and safe to share between workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterator, Optional

from .errors import GraphLoadError, UnknownNodeError


@dataclass(frozen=True)
class SchemaConfig:
    """Field mapping for node/edge record files."""

    id_field: str = "id"
    attribute_fields: tuple = ("title",)
    label_field: Optional[str] = None
    type_field: Optional[str] = None
    src_field: str = "src"
    dst_field: str = "dst"
    relation_field: str = "relation"
    directed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "attribute_fields", tuple(self.attribute_fields))
        if not self.id_field:
            raise ValueError("schema id_field must be non-empty")
        if not self.attribute_fields:
            raise ValueError("schema needs at least one attribute field")


@dataclass(frozen=True)
class Node:
    id: str
    node_type: str
    attributes: "MappingProxyType[str, str]"
    label: Optional[str] = None

    def attribute_text(self) -> str:
        """Schema-ordered attribute values joined by single spaces."""
        return " ".join(self.attributes.values())


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    relation: str
    directed: bool = False


class AttributedGraph:
    """Immutable multigraph with per-node text attributes.

    Adjacency lists are sorted ascending by neighbor id so iteration order
    is deterministic. Undirected edges are visible from both endpoints;
    directed edges from both endpoints as well (neighborhood queries are
    orientation-agnostic by default).
    """

    def __init__(self, nodes, edges, relations, dataset_name=""):
        self._nodes = dict(nodes)
        self._edges = tuple(edges)
        self._relations = dict(relations)
        self.dataset_name = dataset_name

        adjacency = {nid: [] for nid in self._nodes}
        for e in self._edges:
            if e.src not in self._nodes:
                raise GraphLoadError(f"edge references unknown node {e.src!r}")
            if e.dst not in self._nodes:
                raise GraphLoadError(f"edge references unknown node {e.dst!r}")
            adjacency[e.src].append((e.dst, e.relation))
            adjacency[e.dst].append((e.src, e.relation))
        self._adjacency = {nid: tuple(sorted(nbrs)) for nid, nbrs in adjacency.items()}

    @property
    def nodes(self):
        return self._nodes

    @property
    def edges(self):
        return self._edges

    @property
    def relations(self):
        return self._relations

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    def node_ids(self) -> Iterator[str]:
        return iter(self._nodes)

    def num_nodes(self) -> int:
        return len(self._nodes)

    def num_edges(self) -> int:
        return len(self._edges)

    def relation_name(self, relation_id: str) -> str:
        return self._relations.get(relation_id, relation_id)

    def one_hop_neighbors(self, node_id: str):
        """Sorted (neighbor-id, relation-id) pairs adjacent to ``node_id``."""
        if node_id not in self._nodes:
            raise UnknownNodeError(node_id)
        return self._adjacency[node_id]

    def degree(self, node_id: str) -> int:
        return len(self.one_hop_neighbors(node_id))

    def has_edge(self, a: str, b: str) -> bool:
        return any(nbr == b for nbr, _ in self.one_hop_neighbors(a))


def one_hop_neighbors(graph: AttributedGraph, node_id: str):
    return graph.one_hop_neighbors(node_id)


def degree(graph: AttributedGraph, node_id: str) -> int:
    return graph.degree(node_id)


def _iter_json_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise GraphLoadError(f"malformed JSON ({exc.msg})", path, lineno) from None
            if not isinstance(record, dict):
                raise GraphLoadError("record is not a JSON object", path, lineno)
            yield lineno, record


def load_graph(nodes_path, edges_path, schema: SchemaConfig, dataset_name="") -> AttributedGraph:
    """Load and validate a graph from newline-delimited JSON files.

    Raises :class:`GraphLoadError` with the offending line number on
    malformed records, duplicate node ids, or dangling edge endpoints.
    """
    nodes = {}
    for lineno, rec in _iter_json_lines(nodes_path):
        if schema.id_field not in rec:
            raise GraphLoadError(f"missing id field {schema.id_field!r}", nodes_path, lineno)
        nid = str(rec[schema.id_field])
        if not nid:
            raise GraphLoadError("empty node id", nodes_path, lineno)
        if nid in nodes:
            raise GraphLoadError(f"duplicate node id {nid!r}", nodes_path, lineno)
        attrs = {}
        for f in schema.attribute_fields:
            if f in rec and rec[f] is not None:
                attrs[f] = str(rec[f])
        label = None
        if schema.label_field and rec.get(schema.label_field) is not None:
            label = str(rec[schema.label_field])
        ntype = "NODE"
        if schema.type_field and rec.get(schema.type_field) is not None:
            ntype = str(rec[schema.type_field])
        nodes[nid] = Node(id=nid, node_type=ntype, attributes=MappingProxyType(attrs), label=label)

    edges = []
    relations = {}
    for lineno, rec in _iter_json_lines(edges_path):
        for f in (schema.src_field, schema.dst_field):
            if f not in rec:
                raise GraphLoadError(f"missing edge field {f!r}", edges_path, lineno)
        src = str(rec[schema.src_field])
        dst = str(rec[schema.dst_field])
        for endpoint in (src, dst):
            if endpoint not in nodes:
                raise GraphLoadError(f"dangling edge endpoint {endpoint!r}", edges_path, lineno)
        relation = str(rec.get(schema.relation_field, "RELATED-TO"))
        relations.setdefault(relation, relation)
        edges.append(Edge(src=src, dst=dst, relation=relation, directed=schema.directed))

    return AttributedGraph(nodes, edges, relations, dataset_name=dataset_name)
