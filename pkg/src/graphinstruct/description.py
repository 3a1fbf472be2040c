"""Render a target node's selection into compact description text.

The layout follows the usual prompt blocks: the target's own attributes,
ego-graph nodes grouped by node type, a flat one-hop neighbor list, and
numbered walks rendered as ``name RELATION name`` chains. Rendering is
deterministic byte-for-byte, and section token counts are additive so the
selection phase can account for every token it spends.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Optional

from .errors import MissingAttributeError
from .tokens import TokenizerConfig, DEFAULT_TOKENIZER, count_tokens

SECTION_ATTRIBUTES = "attributes"
SECTION_EGO = "ego_nodes"
SECTION_ONE_HOP = "one_hop"
SECTION_WALKS = "walks"


@dataclass(frozen=True)
class DescriptionTemplate:
    """Literal headers and per-entry formats for one description layout."""

    name: str = "default"
    preamble: str = "The compact graph description of this {node_type} is listed as follows:"
    attribute_fields: Optional[tuple] = None  # None: all node attributes
    attribute_format: str = "{field}: {value}."
    ego_header: str = "Ego graph nodes:"
    one_hop_header: str = "One-hop neighbors:"
    walks_header: str = "Random walks:"
    display_attribute: Optional[str] = None  # None: first attribute

    def __post_init__(self):
        if self.attribute_fields is not None:
            object.__setattr__(self, "attribute_fields", tuple(self.attribute_fields))

    def without_attribute(self, field: str, graph_fields) -> "DescriptionTemplate":
        """Copy of the template that hides one attribute of the target."""
        fields = self.attribute_fields if self.attribute_fields is not None else tuple(graph_fields)
        return replace(self, name=f"{self.name}-no-{field}",
                       attribute_fields=tuple(f for f in fields if f != field))

    @classmethod
    def from_file(cls, path) -> "DescriptionTemplate":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(**data)

    def to_file(self, path):
        data = {
            "name": self.name,
            "preamble": self.preamble,
            "attribute_fields": list(self.attribute_fields) if self.attribute_fields else None,
            "attribute_format": self.attribute_format,
            "ego_header": self.ego_header,
            "one_hop_header": self.one_hop_header,
            "walks_header": self.walks_header,
            "display_attribute": self.display_attribute,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, ensure_ascii=False)


DEFAULT_TEMPLATE = DescriptionTemplate()


@dataclass(frozen=True)
class CompactDescription:
    target: str
    text: str
    token_count: int
    sections: dict


def _capitalize(field: str) -> str:
    return field[:1].upper() + field[1:]


class Renderer:
    """Shared section rendering for descriptions and cost accounting."""

    def __init__(self, graph, target, template: DescriptionTemplate = DEFAULT_TEMPLATE,
                 tokenizer: TokenizerConfig = DEFAULT_TOKENIZER):
        self.graph = graph
        self.target = target
        self.template = template
        self.tokenizer = tokenizer

    def display(self, node_id: str) -> str:
        node = self.graph.node(node_id)
        field = self.template.display_attribute
        if field is None:
            for value in node.attributes.values():
                return value
            return node.id
        if field not in node.attributes:
            raise MissingAttributeError(node_id, field)
        return node.attributes[field]

    def attributes_section(self) -> str:
        node = self.graph.node(self.target)
        fields = self.template.attribute_fields
        if fields is None:
            fields = list(node.attributes)
        parts = [self.template.preamble.format(node_type=node.node_type)]
        for field in fields:
            if field not in node.attributes:
                raise MissingAttributeError(self.target, field)
            parts.append(self.template.attribute_format.format(
                field=_capitalize(field), value=node.attributes[field]))
        return " ".join(parts)

    def ego_section(self, members) -> str:
        groups = {}  # node_type -> names, first-appearance order
        for nid, _rel in members:
            ntype = self.graph.node(nid).node_type
            groups.setdefault(ntype, []).append(self.display(nid))
        body = "; ".join(f"{i}. {ntype}: [{', '.join(names)}]"
                         for i, (ntype, names) in enumerate(groups.items(), start=1))
        return f"{self.template.ego_header} {{{body}}}"

    def one_hop_section(self, members) -> str:
        body = ", ".join(self.display(nid) for nid, _rel in members)
        return f"{self.template.one_hop_header} {{{body}}}"

    def walks_section(self, walks) -> str:
        fragments = []
        for i, walk in enumerate(walks, start=1):
            steps = walk.steps if hasattr(walk, "steps") else walk
            chain = self.display(self.target)
            for rel, nid in steps:
                chain += f" {self.graph.relation_name(rel)} {self.display(nid)}"
            fragments.append(f"{i}. {chain}.")
        return f"{self.template.walks_header} {{{' '.join(fragments)}}}"


class TemplateCoster(Renderer):
    """Token costs measured on the exact text the template will emit.

    Sections are newline-joined, so the description's total token count is
    the sum of the per-section counts; the deltas reported here are exact.
    """

    def _count(self, text: str) -> int:
        return count_tokens(text, self.tokenizer)

    def boilerplate(self) -> int:
        return (self._count(self.attributes_section())
                + self._count(self.ego_section([]))
                + self._count(self.one_hop_section([]))
                + self._count(self.walks_section([])))

    def neighbors_cost(self, members) -> int:
        return (self._count(self.ego_section(members)) - self._count(self.ego_section([]))
                + self._count(self.one_hop_section(members))
                - self._count(self.one_hop_section([])))

    def walks_cost(self, walks) -> int:
        return self._count(self.walks_section(walks)) - self._count(self.walks_section([]))


def render_description(graph, target, neighbors, walks,
                       template: DescriptionTemplate = DEFAULT_TEMPLATE,
                       tokenizer: TokenizerConfig = DEFAULT_TOKENIZER) -> CompactDescription:
    """Render the selection for ``target`` into a compact description."""
    r = Renderer(graph, target, template, tokenizer)
    members = neighbors.members if hasattr(neighbors, "members") else list(neighbors)
    sections = {
        SECTION_ATTRIBUTES: r.attributes_section(),
        SECTION_EGO: r.ego_section(members),
        SECTION_ONE_HOP: r.one_hop_section(members),
        SECTION_WALKS: r.walks_section(walks),
    }
    text = "\n".join(sections.values())
    return CompactDescription(target=target, text=text,
                              token_count=count_tokens(text, tokenizer),
                              sections=sections)


def boilerplate_cost(template: DescriptionTemplate, target, graph,
                     tokenizer: TokenizerConfig = DEFAULT_TOKENIZER) -> int:
    """Token cost of rendering ``target`` with an empty selection."""
    return TemplateCoster(graph, target, template, tokenizer).boilerplate()


def _brace_body(text: str, header: str) -> str:
    start = text.index(header) + len(header)
    open_brace = text.index("{", start)
    close_brace = text.index("}", open_brace)
    return text[open_brace + 1:close_brace]


def parse_description(text: str, graph, template: DescriptionTemplate = DEFAULT_TEMPLATE):
    """Recover neighbor ids and walk step sequences from rendered text.

    Relies on display values being unique and free of the template's
    delimiters; intended for round-trip checks and debugging.
    """
    import re

    display_to_id = {}
    field = template.display_attribute
    for nid in graph.node_ids():
        node = graph.node(nid)
        if field is None:
            values = list(node.attributes.values())
            display = values[0] if values else nid
        else:
            display = node.attributes.get(field)
        if display is not None:
            display_to_id[display] = nid

    one_hop_body = _brace_body(text, template.one_hop_header)
    neighbor_ids = [display_to_id[name] for name in one_hop_body.split(", ") if name]

    walks_body = _brace_body(text, template.walks_header)
    walks = []
    relation_names = sorted(graph.relations, key=len, reverse=True)
    rel_pattern = "|".join(re.escape(r) for r in relation_names)
    for fragment in re.split(r"(?:^|\. )\d+\. ", walks_body):
        fragment = fragment.strip().rstrip(".")
        if not fragment:
            continue
        pieces = re.split(f" ({rel_pattern}) ", fragment)
        steps = []
        for rel, name in zip(pieces[1::2], pieces[2::2]):
            steps.append((rel, display_to_id[name]))
        walks.append(steps)
    return neighbor_ids, walks
