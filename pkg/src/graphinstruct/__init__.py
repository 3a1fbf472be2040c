"""graphinstruct: compile attributed graphs into budget-constrained
compact descriptions and instruction-tuning corpora, with a metric suite
for scoring downstream predictions."""

from .energy import NodeEnergy, compute_energies, node_energy
from .graph import AttributedGraph, Edge, Node, SchemaConfig, load_graph
from .selection import (KeyNeighborSet, SelectionConfig, Walk,
                        allocate_multi_node_budget, expand_walks,
                        select_for_target, select_neighbors)
from .tokens import TokenizerConfig, count_tokens

__version__ = "0.1.0"

__all__ = [
    "AttributedGraph", "Edge", "Node", "SchemaConfig", "load_graph",
    "NodeEnergy", "compute_energies", "node_energy",
    "SelectionConfig", "KeyNeighborSet", "Walk",
    "select_neighbors", "expand_walks", "select_for_target",
    "allocate_multi_node_budget",
    "TokenizerConfig", "count_tokens",
    "__version__",
]
