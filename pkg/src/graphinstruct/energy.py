"""Node energy: token count times a ceiled logarithm of the degree.

``energy = T * ceil(log_base(D + 1))``. The ceiling is evaluated exactly
with rational arithmetic so boundary cases (``D + 1`` an exact power of
the base) never flip on floating-point noise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .tokens import TokenizerConfig, DEFAULT_TOKENIZER, count_tokens

DEFAULT_LOG_BASE = math.e


@dataclass(frozen=True)
class NodeEnergy:
    node: str
    token_count: int
    degree: int
    energy: int


def _ceil_log(value: int, base: float) -> int:
    """Smallest integer k with base**k >= value, for value >= 1."""
    if value <= 1:
        return 0
    # Float estimate, then exact correction in rational arithmetic.
    k = max(0, math.ceil(math.log(value) / math.log(base)))
    b = Fraction(base)
    while b**k < value:
        k += 1
    while k > 0 and b ** (k - 1) >= value:
        k -= 1
    return k


def node_energy(token_count: int, degree: int, log_base: float = DEFAULT_LOG_BASE) -> int:
    """Energy score for a node with ``token_count`` tokens and ``degree`` edges."""
    if log_base <= 1:
        raise ValueError("log_base must be > 1")
    if token_count < 0 or degree < 0:
        raise ValueError("token_count and degree must be non-negative")
    return token_count * _ceil_log(degree + 1, log_base)


def compute_energies(graph, cfg: TokenizerConfig = DEFAULT_TOKENIZER,
                     log_base: float = DEFAULT_LOG_BASE) -> dict:
    """Energy for every node; token counts cover the node's attribute text."""
    energies = {}
    for nid in graph.node_ids():
        node = graph.node(nid)
        t = count_tokens(node.attribute_text(), cfg)
        d = graph.degree(nid)
        energies[nid] = NodeEnergy(node=nid, token_count=t, degree=d,
                                   energy=node_energy(t, d, log_base))
    return energies


def write_energies_jsonl(energies: dict, path) -> int:
    """Export energies as newline-delimited JSON; returns the record count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for nid in sorted(energies):
            e = energies[nid]
            fh.write(json.dumps({"node": e.node, "token_count": e.token_count,
                                 "degree": e.degree, "energy": e.energy},
                                ensure_ascii=False) + "\n")
            n += 1
    return n
