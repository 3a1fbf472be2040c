"""Budgeted neighbor and walk selection around a target node.

Neighbors and walk hops are admitted only when their energy clears the
target's energy, and only while their rendered token cost fits the
budget. A shared budget can be split across several target nodes with a
softmax over their energies.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .apportion import largest_remainder
from .errors import BudgetTooSmallError, UnknownNodeError
from .tokens import TokenizerConfig, DEFAULT_TOKENIZER, count_tokens


@dataclass(frozen=True)
class SelectionConfig:
    neighbor_budget_fraction: float = 0.5
    max_walk_length: int = 4
    max_walks: int = 8
    softmax_temperature: float = 1.0
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.neighbor_budget_fraction <= 1.0:
            raise ValueError("neighbor_budget_fraction must be in [0, 1]")
        if self.softmax_temperature <= 0:
            raise ValueError("softmax_temperature must be positive")
        if self.max_walk_length < 1 or self.max_walks < 1:
            raise ValueError("walk limits must be positive")


@dataclass(frozen=True)
class KeyNeighborSet:
    target: str
    members: tuple  # ordered (node-id, relation-id) pairs
    token_cost: int


@dataclass(frozen=True)
class Walk:
    target: str
    steps: tuple  # ordered (relation-id, node-id) pairs
    token_cost: int


class SimpleCoster:
    """Token costs from display attributes alone, with zero boilerplate.

    Used when selection runs without a description template; the template
    coster in the description module replaces it in the full pipeline.
    """

    def __init__(self, graph, target, tokenizer: TokenizerConfig = DEFAULT_TOKENIZER):
        self.graph = graph
        self.target = target
        self.tokenizer = tokenizer

    def _display(self, node_id):
        node = self.graph.node(node_id)
        for value in node.attributes.values():
            return value
        return node.id

    def boilerplate(self) -> int:
        return 0

    def neighbors_cost(self, members) -> int:
        return sum(count_tokens(self._display(nid), self.tokenizer) for nid, _ in members)

    def walks_cost(self, walks) -> int:
        total = 0
        for steps in walks:
            total += count_tokens(self._display(self.target), self.tokenizer)
            for rel, nid in steps:
                total += count_tokens(self.graph.relation_name(rel), self.tokenizer)
                total += count_tokens(self._display(nid), self.tokenizer)
        return total


def walk_rng(seed: int, target: str) -> random.Random:
    """Per-target RNG stream so parallel schedules cannot reorder results."""
    return random.Random(f"{seed}:walks:{target}")


def select_neighbors(graph, energies, target, neighbor_budget, coster=None) -> KeyNeighborSet:
    """Greedy key-neighbor pick: descending energy, ascending id tie-break.

    Candidates must clear the target's energy and individually fit the
    budget; admission proceeds in order while the cumulative rendered cost
    stays within ``neighbor_budget`` and stops at the first misfit, so the
    result is a feasible prefix of the candidate ranking.
    """
    if target not in graph:
        raise UnknownNodeError(target)
    if coster is None:
        coster = SimpleCoster(graph, target)
    h_target = energies[target].energy

    seen = set()
    candidates = []
    for nbr, rel in graph.one_hop_neighbors(target):
        if nbr in seen:
            continue
        seen.add(nbr)
        if energies[nbr].energy >= h_target:
            candidates.append((nbr, rel))
    candidates.sort(key=lambda m: (-energies[m[0]].energy, m[0]))

    members = []
    cost = 0
    for cand in candidates:
        if energies[cand[0]].token_count > neighbor_budget:
            break
        tentative = coster.neighbors_cost(members + [cand])
        if tentative > neighbor_budget:
            break
        members.append(cand)
        cost = tentative
    return KeyNeighborSet(target=target, members=tuple(members), token_cost=cost)


def expand_walks(graph, energies, target, walk_budget, cfg: SelectionConfig,
                 coster=None, rng=None) -> list:
    """Grow seeded random walks from ``target`` under the walk budget.

    Each hop is drawn uniformly from the current node's unvisited
    neighbors whose energy clears the target's. A walk ends when no hop is
    eligible, the length cap is hit, or the next hop would overrun the
    budget; generation stops at ``max_walks`` or when a fresh walk cannot
    take even one hop.
    """
    if target not in graph:
        raise UnknownNodeError(target)
    if coster is None:
        coster = SimpleCoster(graph, target)
    if rng is None:
        rng = walk_rng(cfg.rng_seed, target)
    h_target = energies[target].energy

    finished = []
    walks = []
    for _ in range(cfg.max_walks):
        steps = []
        visited = {target}
        current = target
        while len(steps) < cfg.max_walk_length:
            eligible = [(nbr, rel) for nbr, rel in graph.one_hop_neighbors(current)
                        if nbr not in visited and energies[nbr].energy >= h_target]
            if not eligible:
                break
            nbr, rel = rng.choice(eligible)
            tentative = steps + [(rel, nbr)]
            if coster.walks_cost(walks + [tentative]) > walk_budget:
                break
            steps = tentative
            visited.add(nbr)
            current = nbr
        if not steps:
            break
        walks.append(steps)
        finished.append(Walk(target=target, steps=tuple(steps),
                             token_cost=coster.walks_cost([steps])))
    return finished


def allocate_multi_node_budget(energies, total_budget: int, temperature: float = 1.0) -> list:
    """Split a token budget over nodes proportional to softmax(H / tau).

    Budgets are integerized with largest-remainder rounding so they sum to
    ``total_budget`` exactly; remainder ties go to the smaller node id.
    """
    if not energies:
        raise ValueError("energies must be non-empty")
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    scaled = [e.energy / temperature for e in energies]
    peak = max(scaled)
    exps = [math.exp(x - peak) for x in scaled]
    return largest_remainder(exps, total_budget, tie_keys=[e.node for e in energies])


def select_for_target(graph, energies, target, token_limit: int,
                      cfg: SelectionConfig, coster) -> tuple:
    """Full per-target selection under one token limit.

    The template boilerplate is deducted up front; a fraction of what is
    left goes to neighbors and walks inherit whatever the neighbor phase
    did not spend.
    """
    boilerplate = coster.boilerplate()
    if token_limit < boilerplate:
        raise BudgetTooSmallError(token_limit, boilerplate, target)
    effective = token_limit - boilerplate
    neighbor_budget = math.floor(cfg.neighbor_budget_fraction * effective)
    neighbors = select_neighbors(graph, energies, target, neighbor_budget, coster)
    walk_budget = effective - neighbors.token_cost
    walks = expand_walks(graph, energies, target, walk_budget, cfg, coster)
    return neighbors, walks
