"""Dynamic package allocation across (task, dataset) pairs.

Task complexity is the average output token count of a task's records;
dataset complexity is the total node energy of the dataset's graph. Each
signal is normalized over the active pairs, multiplied into a weight, and
the package total is apportioned by largest remainder on top of a
per-pair floor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .apportion import largest_remainder
from .errors import AllocationError
from .tokens import TokenizerConfig, DEFAULT_TOKENIZER, count_tokens


@dataclass(frozen=True)
class ComplexityProfile:
    task_complexity: dict  # (task, dataset) -> average output tokens
    dataset_complexity: dict  # dataset -> total node energy


@dataclass(frozen=True)
class AllocationPlan:
    counts: dict  # (task, dataset) -> package count
    total: int
    uniform_fallback: bool = False


def task_complexity(records, tokenizer: TokenizerConfig = DEFAULT_TOKENIZER) -> float:
    """Mean output token count over the records of one (task, dataset)."""
    if not records:
        raise ValueError("task_complexity needs a non-empty record list")
    return sum(count_tokens(r.output, tokenizer) for r in records) / len(records)


def dataset_complexity(energies: dict) -> int:
    """Total node energy of a dataset's graph."""
    return sum(e.energy for e in energies.values())


def _normalized(values):
    total = sum(values)
    if total == 0:
        return [0.0] * len(values)
    return [v / total for v in values]


def allocation_plan(profile: ComplexityProfile, active_pairs, total_packages: int,
                    min_packages: int = 1) -> AllocationPlan:
    """Apportion ``total_packages`` over the active (task, dataset) pairs.

    Weight per pair is the product of the normalized complexity signals;
    every pair is guaranteed ``min_packages`` and the remainder follows
    the weights with lexicographic tie-breaking. All-zero weights fall
    back to a uniform split, flagged on the plan.
    """
    pairs = sorted(active_pairs)
    if not pairs:
        raise AllocationError("no active (task, dataset) pairs")
    if total_packages < len(pairs) * min_packages:
        raise AllocationError(
            f"total_packages={total_packages} cannot cover "
            f"{len(pairs)} pairs at min_packages={min_packages}")

    task_vals = _normalized([profile.task_complexity[p] for p in pairs])
    data_vals = _normalized([profile.dataset_complexity[p[1]] for p in pairs])
    weights = [t * d for t, d in zip(task_vals, data_vals)]

    uniform = sum(weights) == 0
    if uniform:
        weights = [1.0] * len(pairs)

    remaining = total_packages - len(pairs) * min_packages
    extra = largest_remainder(weights, remaining, tie_keys=pairs)
    counts = {p: min_packages + e for p, e in zip(pairs, extra)}
    return AllocationPlan(counts=counts, total=total_packages, uniform_fallback=uniform)
