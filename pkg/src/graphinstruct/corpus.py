"""Train/validation/test splitting and JSONL corpus emission."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .apportion import largest_remainder
from .instruct import InstructionRecord


@dataclass(frozen=True)
class SplitSpec:
    ratios: tuple  # (train, val, test)
    seed: int = 0
    unit: str = "record"  # "node", "graph", or "record"

    def __post_init__(self):
        object.__setattr__(self, "ratios", tuple(self.ratios))
        if len(self.ratios) != 3 or any(r < 0 for r in self.ratios):
            raise ValueError("ratios must be three non-negative integers")
        if sum(self.ratios) <= 0:
            raise ValueError("ratios must sum to a positive value")
        if self.unit not in ("node", "graph", "record"):
            raise ValueError(f"unknown split unit: {self.unit!r}")


def split(items, spec: SplitSpec):
    """Seeded shuffle then contiguous proportional cut into three parts.

    Partition sizes come from largest-remainder apportionment of the
    ratios, so each is within one of the exact proportion and the three
    parts are disjoint and cover the input.
    """
    items = list(items)
    if not items:
        raise ValueError("cannot split an empty item list")
    random.Random(spec.seed).shuffle(items)
    sizes = largest_remainder(spec.ratios, len(items))
    train = items[:sizes[0]]
    val = items[sizes[0]:sizes[0] + sizes[1]]
    test = items[sizes[0] + sizes[1]:]
    return train, val, test


def record_to_dict(record: InstructionRecord) -> dict:
    data = {
        "task": record.task,
        "dataset": record.dataset,
        "kind": record.kind,
        "instruction": record.instruction,
        "input": record.input,
        "output": record.output,
    }
    if record.record_id is not None:
        data["id"] = record.record_id
    return data


def record_from_dict(data: dict) -> InstructionRecord:
    return InstructionRecord(task=data["task"], dataset=data["dataset"],
                             kind=data["kind"], instruction=data["instruction"],
                             input=data["input"], output=data["output"],
                             record_id=data.get("id"))


def emit_jsonl(records, path) -> int:
    """Write records as UTF-8 newline-delimited JSON; returns the count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_dict(record), ensure_ascii=False) + "\n")
            n += 1
    return n


def read_jsonl(path) -> list:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(record_from_dict(json.loads(line)))
    return records
