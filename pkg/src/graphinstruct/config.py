"""Declarative pipeline configuration.

One YAML (or JSON) file drives every subcommand: dataset paths and
schemas, tokenizer and energy settings, selection budgets, task list,
package ratio, allocation totals, and the LLM client. The seed must be
explicit; nothing defaults to wall-clock randomness.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import random
from dataclasses import dataclass
from typing import Optional

import yaml

from .description import DescriptionTemplate, DEFAULT_TEMPLATE
from .errors import ConfigError
from .graph import SchemaConfig
from .instruct import LlmClientConfig, TASKS
from .selection import SelectionConfig
from .tokens import TokenizerConfig


@dataclass(frozen=True)
class DatasetConfig:
    name: str
    nodes_path: str
    edges_path: str
    schema: SchemaConfig
    split_ratios: tuple = (7, 1, 2)
    label_space: Optional[tuple] = None  # None: derived from node labels


@dataclass(frozen=True)
class TaskConfig:
    name: str
    datasets: tuple
    gold_attribute: str = "abstract"
    negative_ratio: float = 1.0
    max_candidates: int = 200


@dataclass(frozen=True)
class PipelineConfig:
    seed: int
    output_dir: str
    tokenizer: TokenizerConfig
    log_base: float
    datasets: dict
    selection: SelectionConfig
    token_budget: int
    template: DescriptionTemplate
    tasks: tuple
    package_ratio: tuple
    total_packages: int
    min_packages: int
    llm: LlmClientConfig

    def dataset(self, name: str) -> DatasetConfig:
        try:
            return self.datasets[name]
        except KeyError:
            raise ConfigError(f"unknown dataset {name!r}") from None

    def rng(self, *labels) -> random.Random:
        """RNG stream derived from the root seed and a component label."""
        return random.Random(":".join([str(self.seed), *map(str, labels)]))

    def config_hash(self) -> str:
        """Hash over the semantically relevant fields (output paths excluded)."""
        payload = {
            "seed": self.seed,
            "tokenizer": [self.tokenizer.mode, self.tokenizer.count_punctuation],
            "log_base": self.log_base,
            "token_budget": self.token_budget,
            "selection": [self.selection.neighbor_budget_fraction,
                          self.selection.max_walk_length, self.selection.max_walks,
                          self.selection.softmax_temperature, self.selection.rng_seed],
            "template": self.template.name,
            "datasets": {
                name: [d.nodes_path, d.edges_path, list(d.schema.attribute_fields),
                       d.schema.id_field, d.schema.label_field, d.schema.type_field,
                       d.schema.directed, list(d.split_ratios),
                       list(d.label_space) if d.label_space else None]
                for name, d in sorted(self.datasets.items())
            },
            "tasks": [[t.name, list(t.datasets), t.gold_attribute,
                       t.negative_ratio, t.max_candidates] for t in self.tasks],
            "package_ratio": list(self.package_ratio),
            "total_packages": self.total_packages,
            "min_packages": self.min_packages,
            "llm": [self.llm.mode, self.llm.endpoint, self.llm.model_name,
                    self.llm.temperature, self.llm.max_output_tokens],
        }
        blob = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _resolve(base_dir, path):
    return path if os.path.isabs(path) else os.path.join(base_dir, path)


def _parse_log_base(value) -> float:
    if value in ("e", None):
        return math.e
    base = float(value)
    if base <= 1:
        raise ConfigError(f"log_base must be > 1, got {base}")
    return base


def load_config(path) -> PipelineConfig:
    """Load and validate a pipeline config file."""
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a mapping")
    return config_from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))


def config_from_dict(data: dict, base_dir: str = ".") -> PipelineConfig:
    if "seed" not in data:
        raise ConfigError("config must declare an explicit seed")
    seed = int(data["seed"])

    tok = data.get("tokenizer", {})
    tokenizer = TokenizerConfig(mode=tok.get("mode", "unicode-words"),
                                count_punctuation=bool(tok.get("count_punctuation", True)))
    log_base = _parse_log_base(data.get("log_base", "e"))

    datasets = {}
    for name, spec in (data.get("datasets") or {}).items():
        schema_spec = spec.get("schema", {})
        schema = SchemaConfig(
            id_field=schema_spec.get("id_field", "id"),
            attribute_fields=tuple(schema_spec.get("attribute_fields", ("title",))),
            label_field=schema_spec.get("label_field"),
            type_field=schema_spec.get("type_field"),
            src_field=schema_spec.get("src_field", "src"),
            dst_field=schema_spec.get("dst_field", "dst"),
            relation_field=schema_spec.get("relation_field", "relation"),
            directed=bool(schema_spec.get("directed", False)),
        )
        nodes_path = _resolve(base_dir, spec["nodes"])
        edges_path = _resolve(base_dir, spec["edges"])
        for p in (nodes_path, edges_path):
            if not os.path.exists(p):
                raise ConfigError(f"dataset {name!r}: file not found: {p}")
        split_spec = spec.get("split", {"train": 7, "val": 1, "test": 2})
        ratios = (int(split_spec.get("train", 0)), int(split_spec.get("val", 0)),
                  int(split_spec.get("test", 0)))
        label_space = spec.get("label_space")
        datasets[name] = DatasetConfig(
            name=name, nodes_path=nodes_path, edges_path=edges_path, schema=schema,
            split_ratios=ratios,
            label_space=tuple(label_space) if label_space else None)

    sel = data.get("selection", {})
    selection = SelectionConfig(
        neighbor_budget_fraction=float(sel.get("neighbor_fraction", 0.5)),
        max_walk_length=int(sel.get("max_walk_length", 4)),
        max_walks=int(sel.get("max_walks", 8)),
        softmax_temperature=float(sel.get("softmax_temperature", 1.0)),
        rng_seed=seed,
    )
    token_budget = int(sel.get("token_budget", 256))

    template_spec = data.get("template", "default")
    if template_spec in ("default", None):
        template = DEFAULT_TEMPLATE
    else:
        tmpl_path = _resolve(base_dir, template_spec)
        if not os.path.exists(tmpl_path):
            raise ConfigError(f"template file not found: {tmpl_path}")
        template = DescriptionTemplate.from_file(tmpl_path)

    tasks = []
    for spec in data.get("tasks", []):
        name = spec["name"]
        if name not in TASKS:
            raise ConfigError(f"unknown task {name!r}; expected one of {TASKS}")
        task_datasets = tuple(spec.get("datasets", ()))
        for d in task_datasets:
            if d not in datasets:
                raise ConfigError(f"task {name!r} references unknown dataset {d!r}")
        tasks.append(TaskConfig(
            name=name, datasets=task_datasets,
            gold_attribute=spec.get("gold_attribute", "abstract"),
            negative_ratio=float(spec.get("negative_ratio", 1.0)),
            max_candidates=int(spec.get("max_candidates", 200))))

    ratio_spec = data.get("package_ratio", {})
    package_ratio = (int(ratio_spec.get("standard", 1000)), int(ratio_spec.get("cot", 100)))

    alloc = data.get("allocation", {})
    total_packages = int(alloc.get("total_packages", len(tasks) or 1))
    min_packages = int(alloc.get("min_packages", 1))

    llm_spec = data.get("llm", {})
    llm = LlmClientConfig(
        endpoint=llm_spec.get("endpoint", ""),
        model_name=llm_spec.get("model_name", "offline-stub"),
        temperature=float(llm_spec.get("temperature", 0.2)),
        max_output_tokens=int(llm_spec.get("max_output_tokens", 256)),
        mode=llm_spec.get("mode", "offline-stub"),
        timeout=float(llm_spec.get("timeout", 30.0)),
        max_retries=int(llm_spec.get("max_retries", 3)),
        backoff_base=float(llm_spec.get("backoff_base", 0.5)),
        backoff_cap=float(llm_spec.get("backoff_cap", 8.0)),
        api_key_env=llm_spec.get("api_key_env", "GRAPHINSTRUCT_API_KEY"),
    )

    output_dir = _resolve(base_dir, data.get("output_dir", "out"))
    return PipelineConfig(
        seed=seed, output_dir=output_dir, tokenizer=tokenizer, log_base=log_base,
        datasets=datasets, selection=selection, token_budget=token_budget,
        template=template, tasks=tuple(tasks), package_ratio=package_ratio,
        total_packages=total_packages, min_packages=min_packages, llm=llm)
