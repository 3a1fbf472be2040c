"""End-to-end orchestration shared by the CLI subcommands."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from . import instruct
from .allocate import ComplexityProfile, allocation_plan, dataset_complexity, task_complexity
from .config import PipelineConfig, TaskConfig
from .corpus import SplitSpec, emit_jsonl, split
from .description import TemplateCoster, render_description
from .energy import compute_energies
from .errors import BudgetTooSmallError, InsufficientRecordsError
from .graph import load_graph
from .selection import allocate_multi_node_budget, select_for_target


@dataclass
class DatasetContext:
    name: str
    config: object
    graph: object
    energies: dict
    label_space: tuple


def load_dataset(cfg: PipelineConfig, name: str) -> DatasetContext:
    ds = cfg.dataset(name)
    graph = load_graph(ds.nodes_path, ds.edges_path, ds.schema, dataset_name=name)
    energies = compute_energies(graph, cfg.tokenizer, cfg.log_base)
    label_space = ds.label_space
    if label_space is None:
        labels = sorted({graph.node(n).label for n in graph.node_ids()
                         if graph.node(n).label is not None})
        label_space = tuple(labels)
    return DatasetContext(name=name, config=ds, graph=graph, energies=energies,
                          label_space=label_space)


def describe_node(cfg: PipelineConfig, ctx: DatasetContext, target: str,
                  token_limit=None, template=None):
    """Select and render one compact description under the token budget."""
    template = template or cfg.template
    limit = cfg.token_budget if token_limit is None else token_limit
    coster = TemplateCoster(ctx.graph, target, template, cfg.tokenizer)
    neighbors, walks = select_for_target(ctx.graph, ctx.energies, target, limit,
                                         cfg.selection, coster)
    return render_description(ctx.graph, target, neighbors, walks, template, cfg.tokenizer)


def describe_nodes(cfg: PipelineConfig, ctx: DatasetContext, node_ids):
    """Descriptions for many nodes; yields (node-id, CompactDescription)."""
    for nid in node_ids:
        yield nid, describe_node(cfg, ctx, nid)


def _labeled_nodes(ctx: DatasetContext):
    return [n for n in sorted(ctx.graph.node_ids()) if ctx.graph.node(n).label is not None]


def _node_type(ctx: DatasetContext, node_id: str) -> str:
    return ctx.graph.node(node_id).node_type


def _classification_candidates(cfg, ctx, task: TaskConfig):
    nodes = _labeled_nodes(ctx)
    cfg.rng("candidates", task.name, ctx.name).shuffle(nodes)
    records = []
    for nid in nodes[:task.max_candidates]:
        desc = describe_node(cfg, ctx, nid)
        node = ctx.graph.node(nid)
        records.append(instruct.render_standard(
            instruct.NODE_CLASSIFICATION, ctx.name, desc,
            answer=node.label, label_space=ctx.label_space,
            node_type=node.node_type,
            record_id=f"{task.name}:{ctx.name}:{nid}"))
    return records


def _pair_descriptions(cfg, ctx, a, b):
    """Split the token budget over a node pair by softmax over energies."""
    budgets = allocate_multi_node_budget(
        [ctx.energies[a], ctx.energies[b]], cfg.token_budget,
        cfg.selection.softmax_temperature)
    ordered = sorted([a, b])  # budgets follow ascending node id
    by_node = dict(zip(ordered, budgets if ordered == [a, b] else reversed(budgets)))
    return (describe_node(cfg, ctx, a, token_limit=by_node[a]),
            describe_node(cfg, ctx, b, token_limit=by_node[b]))


def _link_candidates(cfg, ctx, task: TaskConfig):
    positives = sorted({tuple(sorted((e.src, e.dst))) for e in ctx.graph.edges
                        if e.src != e.dst})
    cfg.rng("candidates", task.name, ctx.name).shuffle(positives)
    max_pos = max(1, int(task.max_candidates / (1.0 + task.negative_ratio)))
    positives = positives[:max_pos]
    negatives = instruct.sample_negative_pairs(
        ctx.graph, sorted(ctx.graph.node_ids()),
        int(len(positives) * task.negative_ratio),
        cfg.seed, label=f"negatives:{ctx.name}")

    records = []
    for pairs, answer in ((positives, "yes"), (negatives, "no")):
        for a, b in pairs:
            try:
                descs = _pair_descriptions(cfg, ctx, a, b)
            except BudgetTooSmallError:
                continue  # budget share too small for this pair's boilerplate
            records.append(instruct.render_standard(
                instruct.LINK_PREDICTION, ctx.name, descs, answer=answer,
                node_type=_node_type(ctx, a),
                record_id=f"{task.name}:{ctx.name}:{a}--{b}"))
    return records


def _graph_to_text_candidates(cfg, ctx, task: TaskConfig):
    gold_field = task.gold_attribute
    template = cfg.template.without_attribute(gold_field, ctx.config.schema.attribute_fields)
    nodes = [n for n in sorted(ctx.graph.node_ids())
             if ctx.graph.node(n).attributes.get(gold_field)]
    cfg.rng("candidates", task.name, ctx.name).shuffle(nodes)
    records = []
    for nid in nodes[:task.max_candidates]:
        desc = describe_node(cfg, ctx, nid, template=template)
        node = ctx.graph.node(nid)
        records.append(instruct.render_standard(
            instruct.GRAPH_TO_TEXT, ctx.name, desc,
            answer=node.attributes[gold_field], node_type=node.node_type,
            gold_field=gold_field, record_id=f"{task.name}:{ctx.name}:{nid}"))
    return records


_CANDIDATE_BUILDERS = {
    instruct.NODE_CLASSIFICATION: _classification_candidates,
    instruct.LINK_PREDICTION: _link_candidates,
    instruct.GRAPH_TO_TEXT: _graph_to_text_candidates,
}


def _cot_records(cfg, task: TaskConfig, dataset: str, standard_records):
    prompts = []
    for rec in standard_records:
        prompts.append(instruct.render_cot_prompt(
            task.name, dataset, rec.input, rec.output,
            gold_field=task.gold_attribute))
    bodies = [instruct.distill_cot(p, cfg.llm) for p in prompts]
    records = []
    for rec, body in zip(standard_records, bodies):
        instruction = instruct.cot_instruction(task.name, dataset, rec.output,
                                               gold_field=task.gold_attribute)
        records.append(instruct.InstructionRecord(
            task=rec.task, dataset=rec.dataset, kind=instruct.KIND_COT,
            instruction=instruction, input=rec.input, output=body,
            record_id=f"cot:{rec.record_id}"))
    return records


def generate_corpora(cfg: PipelineConfig, out_dir=None) -> dict:
    """Run the full generation pipeline; returns the manifest dict.

    Builds standard candidates per (task, dataset), derives the
    complexity-driven allocation plan, fills each pair's packages at the
    configured standard:CoT ratio, and writes package JSONL files plus a
    machine-readable manifest.
    """
    out_dir = out_dir or cfg.output_dir
    packages_dir = os.path.join(out_dir, "packages")
    os.makedirs(packages_dir, exist_ok=True)

    contexts = {}
    candidates = {}
    pairs = []
    for task in cfg.tasks:
        for dataset in task.datasets:
            if dataset not in contexts:
                contexts[dataset] = load_dataset(cfg, dataset)
            ctx = contexts[dataset]
            records = _CANDIDATE_BUILDERS[task.name](cfg, ctx, task)
            if not records:
                raise InsufficientRecordsError(
                    f"no gold material for {task.name} on {dataset}")
            candidates[(task.name, dataset)] = (task, records)
            pairs.append((task.name, dataset))

    profile = ComplexityProfile(
        task_complexity={p: task_complexity(recs, cfg.tokenizer)
                         for p, (_, recs) in candidates.items()},
        dataset_complexity={name: dataset_complexity(ctx.energies)
                            for name, ctx in contexts.items()})
    plan = allocation_plan(profile, pairs, cfg.total_packages, cfg.min_packages)

    s, c = cfg.package_ratio
    manifest_packages = []
    for pair in sorted(pairs):
        task, records = candidates[pair]
        count = plan.counts[pair]
        need_std, need_cot = count * s, count * c
        if len(records) < need_std:
            raise InsufficientRecordsError(
                f"{pair}: need {need_std} standard records, have {len(records)}; "
                f"raise max_candidates or lower the package ratio")
        std_records = records[:need_std]
        cot_records = _cot_records(cfg, task, pair[1], std_records[:need_cot])
        packages = instruct.assemble_packages(std_records, cot_records, (s, c),
                                              seed=f"{cfg.seed}:{pair[0]}:{pair[1]}")
        for i, package in enumerate(packages):
            fname = f"{pair[0]}__{pair[1]}__pkg{i:03d}.jsonl"
            emit_jsonl(package.records, os.path.join(packages_dir, fname))
            manifest_packages.append({
                "task": pair[0], "dataset": pair[1], "file": f"packages/{fname}",
                "standard": package.standard_count, "cot": package.cot_count,
            })

    manifest = {
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "package_ratio": [s, c],
        "plan": {f"{t}/{d}": n for (t, d), n in sorted(plan.counts.items())},
        "total_packages": plan.total,
        "uniform_fallback": plan.uniform_fallback,
        "packages": manifest_packages,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, ensure_ascii=False)
    with open(os.path.join(out_dir, "allocation.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest["plan"], fh, indent=2, sort_keys=True)
    return manifest


def split_labeled_nodes(cfg: PipelineConfig, ctx: DatasetContext):
    """Node-level split over labeled nodes, per the dataset's ratios."""
    spec = SplitSpec(ratios=ctx.config.split_ratios, seed=cfg.seed, unit="node")
    return split(_labeled_nodes(ctx), spec)
