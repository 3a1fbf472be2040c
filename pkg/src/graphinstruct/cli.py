"""Command-line entry point.

Subcommands: ingest, describe, generate, split, eval. Every command is
driven by one declarative config file; identical config and seed produce
byte-identical outputs. Exit codes: 0 success, 1 validation error,
2 runtime error, 3 transport error.
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click

from . import pipeline
from .config import load_config
from .corpus import emit_jsonl, read_jsonl
from .energy import write_energies_jsonl
from .errors import (BudgetTooSmallError, ConfigError, GraphInstructError,
                     GraphLoadError, TransportError, UnknownNodeError)
from .metrics import metric_report
from .report import save_allocation_figure, save_metrics_figure

EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_TRANSPORT = 3


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ConfigError, GraphLoadError, UnknownNodeError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)
        except TransportError as exc:
            click.echo(f"transport error: {exc}", err=True)
            sys.exit(EXIT_TRANSPORT)
        except GraphInstructError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_RUNTIME)
    return wrapper


@click.group()
def main():
    """Compile attributed graphs into budgeted instruction-tuning corpora."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--dataset", required=True)
@click.option("--energies", "energies_path", type=click.Path(), default=None,
              help="Also export per-node energies as JSONL.")
@_handle_errors
def ingest(config_path, dataset, energies_path):
    """Load and validate one dataset; print node and edge counts."""
    cfg = load_config(config_path)
    ctx = pipeline.load_dataset(cfg, dataset)
    click.echo(f"{dataset}: {ctx.graph.num_nodes()} nodes, {ctx.graph.num_edges()} edges, "
               f"{len(ctx.label_space)} labels")
    if energies_path:
        n = write_energies_jsonl(ctx.energies, energies_path)
        click.echo(f"wrote {n} energy records to {energies_path}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--dataset", required=True)
@click.option("--nodes", "node_list", default=None,
              help="Comma-separated node ids; omit with --all for every node.")
@click.option("--all", "all_nodes", is_flag=True, default=False)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@_handle_errors
def describe(config_path, dataset, node_list, all_nodes, out_dir):
    """Render compact descriptions to <out>/descriptions.jsonl."""
    cfg = load_config(config_path)
    ctx = pipeline.load_dataset(cfg, dataset)
    if all_nodes:
        targets = sorted(ctx.graph.node_ids())
    elif node_list:
        targets = [n.strip() for n in node_list.split(",") if n.strip()]
    else:
        raise ConfigError("pass --nodes or --all")

    for nid in targets:
        if nid not in ctx.graph:
            raise UnknownNodeError(nid)

    out_dir = out_dir or cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    failures = []
    rows = []
    for nid in targets:
        try:
            desc = pipeline.describe_node(cfg, ctx, nid)
        except BudgetTooSmallError as exc:
            failures.append((nid, str(exc)))
            continue
        rows.append({"node": nid, "token_count": desc.token_count, "text": desc.text})

    path = os.path.join(out_dir, "descriptions.jsonl")
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True) + "\n")
    click.echo(f"wrote {len(rows)} descriptions to {path}")
    if failures:
        for nid, msg in failures:
            click.echo(f"error: {nid}: {msg}", err=True)
        sys.exit(EXIT_RUNTIME)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option("--figures/--no-figures", default=True,
              help="Render the allocation chart next to the JSON report.")
@_handle_errors
def generate(config_path, out_dir, figures):
    """Generate instruction packages plus an allocation report."""
    cfg = load_config(config_path)
    out_dir = out_dir or cfg.output_dir
    manifest = pipeline.generate_corpora(cfg, out_dir)
    if figures:
        counts = {tuple(key.split("/", 1)): n for key, n in manifest["plan"].items()}
        save_allocation_figure(counts, os.path.join(out_dir, "allocation.png"))
    click.echo(f"wrote {len(manifest['packages'])} packages to {out_dir} "
               f"(config hash {manifest['config_hash'][:12]})")


@main.command("split")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--dataset", required=True)
@click.option("--records", "records_path", type=click.Path(exists=True), default=None,
              help="Split this instruction JSONL instead of labeled node ids.")
@click.option("--out", "out_dir", type=click.Path(), default=None)
@_handle_errors
def split_cmd(config_path, dataset, records_path, out_dir):
    """Write train/val/test partitions for one dataset."""
    from .corpus import SplitSpec, split

    cfg = load_config(config_path)
    out_dir = out_dir or cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    names = ("train", "val", "test")
    if records_path:
        records = read_jsonl(records_path)
        spec = SplitSpec(ratios=cfg.dataset(dataset).split_ratios, seed=cfg.seed,
                         unit="record")
        parts = split(records, spec)
        for name, part in zip(names, parts):
            emit_jsonl(part, os.path.join(out_dir, f"{dataset}_{name}.jsonl"))
    else:
        ctx = pipeline.load_dataset(cfg, dataset)
        parts = pipeline.split_labeled_nodes(cfg, ctx)
        for name, part in zip(names, parts):
            with open(os.path.join(out_dir, f"{dataset}_{name}_ids.json"), "w",
                      encoding="utf-8") as fh:
                json.dump(part, fh, indent=2)
    click.echo(f"{dataset}: split sizes " + "/".join(str(len(p)) for p in parts))


@main.command("eval")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--predictions", "predictions_path", required=True,
              type=click.Path(exists=True), help='JSONL of {"id", "prediction"}.')
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True),
              help="Gold instruction JSONL with record ids.")
@click.option("--task", required=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--figures/--no-figures", default=True)
@_handle_errors
def eval_cmd(config_path, predictions_path, gold_path, task, out_path, figures):
    """Score predictions against gold outputs; emit a metric report."""
    cfg = load_config(config_path)
    out_path = out_path or os.path.join(cfg.output_dir, "metrics.json")
    os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)

    gold = {}
    for rec in read_jsonl(gold_path):
        if rec.task == task and rec.record_id is not None:
            gold[rec.record_id] = rec.output

    predictions = {}
    with open(predictions_path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                row = json.loads(line)
                predictions[row["id"]] = row["prediction"]

    matched = [(gold[i], predictions[i]) for i in sorted(gold) if i in predictions]
    unmatched_gold = sorted(set(gold) - set(predictions))
    unmatched_pred = sorted(set(predictions) - set(gold))
    if not matched:
        raise ConfigError("no prediction ids matched the gold records")
    for rid in unmatched_gold + unmatched_pred:
        click.echo(f"warning: unmatched id {rid}", err=True)

    report = metric_report(task, matched)
    payload = {
        "task": task,
        "pairs_scored": len(matched),
        "unmatched_gold": len(unmatched_gold),
        "unmatched_predictions": len(unmatched_pred),
        "metrics": report,
    }
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
    if figures:
        figure_path = os.path.splitext(out_path)[0] + ".png"
        save_metrics_figure(report, figure_path, title=f"{task} metrics")
    for name, value in report.items():
        click.echo(f"{name}: {value:.4f}")


if __name__ == "__main__":
    main()
