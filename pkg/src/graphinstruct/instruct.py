"""Instruction records: standard templates, CoT prompts, and packaging.

Standard records carry the gold answer verbatim; CoT records carry an
explanation of a known answer obtained from an external text-generation
service, or from a deterministic offline stub when no service is
available. Records are bundled into packages at a fixed standard:CoT
ratio, one package stream per (task, dataset) pair.
"""

from __future__ import annotations

import os
import random
import re
import time
from dataclasses import dataclass
from typing import Optional

from .errors import InsufficientCotError, TransportError

NODE_CLASSIFICATION = "node_classification"
LINK_PREDICTION = "link_prediction"
GRAPH_TO_TEXT = "graph_to_text"
TASKS = (NODE_CLASSIFICATION, LINK_PREDICTION, GRAPH_TO_TEXT)

KIND_STANDARD = "standard"
KIND_COT = "cot"

DEFAULT_PACKAGE_RATIO = (1000, 100)


@dataclass(frozen=True)
class InstructionRecord:
    task: str
    dataset: str
    kind: str
    instruction: str
    input: str
    output: str
    record_id: Optional[str] = None


@dataclass(frozen=True)
class InstructionPackage:
    records: tuple
    standard_count: int
    cot_count: int
    ratio_config: tuple


@dataclass(frozen=True)
class LlmClientConfig:
    endpoint: str = ""
    model_name: str = "offline-stub"
    temperature: float = 0.2
    max_output_tokens: int = 256
    mode: str = "offline-stub"  # "remote" or "offline-stub"
    timeout: float = 30.0
    max_retries: int = 3
    backoff_base: float = 0.5
    backoff_cap: float = 8.0
    api_key_env: str = "GRAPHINSTRUCT_API_KEY"

    def __post_init__(self):
        if self.mode not in ("remote", "offline-stub"):
            raise ValueError(f"unknown LLM client mode: {self.mode!r}")
        if self.mode == "remote" and not self.endpoint:
            raise ValueError("remote mode requires an endpoint")


def _label_list(label_space) -> str:
    return "[" + ", ".join(label_space) + "]"


def render_standard(task, dataset, descriptions, *, answer=None, label_space=None,
                    node_type="NODE", gold_field="abstract",
                    record_id=None) -> InstructionRecord:
    """Build one standard (instruction, input, output) record.

    ``descriptions`` is a single compact description for node
    classification and graph-to-text, or a pair for link prediction. The
    output is always the gold answer verbatim.
    """
    if answer is None:
        raise ValueError(f"{task}: gold answer is required for standard records")

    if task == NODE_CLASSIFICATION:
        if not label_space:
            raise ValueError("node_classification requires a non-empty label space")
        if answer not in label_space:
            raise ValueError(f"gold label {answer!r} is not in the label space")
        instruction = (
            f"Given the target {node_type} with the compact graph description in the "
            f"{dataset} dataset, which of the following categories does this {node_type} "
            f"belong to: {_label_list(label_space)}. Directly give the most likely "
            f"category of this {node_type}."
        )
        input_text = descriptions.text
    elif task == LINK_PREDICTION:
        first, second = descriptions
        if answer not in ("yes", "no"):
            raise ValueError('link_prediction answer must be "yes" or "no"')
        instruction = (
            f"Given the compact graph descriptions of {node_type} 1 and {node_type} 2 "
            f"in the {dataset} dataset. If the connection between the {node_type}s "
            f"represents the relationship between them, are they connected? "
            f'Give me a direct answer of "yes" or "no".'
        )
        input_text = first.text + "\n" + second.text
    elif task == GRAPH_TO_TEXT:
        instruction = (
            f"Given the target {node_type} in the {dataset} dataset with the compact "
            f"graph description. Please generate the target {node_type}'s {gold_field} "
            f"from the compact graph description."
        )
        input_text = descriptions.text
    else:
        raise ValueError(f"unknown task: {task!r}")

    return InstructionRecord(task=task, dataset=dataset, kind=KIND_STANDARD,
                             instruction=instruction, input=input_text,
                             output=answer, record_id=record_id)


def cot_instruction(task, dataset, gold_answer, *, node_type="NODE",
                    gold_field="abstract") -> str:
    """CoT request text for one task: explain a known gold answer."""
    if task == NODE_CLASSIFICATION:
        request = (
            f"Given the classification of the target {node_type} with category "
            f"{gold_answer} in the {dataset} dataset, give your explanation based on "
            f"the provided compact graph description. Focus your analysis on "
            f"elucidating the reasons behind this classification in a clear "
            f"Chain of Thought. Keep the analysis brief and to the point."
        )
    elif task == LINK_PREDICTION:
        request = (
            f"Given the established link between {node_type} 1 and {node_type} 2 in "
            f"the {dataset} dataset, give your explanation based on the provided "
            f"compact graph descriptions. Focus your analysis on elucidating the "
            f"reasons behind this link in a clear Chain of Thought. "
            f"Keep the analysis brief and to the point."
        )
    elif task == GRAPH_TO_TEXT:
        request = (
            f"Given the generated {gold_field} of the target {node_type} in the "
            f"{dataset} dataset. Please use the provided compact graph description to "
            f"examine how these elements influenced the generation of the {gold_field} "
            f"with a clear Chain of Thought (CoT). Keep the CoT brief and to the point."
            f"\nThe {gold_field} reads: {gold_answer}"
        )
    else:
        raise ValueError(f"unknown task: {task!r}")
    return request


def render_cot_prompt(task, dataset, input_text, gold_answer, *,
                      node_type="NODE", gold_field="abstract") -> str:
    """Full prompt for the distilling model: description plus CoT request."""
    return input_text + "\n" + cot_instruction(task, dataset, gold_answer,
                                               node_type=node_type,
                                               gold_field=gold_field)


_EGO_FIRST_RE = re.compile(r"Ego graph nodes: \{1\. [^:\[]+: \[([^,\]]+)")
_ATTR_FIRST_RE = re.compile(r"listed as follows: [^:{]+: ([^.\n]+)\.")


def _stub_completion(prompt: str) -> str:
    """Deterministic CoT body derived only from fields found in the prompt."""
    match = _EGO_FIRST_RE.search(prompt)
    concept = match.group(1) if match else None
    if concept is None:
        match = _ATTR_FIRST_RE.search(prompt)
        concept = match.group(1) if match else "the target"
    return (
        "The CoT for this generation is as follows: "
        f"1. Identify main concept: {concept}. "
        f"2. Relate structure: the compact graph description connects {concept} "
        "with the target through the listed neighbors and walks. "
        "3. Conclude: these elements jointly support the given answer."
    )


def _extract_completion(data) -> Optional[str]:
    if isinstance(data, dict):
        if isinstance(data.get("text"), str):
            return data["text"]
        choices = data.get("choices")
        if isinstance(choices, list) and choices:
            first = choices[0]
            if isinstance(first, dict):
                if isinstance(first.get("text"), str):
                    return first["text"]
                message = first.get("message")
                if isinstance(message, dict) and isinstance(message.get("content"), str):
                    return message["content"]
    return None


def distill_cot(prompt: str, client: LlmClientConfig) -> str:
    """Obtain a CoT body for ``prompt`` via the configured client.

    Remote mode posts one JSON request and retries transient transport
    failures with capped exponential backoff before surfacing them.
    """
    if client.mode == "offline-stub":
        return _stub_completion(prompt)

    import requests

    headers = {}
    api_key = os.environ.get(client.api_key_env)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    body = {
        "model": client.model_name,
        "prompt": prompt,
        "temperature": client.temperature,
        "max_tokens": client.max_output_tokens,
    }
    last_error = None
    for attempt in range(client.max_retries + 1):
        if attempt:
            time.sleep(min(client.backoff_base * 2 ** (attempt - 1), client.backoff_cap))
        try:
            resp = requests.post(client.endpoint, json=body, headers=headers,
                                 timeout=client.timeout)
            resp.raise_for_status()
            completion = _extract_completion(resp.json())
            if not completion:
                raise TransportError("empty completion from remote endpoint")
            return completion
        except TransportError:
            raise
        except Exception as exc:  # connection/timeout/HTTP/JSON errors
            last_error = exc
    raise TransportError(f"remote request failed after {client.max_retries + 1} "
                         f"attempts: {last_error}")


def assemble_packages(standard, cot, ratio=DEFAULT_PACKAGE_RATIO, seed=0) -> list:
    """Bundle records into packages of exactly ``ratio`` standard:CoT.

    Both lists are shuffled with the seed before packing. A final partial
    package keeps leftover standard records together with CoT records at
    the floor of the configured proportion; surplus CoT records beyond
    that proportion are left out.
    """
    s, c = ratio
    if s <= 0:
        raise ValueError("standard count per package must be positive")
    if c < 0:
        raise ValueError("cot count per package must be non-negative")
    keys = {(r.task, r.dataset) for r in list(standard) + list(cot)}
    if len(keys) > 1:
        raise ValueError(f"packages must not mix (task, dataset) pairs: {sorted(keys)}")
    if c > 0 and standard and not cot:
        raise InsufficientCotError("ratio requires CoT records but none were provided")

    std = list(standard)
    cots = list(cot)
    random.Random(f"{seed}:packages:standard").shuffle(std)
    random.Random(f"{seed}:packages:cot").shuffle(cots)

    full = len(std) // s
    if c > 0:
        full = min(full, len(cots) // c)

    packages = []
    for i in range(full):
        records = tuple(std[i * s:(i + 1) * s]) + tuple(cots[i * c:(i + 1) * c])
        packages.append(InstructionPackage(records=records, standard_count=s,
                                           cot_count=c, ratio_config=(s, c)))
    rem_std = std[full * s:]
    if rem_std:
        n_cot = min(len(cots) - full * c, len(rem_std) * c // s)
        records = tuple(rem_std) + tuple(cots[full * c:full * c + n_cot])
        packages.append(InstructionPackage(records=records, standard_count=len(rem_std),
                                           cot_count=n_cot, ratio_config=(s, c)))
    return packages


def sample_negative_pairs(graph, candidates, count, seed, label="negatives") -> list:
    """Seeded uniform non-edge (a, b) pairs among ``candidates``."""
    rng = random.Random(f"{seed}:{label}")
    pool = list(candidates)
    if len(pool) < 2:
        return []
    pairs = []
    seen = set()
    attempts = 0
    limit = max(1000, count * 100)
    while len(pairs) < count and attempts < limit:
        attempts += 1
        a, b = rng.sample(pool, 2)
        key = (min(a, b), max(a, b))
        if key in seen or graph.has_edge(a, b):
            continue
        seen.add(key)
        pairs.append((a, b))
    return pairs
